// Copyright 2026 The Premlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "premlog/symbols.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace premlog {

namespace {

// Process-wide interner. Ids are positions in a stable deque.
struct SymbolTable {
    std::shared_mutex mutex;
    std::deque<std::string> names;
    std::unordered_map<std::string_view, SymId> ids;

    SymId intern(std::string_view text) {
        {
            std::shared_lock lock(mutex);
            auto it = ids.find(text);
            if (it != ids.end()) return it->second;
        }
        std::unique_lock lock(mutex);
        auto it = ids.find(text);
        if (it != ids.end()) return it->second;
        names.emplace_back(text);
        SymId id = static_cast<SymId>(names.size() - 1);
        ids.emplace(std::string_view(names.back()), id);
        return id;
    }

    const std::string& name(SymId id) {
        std::shared_lock lock(mutex);
        return names[id];
    }
};

SymbolTable& table() {
    static SymbolTable t;
    return t;
}

} // namespace

SymId intern(std::string_view text) {
    return table().intern(text);
}

const std::string& symName(SymId id) {
    return table().name(id);
}

int symCompare(SymId a, SymId b) {
    if (a == b) return 0;
    return symName(a).compare(symName(b)) < 0 ? -1 : 1;
}

} // namespace premlog
