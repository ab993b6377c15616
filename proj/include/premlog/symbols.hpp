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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace premlog {

/// Interned identifier for predicate names, symbols and variable names.
using SymId = uint32_t;

/// Interns a string, returning a stable id for the process lifetime.
SymId intern(std::string_view text);

/// Name of an interned symbol.
const std::string& symName(SymId id);

/// Compares two symbols by name (not by id), for deterministic output.
int symCompare(SymId a, SymId b);

} // namespace premlog
