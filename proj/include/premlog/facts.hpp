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

#include <filesystem>
#include <stdexcept>

#include "premlog/ast.hpp"
#include "premlog/relation.hpp"

namespace premlog {

class FactError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loads one tuple per line from a TSV (default) or CSV file; duplicates
/// collapse under set semantics. Cell types follow the declared schema;
/// vec cells are comma-separated reals, optionally bracketed.
Relation loadFacts(const std::filesystem::path& path, SymId predicate,
                   const std::vector<ColumnDecl>& schema);

/// Loads <dir>/<pred>.tsv or <dir>/<pred>.csv for every declared fact
/// predicate that has no rules; missing files yield empty relations.
/// Inline program facts are merged in as well.
Interpretation loadFactDir(const Program& p, const std::filesystem::path& dir);

/// Interpretation from inline program facts only.
Interpretation factsOf(const Program& p);

} // namespace premlog
