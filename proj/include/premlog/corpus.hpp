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
#include <string>
#include <vector>

#include <json.hpp>

#include "premlog/certify.hpp"
#include "premlog/engine.hpp"

namespace premlog {

/// A shipped case study: program, fact files, query, expectations and the
/// oracle that regenerates its golden output.
struct CorpusCase {
    std::string name;
    std::filesystem::path dir;
    Program program;
    Interpretation edb;
    std::optional<Atom> query;
    QueryMode mode = QueryMode::Auto;
    size_t cap = 10000;
    std::string oracle;     // floyd_warshall | coin_change | knn | gradient_descent | none
    SymId outputPredicate;  // relation compared against golden/oracle
    nlohmann::json meta;
};

struct CaseResult {
    Relation result;   // output predicate (query-filtered when a query exists)
    FixpointStats stats;
    CertificationReport cert;
    bool capExceeded = false;
};

std::vector<std::string> listCases(const std::filesystem::path& corpusRoot);

CorpusCase loadCase(const std::filesystem::path& corpusRoot, const std::string& name);

/// End-to-end pipeline for one case: evaluate (per the case's mode) and
/// runtime-certify. The result relation is the case's output predicate,
/// restricted to the query binding when the case has one.
CaseResult runCase(const std::filesystem::path& corpusRoot, const std::string& name);

/// Ground truth for a case via its named oracle.
Relation runOracle(const std::filesystem::path& corpusRoot, const std::string& name);

/// The shipped golden output, parsed as tuples of the output predicate.
Relation loadGolden(const CorpusCase& c);

} // namespace premlog
