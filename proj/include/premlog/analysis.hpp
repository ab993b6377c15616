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

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "premlog/ast.hpp"

namespace premlog {

class AnalysisError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NotStratifiable : public AnalysisError {
    using AnalysisError::AnalysisError;
};

class InliningCycle : public AnalysisError {
    using AnalysisError::AnalysisError;
};

enum class Polarity : uint8_t { Positive, Negative, Aggregated };

const char* polarityText(Polarity p);

struct PredicateGraph {
    std::set<SymId> nodes;
    // (body predicate, head predicate, polarity), one edge per occurrence class
    std::set<std::tuple<SymId, SymId, Polarity>> edges;
};

PredicateGraph buildGraph(const Program& p);

struct Stratum {
    std::vector<SymId> predicates;      // lexicographically sorted
    std::vector<size_t> exitRules;      // indexes into program.rules
    std::vector<size_t> recursiveRules; // indexes into program.rules
    bool sccFlag = false;               // true for a genuine recursive component
    bool pushed = false;                // extremum aggregate constrains this SCC

    bool containsPred(SymId p) const;
};

struct StratifiedProgram {
    Program program;
    std::vector<Stratum> strata; // topological order, IDB components only
    std::vector<SymId> edbPredicates;
    // (stratum index, rule index, spec) for every aggregate inside recursion
    std::vector<std::tuple<size_t, size_t, AggregateSpec>> aggInRecursion;

    /// Constrained predicates of a pushed stratum with their specs.
    std::vector<std::pair<SymId, AggregateSpec>> constraintsOf(size_t stratumIdx) const;
    std::optional<size_t> stratumOf(SymId pred) const;
};

/// Topologically ordered SCC strata (Tarjan, lexicographic tie-break).
/// Rejects negation inside an SCC and any non-extremum aggregate inside an
/// SCC; extremum aggregates inside an SCC are accepted and flag it `pushed`.
StratifiedProgram stratify(const PredicateGraph& g, const Program& p);

/// Partitions each stratum's rules into exit and recursive rules.
StratifiedProgram& classifyRules(StratifiedProgram& sp);

/// Expands condition predicates (rules whose bodies bottom out in builtins
/// only) at every positive call site, one expanded rule per alternative, and
/// removes the condition predicates.
Program inlineConditionRules(const Program& p);

struct SafetyViolation {
    size_t ruleIdx;
    SymId variable;
    std::string reason;
};

/// Standard safety, applied after condition-rule inlining. With a query
/// given, head variables at bound query positions count as bound (demand
/// mode; see the demand rewrite).
std::vector<SafetyViolation> safetyCheck(const Program& p,
                                         const std::optional<Atom>& demandQuery = std::nullopt);

/// Replaces bare variable/symbol occurrences of config names in rule bodies
/// with their configured constants.
Program substituteConfig(const Program& p);

/// substituteConfig + inlineConditionRules + buildGraph + stratify +
/// classifyRules; throws AnalysisError on undefined predicates or safety
/// violations (safety is skipped for the query predicate's bound positions).
StratifiedProgram analyzeProgram(const Program& p,
                                 const std::optional<Atom>& query = std::nullopt,
                                 bool enforceSafety = true);

} // namespace premlog
