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
#include <string>
#include <vector>

#include "premlog/analysis.hpp"
#include "premlog/ast.hpp"
#include "premlog/foreign.hpp"
#include "premlog/relation.hpp"

namespace premlog {

class EvalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StratumStats {
    std::string predicates;
    size_t iterations = 0;
    size_t derivationsAttempted = 0;
    bool pushed = false;
    bool capExceeded = false;
};

struct FixpointStats {
    size_t iterations = 0;            // fixpoint rounds, summed over strata
    size_t derivationsAttempted = 0;  // complete rule-body matches
    size_t tuplesRetained = 0;        // derived tuples in the final interpretation
    double wallMs = 0.0;
    std::vector<StratumStats> perStratum;
};

struct EvalOptions {
    size_t cap = 10000;
    const ForeignRegistry* foreigns = nullptr;
};

struct EvalResult {
    Interpretation interp;
    FixpointStats stats;
    bool capExceeded = false; // interp is partial when set
};

/// Per-stratum naive iterated fixpoint; aggregates inside a pushed SCC are
/// evaluated with the stratified (perfect-model) semantics: constraints
/// stripped, gamma applied once when the stratum converges.
EvalResult evalStratified(const StratifiedProgram& sp, const Interpretation& edb,
                          const EvalOptions& opts = {});

/// As evalStratified but differential: each recursive derivation joins at
/// least one delta atom. Final interpretation equals evalStratified's.
EvalResult evalSeminaive(const StratifiedProgram& sp, const Interpretation& edb,
                         const EvalOptions& opts = {});

/// Semi-naive fixpoint where pushed SCCs maintain per-group extrema: a tuple
/// is admitted only if it improves (or ties) its group; improvements evict
/// dominated incumbents and join the next delta.
EvalResult evalConstrained(const StratifiedProgram& sp, const Interpretation& edb,
                           const EvalOptions& opts = {});

/// I united with the one-step consequences of the given rules over I.
Interpretation applyT(const Program& env, const std::vector<Rule>& rules, const Interpretation& I,
                      const ForeignRegistry* foreigns = nullptr);

/// Raw one-step consequences restricted to one head predicate (no union with
/// I, no constraint applied). Used by the runtime certifier.
Relation oneStepConsequences(const Program& env, const std::vector<Rule>& rules,
                             const Interpretation& I, SymId pred,
                             const ForeignRegistry* foreigns = nullptr);

enum class QueryMode { Stratified, Pushed, Auto };

/// Shared front half of the query pipeline: config substitution, condition
/// inlining, aggregate pushing (auto: gated on the PreM classification;
/// pushed: unconditional), and query-constant handling (radical constant
/// push, falling back to the demand rewrite).
struct PreparedProgram {
    Program program;
    std::vector<std::string> notes;
};

PreparedProgram prepareForEvaluation(const Program& p, const std::optional<Atom>& query,
                                     QueryMode mode);

/// EDB plus the program's inline facts (set semantics).
Interpretation mergeProgramFacts(const Interpretation& edb, const Program& p);

struct QueryOutcome {
    Relation result;
    Interpretation interp;
    FixpointStats stats;
    bool capExceeded = false;
    Program effectiveProgram;      // after config/inline/push/demand rewrites
    std::vector<std::string> notes; // applied rewrites, classification summary
};

/// Full pipeline: analyze, rewrite (auto: push aggregates when the verdict is
/// full/intrinsic; push the query constant when radical, otherwise demand-
/// rewrite), evaluate, and select the tuples matching the query's bound
/// arguments.
QueryOutcome evalQuery(const Program& p, const Interpretation& edb,
                       const std::optional<Atom>& query, QueryMode mode,
                       const EvalOptions& opts = {});

struct MlRun {
    // model vectors by iteration index J = 0..T
    std::vector<std::vector<double>> models;
    // E_J by iteration (from stats(J, E, G))
    std::vector<double> errors;
    bool converged = false; // last error <= delta
    FixpointStats stats;
};

MlRun runMlProgram(const Program& p, const Interpretation& edb, const EvalOptions& opts);

class NonConvergence : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runs a temporal-style and a pushed-style training program to their
/// stopping conditions; true iff the final models agree componentwise within
/// tol. Throws NonConvergence when either run never reaches E <= delta.
bool mlTemplateEquivalence(const Program& temporal, const Program& pushed,
                           const Interpretation& edb, const EvalOptions& opts, double tol = 1e-9);

} // namespace premlog
