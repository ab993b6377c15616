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

#include <string>
#include <vector>

#include "premlog/analysis.hpp"
#include "premlog/ast.hpp"

namespace premlog {

class RewriteError : public AnalysisError {
    using AnalysisError::AnalysisError;
};

class NotPushable : public RewriteError {
    using RewriteError::RewriteError;
};

class NotRadical : public RewriteError {
    using RewriteError::RewriteError;
};

class DemandNotDerivable : public RewriteError {
    using RewriteError::RewriteError;
};

/// An extremum constraint viewed per group: keeps, for each group key, the
/// tuples attaining the group extremum (all ties kept).
struct ConstraintGamma {
    SymId predicate;
    AggregateSpec spec;
};

enum class PremVerdict : uint8_t { Full, Intrinsic, Radical, Unknown };

const char* premVerdictText(PremVerdict v);

struct PremClass {
    PremVerdict verdict = PremVerdict::Unknown;
    std::string evidence;

    /// i-PreM is a special case of PreM; both license pushing.
    bool premappable() const {
        return verdict == PremVerdict::Full || verdict == PremVerdict::Intrinsic;
    }
};

/// Static monotonicity analysis of one recursive rule against gamma.
///
/// `full` when the head's aggregated value is a linear, positively-weighted
/// function of the recursive atom's aggregated argument whose co-arguments
/// are sign-constrained via column declarations; `intrinsic` when the head
/// value does not depend on that argument at all (including rules with no
/// recursive body atom); `unknown` otherwise — never an unsafe `full` guess.
PremClass classifyPrem(const Program& p, const Rule& rule, const ConstraintGamma& gamma);

/// Aggregate rules eligible for pushAggregate: rule indexes of higher-stratum
/// extremum rules whose body is a single atom over a recursive predicate.
std::vector<size_t> pushableAggregateRules(const StratifiedProgram& sp);

/// The r1.x -> r2.x transformation: copies the aggregate onto every head of
/// the body predicate's SCC (group-by adjusted by variable correspondence)
/// and turns the aggregate rule into a plain projection.
Program pushAggregate(const StratifiedProgram& sp, size_t aggRuleIdx);

struct ConstantBinding {
    SymId predicate;
    size_t argIdx;
    Term constant;
};

struct ConstantPushResult {
    Program program;
    PremVerdict verdict = PremVerdict::Radical;
    std::vector<std::string> notes;          // r-PreM justification trail
    std::vector<std::string> rewrittenRules; // specialized exit rules, pretty-printed
};

/// Pushes a constant selection toward exit rules (r-PreM). The selection is
/// applied to exit rules only; recursive rules stay untouched. Throws
/// NotRadical when the bound position is modified inside the recursion.
ConstantPushResult pushConstant(const Program& p, const ConstantBinding& binding);

/// Adds a demand predicate seeded by the query's bound arguments, one demand
/// propagation rule per recursive rule, and guards every rule of the SCC
/// with the demand atom (restricted magic sets). Throws DemandNotDerivable
/// when the child binding cannot be computed from bound variables or the
/// closure is not provably finite.
Program demandRewrite(const Program& p, const Atom& query);

} // namespace premlog
