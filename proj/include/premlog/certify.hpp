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

#include "premlog/engine.hpp"
#include "premlog/prem.hpp"

namespace premlog {

struct IterationRecord {
    size_t iter = 0;
    bool fullOk = true;      // gamma(T(I)) = gamma(T(gamma(I)))
    bool intrinsicOk = true; // T(I) = T(gamma(I))
    bool radicalOk = true;   // gamma(T(I)) = T(gamma(I))
    // Lexicographically smallest tuple of the full identity's symmetric
    // difference, set when fullOk is false.
    std::optional<Tuple> witness;
};

struct CertificationReport {
    bool hasConstraint = false;
    SymId predicate = 0;
    std::vector<IterationRecord> perIteration;
    bool baselineTerminated = false;
    std::optional<bool> equal; // gamma(baseline fixpoint) vs constrained fixpoint
    std::string explanation;   // set when equal=true despite violations
    std::string note;          // informational (e.g. "no aggregate constraints")

    bool anyViolation() const {
        for (const auto& r : perIteration)
            if (!r.fullOk) return true;
        return false;
    }
};

/// Evaluates the PreM identities at one interpretation. T is the one-step
/// consequence operator of the SCC's recursive rules; the comparison is
/// restricted to the constrained predicate (the identities concern the
/// result returned in the constrained head).
IterationRecord certifyStep(const Program& env, const std::vector<Rule>& recursiveRules,
                            const ConstraintGamma& gamma, const Interpretation& I, size_t iter,
                            const ForeignRegistry* foreigns = nullptr);

/// Runs the constrained fixpoint, tracking the unconstrained baseline
/// trajectory alongside and invoking certifyStep at each reached
/// interpretation. When the baseline terminates under the cap, also compares
/// gamma(baseline fixpoint of the recursive predicate) against the
/// constrained fixpoint. A baseline that exceeds the cap is recorded, not
/// fatal: certification then rests on the per-iteration checks. The query,
/// when given, drives the same constant/demand rewrites as evalQuery.
CertificationReport certifyProgram(const Program& p, const Interpretation& edb,
                                   const EvalOptions& opts = {},
                                   const std::optional<Atom>& query = std::nullopt);

} // namespace premlog
