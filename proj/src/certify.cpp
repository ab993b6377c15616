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

#include "premlog/certify.hpp"

#include <algorithm>

namespace premlog {

namespace {

Interpretation withGammaApplied(const Interpretation& I, const ConstraintGamma& gamma) {
    Interpretation out = I;
    if (const Relation* rel = out.find(gamma.predicate)) {
        Relation filtered = applyGamma(gamma.spec, *rel);
        out.relations().insert_or_assign(gamma.predicate, std::move(filtered));
    }
    return out;
}

std::optional<Tuple> smallestDifference(const Relation& a, const Relation& b) {
    std::optional<Tuple> best;
    auto consider = [&](const Tuple& t) {
        if (!best || compareTuples(t, *best) < 0) best = t;
    };
    for (const auto& t : a.tuples())
        if (!b.contains(t)) consider(t);
    for (const auto& t : b.tuples())
        if (!a.contains(t)) consider(t);
    return best;
}

} // namespace

IterationRecord certifyStep(const Program& env, const std::vector<Rule>& recursiveRules,
                            const ConstraintGamma& gamma, const Interpretation& I, size_t iter,
                            const ForeignRegistry* foreigns) {
    IterationRecord rec;
    rec.iter = iter;

    Relation tI = oneStepConsequences(env, recursiveRules, I, gamma.predicate, foreigns);
    Interpretation gammaI = withGammaApplied(I, gamma);
    Relation tGammaI = oneStepConsequences(env, recursiveRules, gammaI, gamma.predicate, foreigns);

    Relation gTI = applyGamma(gamma.spec, tI);
    Relation gTGammaI = applyGamma(gamma.spec, tGammaI);

    rec.fullOk = gTI.sameTuples(gTGammaI);
    rec.intrinsicOk = tI.sameTuples(tGammaI);
    rec.radicalOk = gTI.sameTuples(tGammaI);
    if (!rec.fullOk) rec.witness = smallestDifference(gTI, gTGammaI);
    return rec;
}

CertificationReport certifyProgram(const Program& input, const Interpretation& edbInput,
                                   const EvalOptions& opts, const std::optional<Atom>& query) {
    CertificationReport report;

    // Certification wants the pushed form: push every pushable aggregate,
    // regardless of its static classification (the run is the check).
    PreparedProgram prepared = prepareForEvaluation(input, query, QueryMode::Pushed);
    Program work = std::move(prepared.program);
    Interpretation edb = mergeProgramFacts(edbInput, work);
    StratifiedProgram sp = stratify(buildGraph(work), work);

    // Locate the pushed SCC with its constraint.
    std::optional<size_t> target;
    for (size_t si = 0; si < sp.strata.size(); ++si)
        if (sp.strata[si].pushed) {
            target = si;
            break;
        }
    if (!target) {
        report.note = "program has no aggregate constraint inside recursion; nothing to certify";
        return report;
    }
    auto constraints = sp.constraintsOf(*target);
    if (constraints.empty()) {
        report.note = "pushed stratum carries no constraint";
        return report;
    }
    ConstraintGamma gamma{constraints.front().first, constraints.front().second};
    report.hasConstraint = true;
    report.predicate = gamma.predicate;
    if (constraints.size() > 1)
        report.note = "multiple constrained predicates; certifying '" +
                      symName(gamma.predicate) + "'";

    const Stratum& stratum = sp.strata[*target];

    // Baseline program: constraints stripped from the SCC's rule heads.
    Program baseline = work;
    for (auto& r : baseline.rules)
        if (stratum.containsPred(r.head.predicate)) r.headAgg.reset();
    baseline.resolveAtomKinds();
    StratifiedProgram spBase = stratify(buildGraph(baseline), baseline);

    // Lower strata of the baseline, evaluated to fixpoint.
    StratifiedProgram spLower = spBase;
    auto baseTarget = spBase.stratumOf(gamma.predicate);
    spLower.strata.resize(baseTarget ? *baseTarget : 0);
    EvalResult lower = evalSeminaive(spLower, edb, opts);

    std::vector<Rule> recursiveRules, allSccRules;
    const Stratum& baseStratum = spBase.strata[*baseTarget];
    for (size_t ri : baseStratum.recursiveRules) recursiveRules.push_back(baseline.rules[ri]);
    for (size_t ri : baseStratum.exitRules) allSccRules.push_back(baseline.rules[ri]);
    for (size_t ri : baseStratum.recursiveRules) allSccRules.push_back(baseline.rules[ri]);

    // Shadow (unconstrained) trajectory: exit rules first, then iterate T.
    std::vector<Rule> exitRules;
    for (size_t ri : baseStratum.exitRules) exitRules.push_back(baseline.rules[ri]);
    Interpretation shadow = applyT(baseline, exitRules, lower.interp, opts.foreigns);

    auto sameOnScc = [&](const Interpretation& a, const Interpretation& b) {
        for (SymId pred : baseStratum.predicates)
            if (!a.sameOn(pred, b)) return false;
        return true;
    };

    for (size_t iter = 1;; ++iter) {
        if (iter > opts.cap) {
            report.baselineTerminated = false;
            break;
        }
        report.perIteration.push_back(
            certifyStep(baseline, recursiveRules, gamma, shadow, iter, opts.foreigns));
        Interpretation next = applyT(baseline, allSccRules, shadow, opts.foreigns);
        if (sameOnScc(next, shadow)) {
            report.baselineTerminated = true;
            shadow = std::move(next);
            break;
        }
        shadow = std::move(next);
    }

    // Constrained fixpoint of the pushed program, for the end-to-end check.
    EvalResult constrained = evalConstrained(sp, edb, opts);
    if (report.baselineTerminated && !constrained.capExceeded) {
        const Relation* baseRel = shadow.find(gamma.predicate);
        const Relation* consRel = constrained.interp.find(gamma.predicate);
        Relation empty(gamma.predicate, 0);
        Relation gammaBase = applyGamma(gamma.spec, baseRel ? *baseRel : empty);
        bool equal = consRel ? gammaBase.sameTuples(*consRel) : gammaBase.empty();
        report.equal = equal;
        if (equal && report.anyViolation())
            report.explanation =
                "per-iteration identity violations occurred, but the two fixpoints coincide on "
                "this instance (distinct fixpoints can still agree)";
    }
    return report;
}

} // namespace premlog
