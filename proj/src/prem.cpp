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

#include "premlog/prem.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "premlog/pretty.hpp"

namespace premlog {

const char* premVerdictText(PremVerdict v) {
    switch (v) {
        case PremVerdict::Full: return "full";
        case PremVerdict::Intrinsic: return "intrinsic";
        case PremVerdict::Radical: return "radical";
        case PremVerdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// Linear form over unassigned ("base") variables: sum of coeff*var + constant.
struct LinearForm {
    std::map<SymId, double> coeffs;
    double constant = 0.0;
    bool linear = true;

    static LinearForm fail() {
        LinearForm f;
        f.linear = false;
        return f;
    }
    bool isConstant() const { return linear && coeffs.empty(); }
};

LinearForm combine(const LinearForm& a, const LinearForm& b, Expr::Op op) {
    if (!a.linear || !b.linear) return LinearForm::fail();
    LinearForm out;
    switch (op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: {
            double sign = op == Expr::Op::Add ? 1.0 : -1.0;
            out = a;
            out.constant += sign * b.constant;
            for (const auto& [v, c] : b.coeffs) out.coeffs[v] += sign * c;
            break;
        }
        case Expr::Op::Mul: {
            const LinearForm* scalar = a.isConstant() ? &a : b.isConstant() ? &b : nullptr;
            const LinearForm* other = scalar == &a ? &b : &a;
            if (!scalar) return LinearForm::fail();
            out = *other;
            out.constant *= scalar->constant;
            for (auto& [v, c] : out.coeffs) c *= scalar->constant;
            break;
        }
        case Expr::Op::Div: {
            if (!b.isConstant() || b.constant == 0.0) return LinearForm::fail();
            out = a;
            out.constant /= b.constant;
            for (auto& [v, c] : out.coeffs) c /= b.constant;
            break;
        }
        case Expr::Op::Leaf: return LinearForm::fail();
    }
    // drop exact-zero coefficients
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = it->second == 0.0 ? out.coeffs.erase(it) : std::next(it);
    return out;
}

// Resolver for the arithmetic chain: expands assigned variables until only
// base variables remain.
struct ChainResolver {
    const std::map<SymId, const Expr*>& assignments;
    std::set<SymId> inProgress;

    LinearForm resolveVar(SymId v) {
        auto it = assignments.find(v);
        if (it == assignments.end()) {
            LinearForm f;
            f.coeffs[v] = 1.0;
            return f;
        }
        if (!inProgress.insert(v).second) return LinearForm::fail();
        LinearForm f = resolve(*it->second);
        inProgress.erase(v);
        return f;
    }

    LinearForm resolve(const Expr& e) {
        if (e.isLeaf()) {
            const Term& t = e.leaf;
            if (t.isVariable()) return resolveVar(t.name);
            LinearForm f;
            if (t.kind == Term::Kind::IntConst)
                f.constant = static_cast<double>(t.ival);
            else if (t.kind == Term::Kind::RealConst)
                f.constant = t.rval;
            else
                return LinearForm::fail();
            return f;
        }
        return combine(resolve(*e.lhs), resolve(*e.rhs), e.op);
    }
};

// Variables with a provable lower bound >= 0, from column declarations of
// the relational atoms binding them plus nonnegative arithmetic.
std::set<SymId> nonNegativeVars(const Program& p, const Rule& rule) {
    std::set<SymId> nonneg;
    for (const auto& b : rule.body) {
        if (b.negated || !b.atom.isRelational()) continue;
        const RelationDecl* d = p.declOf(b.atom.predicate);
        if (!d) continue;
        for (size_t i = 0; i < b.atom.args.size() && i < d->columns.size(); ++i)
            if (b.atom.args[i].isVariable() && d->columns[i].nonNegative())
                nonneg.insert(b.atom.args[i].name);
    }
    return nonneg;
}

} // namespace

PremClass classifyPrem(const Program& p, const Rule& rule, const ConstraintGamma& gamma) {
    PremClass out;
    if (rule.head.predicate != gamma.predicate) {
        out.evidence = "rule head does not match the constrained predicate";
        return out;
    }
    const AggregateSpec& spec = gamma.spec;
    if (!spec.isExtremum()) {
        out.evidence = "count constraints are not pre-mappable";
        return out;
    }

    // Recursive occurrences of the constrained predicate in the body.
    std::vector<const Atom*> recAtoms;
    for (const auto& b : rule.body)
        if (!b.negated && b.atom.isRelational() && b.atom.predicate == gamma.predicate)
            recAtoms.push_back(&b.atom);

    if (recAtoms.empty()) {
        out.verdict = PremVerdict::Intrinsic;
        out.evidence = "the body has no occurrence of '" + symName(gamma.predicate) +
                       "': constraining the recursive input cannot change the rule's output";
        return out;
    }
    if (recAtoms.size() > 1) {
        out.evidence = "multiple recursive occurrences of the constrained predicate";
        return out;
    }
    const Atom& rec = *recAtoms.front();
    if (spec.valueCol >= rec.args.size() || !rec.args[spec.valueCol].isVariable()) {
        out.evidence = "the aggregated argument of the recursive atom is not a variable";
        return out;
    }
    SymId aggArg = rec.args[spec.valueCol].name;

    if (spec.valueCol >= rule.head.args.size() || !rule.head.args[spec.valueCol].isVariable()) {
        out.evidence = "the head value column is not a variable";
        return out;
    }
    SymId headVal = rule.head.args[spec.valueCol].name;

    // Arithmetic chain: one assignment per target.
    std::map<SymId, const Expr*> assignments;
    for (const auto& b : rule.body) {
        if (b.negated || b.atom.kind != AtomKind::Arithmetic) continue;
        SymId target = b.atom.lhs->leaf.name;
        if (assignments.count(target)) {
            out.evidence = "variable '" + symName(target) + "' is assigned more than once";
            return out;
        }
        assignments[target] = &*b.atom.rhs;
    }

    ChainResolver resolver{assignments, {}};
    LinearForm form = resolver.resolveVar(headVal);
    if (!form.linear) {
        out.evidence = "the head value is not a linear function of body variables";
        return out;
    }

    // Taint: variables influenced by the aggregated argument.
    std::set<SymId> tainted{aggArg};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [target, expr] : assignments) {
            if (tainted.count(target)) continue;
            auto vars = expr->vars();
            if (std::any_of(vars.begin(), vars.end(),
                            [&](SymId v) { return tainted.count(v) != 0; })) {
                tainted.insert(target);
                grew = true;
            }
        }
    }
    // Tainted variables may appear only in the recursive atom (the aggregated
    // argument itself), in assignment chains, and in the head value column.
    for (const auto& b : rule.body) {
        if (b.atom.kind == AtomKind::Arithmetic && !b.negated) continue;
        if (&b.atom == &rec) {
            for (size_t i = 0; i < rec.args.size(); ++i) {
                if (i == spec.valueCol) continue;
                if (rec.args[i].isVariable() && tainted.count(rec.args[i].name)) {
                    out.evidence = "the aggregated argument also appears at a non-value position "
                                   "of the recursive atom";
                    return out;
                }
            }
            continue;
        }
        for (SymId v : b.atom.vars()) {
            if (tainted.count(v)) {
                out.evidence = "variable '" + symName(v) +
                               "' depends on the aggregated argument and feeds a guard or join";
                return out;
            }
        }
    }
    for (size_t i = 0; i < rule.head.args.size(); ++i) {
        if (i == spec.valueCol) continue;
        if (rule.head.args[i].isVariable() && tainted.count(rule.head.args[i].name)) {
            out.evidence = "the aggregated argument flows into head column " + std::to_string(i);
            return out;
        }
    }

    double coeff = 0.0;
    if (auto it = form.coeffs.find(aggArg); it != form.coeffs.end()) coeff = it->second;

    if (coeff == 0.0) {
        out.verdict = PremVerdict::Intrinsic;
        out.evidence = "head value " + symName(headVal) + " does not depend on the aggregated "
                       "argument " + symName(aggArg) + " of " + toString(rec);
        return out;
    }
    if (coeff < 0.0) {
        out.evidence = "head value is anti-monotone in the aggregated argument " +
                       symName(aggArg) + " (coefficient " + formatReal(coeff) + ")";
        return out;
    }
    // Companions make tie sets depend on the unconstrained tuples.
    if (!spec.companionCols.empty()) {
        out.evidence = "companion columns on a value-dependent rule: tie tuples may differ";
        return out;
    }

    // Co-arguments must be provably sign-constrained (min: >= 0; max: <= 0).
    auto nonneg = nonNegativeVars(p, rule);
    std::string coTerms;
    for (const auto& [v, c] : form.coeffs) {
        if (v == aggArg) continue;
        bool ok = spec.kind == AggKind::Min ? (c > 0.0 && nonneg.count(v) != 0)
                                            : (c < 0.0 && nonneg.count(v) != 0);
        if (!ok) {
            out.evidence = "co-argument '" + symName(v) + "' (coefficient " + formatReal(c) +
                           ") has no usable sign declaration; declare the column, e.g. `int >= 0`";
            return out;
        }
        if (!coTerms.empty()) coTerms += ", ";
        coTerms += symName(v) + " >= 0 by declaration";
    }
    bool constOk = spec.kind == AggKind::Min ? form.constant >= 0.0 : form.constant <= 0.0;
    if (!constOk) {
        out.evidence = "constant term " + formatReal(form.constant) + " has the wrong sign for " +
                       std::string(aggKindText(spec.kind));
        return out;
    }

    out.verdict = PremVerdict::Full;
    out.evidence = "head value " + symName(headVal) + " is monotone " +
                   (spec.kind == AggKind::Min ? "non-decreasing" : "non-increasing") + " in " +
                   symName(aggArg) + " (coefficient " + formatReal(coeff) + ")" +
                   (coTerms.empty() ? "" : "; co-arguments: " + coTerms) +
                   "; a group-violating input can only produce a group-violating output";
    return out;
}

std::vector<size_t> pushableAggregateRules(const StratifiedProgram& sp) {
    std::vector<size_t> out;
    for (size_t ri = 0; ri < sp.program.rules.size(); ++ri) {
        const Rule& r = sp.program.rules[ri];
        if (!r.headAgg || !r.headAgg->isExtremum()) continue;
        if (r.body.size() != 1 || r.body[0].negated || !r.body[0].atom.isRelational()) continue;
        auto si = sp.stratumOf(r.head.predicate);
        if (si && sp.strata[*si].pushed) continue; // already inside its recursion
        auto bodyStratum = sp.stratumOf(r.body[0].atom.predicate);
        if (bodyStratum && sp.strata[*bodyStratum].sccFlag) out.push_back(ri);
    }
    return out;
}

Program pushAggregate(const StratifiedProgram& sp, size_t aggRuleIdx) {
    const Program& p = sp.program;
    if (aggRuleIdx >= p.rules.size()) throw NotPushable("no such rule");
    const Rule& aggRule = p.rules[aggRuleIdx];
    if (!aggRule.headAgg) throw NotPushable("rule carries no aggregate");
    if (!aggRule.headAgg->isExtremum()) throw NotPushable("only min/max aggregates can be pushed");
    if (aggRule.body.size() != 1 || aggRule.body[0].negated ||
        !aggRule.body[0].atom.isRelational())
        throw NotPushable("the aggregate rule's body is not a single recursive-predicate atom");

    const Atom& bodyAtom = aggRule.body[0].atom;
    SymId target = bodyAtom.predicate;
    auto si = sp.stratumOf(target);
    if (!si || !sp.strata[*si].sccFlag)
        throw NotPushable("'" + symName(target) + "' is not a recursive predicate");

    // Distinct variables on both sides; every body variable must be covered
    // by the head so the remaining projection is exact.
    std::map<SymId, size_t> bodyPos;
    for (size_t i = 0; i < bodyAtom.args.size(); ++i) {
        if (!bodyAtom.args[i].isVariable())
            throw NotPushable("the recursive-predicate atom must use distinct variables");
        if (!bodyPos.emplace(bodyAtom.args[i].name, i).second)
            throw NotPushable("the recursive-predicate atom must use distinct variables");
    }
    const AggregateSpec& spec = *aggRule.headAgg;
    auto posOfHeadVar = [&](size_t headIdx) -> size_t {
        const Term& t = aggRule.head.args[headIdx];
        if (!t.isVariable())
            throw NotPushable("aggregate-rule head arguments must be variables");
        auto it = bodyPos.find(t.name);
        if (it == bodyPos.end())
            throw NotPushable("group-by variable '" + symName(t.name) +
                              "' does not appear in the recursive-predicate atom");
        return it->second;
    };

    AggregateSpec pushedSpec;
    pushedSpec.kind = spec.kind;
    pushedSpec.valueCol = posOfHeadVar(spec.valueCol);
    std::set<size_t> covered{pushedSpec.valueCol};
    for (size_t c : spec.companionCols) {
        pushedSpec.companionCols.push_back(posOfHeadVar(c));
        covered.insert(pushedSpec.companionCols.back());
    }
    for (size_t g : spec.groupbyCols) covered.insert(posOfHeadVar(g));
    if (covered.size() != bodyAtom.args.size())
        throw NotPushable("the aggregate projects away columns of '" + symName(target) +
                          "'; group-by variables must cover the recursive predicate");
    for (size_t i = 0; i < bodyAtom.args.size(); ++i)
        if (i != pushedSpec.valueCol &&
            std::find(pushedSpec.companionCols.begin(), pushedSpec.companionCols.end(), i) ==
                pushedSpec.companionCols.end())
            pushedSpec.groupbyCols.push_back(i);
    std::sort(pushedSpec.companionCols.begin(), pushedSpec.companionCols.end());

    Program out = p;
    for (auto& r : out.rules) {
        if (r.head.predicate != target) continue;
        if (r.headAgg && *r.headAgg != pushedSpec)
            throw NotPushable("'" + symName(target) +
                              "' already carries a different aggregate constraint");
        r.headAgg = pushedSpec;
    }
    Rule& projection = out.rules[aggRuleIdx];
    projection.headAgg.reset();
    out.resolveAtomKinds();
    return out;
}

namespace {

Rule substituteVarInRule(const Rule& r, SymId var, const Term& value) {
    std::map<SymId, Term> sub{{var, value}};
    std::function<Expr(const Expr&)> subExpr = [&](const Expr& e) -> Expr {
        if (e.isLeaf()) {
            if (e.leaf.isVariable() && e.leaf.name == var) return Expr::leafOf(value);
            return Expr::leafOf(e.leaf);
        }
        return Expr::binary(e.op, subExpr(*e.lhs), subExpr(*e.rhs));
    };
    Rule out = r;
    for (auto& t : out.head.args)
        if (t.isVariable() && t.name == var) t = value;
    for (auto& b : out.body) {
        if (b.atom.isBuiltin()) {
            b.atom = Atom::builtin(b.atom.cmp, subExpr(*b.atom.lhs), subExpr(*b.atom.rhs));
        } else {
            for (auto& t : b.atom.args)
                if (t.isVariable() && t.name == var) t = value;
        }
    }
    return out;
}

} // namespace

ConstantPushResult pushConstant(const Program& input, const ConstantBinding& binding) {
    ConstantPushResult res;
    Program p = input;
    p.resolveAtomKinds();
    StratifiedProgram sp = stratify(buildGraph(p), p);

    struct Pending {
        SymId pred;
        size_t argIdx;
        Term constant;
    };
    std::vector<Pending> worklist{{binding.predicate, binding.argIdx, binding.constant}};
    std::set<std::pair<SymId, size_t>> visited;

    while (!worklist.empty()) {
        Pending cur = worklist.back();
        worklist.pop_back();
        if (!visited.insert({cur.pred, cur.argIdx}).second) continue;

        auto si = sp.stratumOf(cur.pred);
        bool recursive = si && sp.strata[*si].sccFlag;

        if (recursive) {
            const Stratum& s = sp.strata[*si];
            // Radical condition: the bound position is copied unchanged
            // through every recursive rule of the SCC.
            for (size_t ri : s.recursiveRules) {
                const Rule& r = p.rules[ri];
                if (r.head.predicate != cur.pred) {
                    throw NotRadical("selection on '" + symName(cur.pred) +
                                     "' cannot be pushed through the mutually recursive rule " +
                                     toString(r));
                }
                if (cur.argIdx >= r.head.args.size() || !r.head.args[cur.argIdx].isVariable())
                    throw NotRadical("the bound argument of '" + symName(cur.pred) +
                                     "' is not a plain variable in " + toString(r));
                SymId headVar = r.head.args[cur.argIdx].name;
                for (const auto& b : r.body) {
                    if (b.negated || !b.atom.isRelational() || b.atom.predicate != cur.pred)
                        continue;
                    const Term& t = b.atom.args[cur.argIdx];
                    if (!t.isVariable() || t.name != headVar)
                        throw NotRadical(
                            "the bound argument position of '" + symName(cur.pred) +
                            "' is modified inside the recursion (" + toString(r) +
                            "); use the demand rewrite instead");
                }
            }
            // Exit rules only: specialize.
            std::vector<Rule> newRules;
            for (size_t ri = 0; ri < p.rules.size(); ++ri) {
                const Rule& r = p.rules[ri];
                bool isExit = std::find(s.exitRules.begin(), s.exitRules.end(), ri) !=
                              s.exitRules.end();
                if (!isExit || r.head.predicate != cur.pred) {
                    newRules.push_back(r);
                    continue;
                }
                const Term& h = r.head.args[cur.argIdx];
                if (h.isConstant()) {
                    if (h == cur.constant) newRules.push_back(r);
                    // different constant: the exit rule can never satisfy the
                    // selection and is dropped
                    continue;
                }
                Rule specialized = substituteVarInRule(r, h.name, cur.constant);
                res.rewrittenRules.push_back(toString(specialized));
                newRules.push_back(std::move(specialized));
            }
            p.rules = std::move(newRules);
            res.notes.push_back("r-PreM: selection " + symName(cur.pred) + "[" +
                                std::to_string(cur.argIdx) + "] = " + toString(cur.constant) +
                                " commutes with the recursive step (copied argument position); "
                                "applied to the exit rules only");
            continue;
        }

        // Non-recursive predicate: plain selection pushdown.
        bool deepen = true;
        std::optional<Pending> child;
        std::vector<Rule> newRules;
        for (const auto& r : p.rules) {
            if (r.head.predicate != cur.pred) {
                newRules.push_back(r);
                continue;
            }
            if (cur.argIdx >= r.head.args.size()) {
                newRules.push_back(r);
                continue;
            }
            const Term& h = r.head.args[cur.argIdx];
            if (h.isConstant()) {
                if (h == cur.constant) newRules.push_back(r);
                continue;
            }
            Rule specialized = substituteVarInRule(r, h.name, cur.constant);
            // Single-atom projection bodies forward the selection.
            if (specialized.body.size() == 1 && !specialized.body[0].negated &&
                specialized.body[0].atom.isRelational()) {
                const Atom& b = specialized.body[0].atom;
                for (size_t i = 0; i < b.args.size(); ++i) {
                    if (b.args[i].isConstant() && b.args[i] == cur.constant) {
                        if (child && (child->pred != b.predicate || child->argIdx != i))
                            deepen = false;
                        else
                            child = Pending{b.predicate, i, cur.constant};
                    }
                }
            } else {
                deepen = false;
            }
            res.rewrittenRules.push_back(toString(specialized));
            newRules.push_back(std::move(specialized));
        }
        p.rules = std::move(newRules);
        res.notes.push_back("selection pushdown on non-recursive '" + symName(cur.pred) +
                            "' (trivially radical)");
        if (child && deepen) {
            // Deepening specializes the child's definition globally; only
            // safe when every consumer of the child already carries the
            // selection.
            bool safe = true;
            auto childStratum = sp.stratumOf(child->pred);
            for (const auto& r : p.rules) {
                bool inChildScc = childStratum &&
                                  sp.strata[*childStratum].containsPred(r.head.predicate);
                for (const auto& b : r.body) {
                    if (!b.atom.isRelational() || b.atom.predicate != child->pred) continue;
                    if (inChildScc) continue; // within-SCC occurrences checked above
                    const Term& t = b.atom.args[child->argIdx];
                    if (!t.isConstant() || !(t == child->constant)) safe = false;
                }
            }
            if (safe) worklist.push_back(*child);
        }
    }
    p.resolveAtomKinds();
    res.program = std::move(p);
    return res;
}

Program demandRewrite(const Program& input, const Atom& query) {
    Program p = input;
    p.resolveAtomKinds();

    std::vector<size_t> boundPositions;
    for (size_t i = 0; i < query.args.size(); ++i)
        if (query.args[i].isConstant()) boundPositions.push_back(i);
    if (boundPositions.empty()) return p; // nothing to demand

    StratifiedProgram sp = stratify(buildGraph(p), p);
    auto si = sp.stratumOf(query.predicate);
    if (!si || !sp.strata[*si].sccFlag) return p; // demand targets recursion only
    const Stratum& s = sp.strata[*si];
    if (s.predicates.size() != 1)
        throw DemandNotDerivable("demand rewrite supports single-predicate recursion; '" +
                                 symName(query.predicate) + "' is mutually recursive");

    // Fresh demand predicate name.
    std::string demandName = "demand_" + symName(query.predicate);
    {
        auto arities = p.arities();
        while (arities.count(intern(demandName))) demandName += "_";
    }
    SymId demandPred = intern(demandName);

    auto demandArgsOf = [&](const Atom& atom) {
        std::vector<Term> args;
        for (size_t b : boundPositions) args.push_back(atom.args[b]);
        return args;
    };

    // Propagation rules, built from the original recursive rules.
    std::vector<Rule> propagation;
    for (size_t ri : s.recursiveRules) {
        const Rule& r = p.rules[ri];
        // Literals usable for computing child bindings: schedulable from the
        // bound head variables without touching the recursive predicate.
        std::set<SymId> bound;
        for (size_t b : boundPositions) {
            const Term& t = r.head.args[b];
            if (t.isVariable()) bound.insert(t.name);
        }
        std::vector<size_t> included;
        std::set<size_t> placed;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t li = 0; li < r.body.size(); ++li) {
                if (placed.count(li)) continue;
                const BodyAtom& b = r.body[li];
                if (b.negated) continue;
                if (b.atom.isRelational()) {
                    if (b.atom.predicate == query.predicate ||
                        b.atom.kind == AtomKind::Foreign)
                        continue;
                    // lower-stratum relational atom: always usable
                    for (const auto& t : b.atom.args)
                        if (t.isVariable()) bound.insert(t.name);
                    included.push_back(li);
                    placed.insert(li);
                    changed = true;
                } else if (b.atom.kind == AtomKind::Arithmetic) {
                    auto vars = b.atom.rhs->vars();
                    if (std::all_of(vars.begin(), vars.end(),
                                    [&](SymId v) { return bound.count(v) != 0; })) {
                        bound.insert(b.atom.lhs->leaf.name);
                        included.push_back(li);
                        placed.insert(li);
                        changed = true;
                    }
                } else {
                    auto vars = b.atom.vars();
                    if (std::all_of(vars.begin(), vars.end(),
                                    [&](SymId v) { return bound.count(v) != 0; })) {
                        included.push_back(li);
                        placed.insert(li);
                        changed = true;
                    }
                }
            }
        }
        std::sort(included.begin(), included.end());

        for (const auto& b : r.body) {
            if (b.negated || !b.atom.isRelational() || b.atom.predicate != query.predicate)
                continue;
            // Child binding must be computable and provably finite.
            for (size_t bp : boundPositions) {
                const Term& child = b.atom.args[bp];
                if (child.isConstant()) continue;
                if (!bound.count(child.name))
                    throw DemandNotDerivable(
                        "the bound argument '" + symName(child.name) + "' of " + toString(b.atom) +
                        " cannot be computed from bound variables in " + toString(r));
                const Term& headTerm = r.head.args[bp];
                bool copied = headTerm.isVariable() && child.isVariable() &&
                              headTerm.name == child.name;
                if (copied) continue;
                // Finiteness pattern: child = V - C with C provably >= 1 (or a
                // positive literal) and a body guard bounding the child below.
                bool finite = false;
                for (size_t li : included) {
                    const BodyAtom& lit = r.body[li];
                    if (lit.atom.kind != AtomKind::Arithmetic) continue;
                    if (lit.atom.lhs->leaf.name != child.name) continue;
                    const Expr& rhs = *lit.atom.rhs;
                    if (rhs.op != Expr::Op::Sub || !rhs.lhs->isLeaf() || !rhs.rhs->isLeaf()) break;
                    const Term& minuend = rhs.lhs->leaf;
                    const Term& subtrahend = rhs.rhs->leaf;
                    if (!minuend.isVariable() || !headTerm.isVariable() ||
                        minuend.name != headTerm.name)
                        break;
                    // subtrahend strictly positive?
                    bool positive = false;
                    if (subtrahend.kind == Term::Kind::IntConst && subtrahend.ival >= 1) {
                        positive = true;
                    } else if (subtrahend.isVariable()) {
                        for (size_t lj : included) {
                            const BodyAtom& src = r.body[lj];
                            if (!src.atom.isRelational()) continue;
                            const RelationDecl* d = p.declOf(src.atom.predicate);
                            if (!d) continue;
                            for (size_t ai = 0;
                                 ai < src.atom.args.size() && ai < d->columns.size(); ++ai)
                                if (src.atom.args[ai].isVariable() &&
                                    src.atom.args[ai].name == subtrahend.name &&
                                    (d->columns[ai].strictlyPositive() ||
                                     (d->columns[ai].lowerBound &&
                                      *d->columns[ai].lowerBound >= 1.0)))
                                    positive = true;
                        }
                    }
                    if (!positive) break;
                    // lower bound on the child: a guard comparing subtrahend
                    // against the bound head variable
                    for (size_t lj : included) {
                        const BodyAtom& g = r.body[lj];
                        if (g.atom.kind != AtomKind::Comparison) continue;
                        if (!g.atom.lhs->isLeaf() || !g.atom.rhs->isLeaf()) continue;
                        const Term& gl = g.atom.lhs->leaf;
                        const Term& gr = g.atom.rhs->leaf;
                        auto isVarNamed = [](const Term& t, SymId n) {
                            return t.isVariable() && t.name == n;
                        };
                        bool subLtHead =
                            (g.atom.cmp == CmpOp::Lt || g.atom.cmp == CmpOp::Le) &&
                            isVarNamed(gl, subtrahend.name) && isVarNamed(gr, headTerm.name);
                        bool headGtSub =
                            (g.atom.cmp == CmpOp::Gt || g.atom.cmp == CmpOp::Ge) &&
                            isVarNamed(gl, headTerm.name) && isVarNamed(gr, subtrahend.name);
                        if (subLtHead || headGtSub) finite = true;
                    }
                    break;
                }
                if (!finite)
                    throw DemandNotDerivable(
                        "the demand closure for '" + symName(child.name) + "' in " + toString(r) +
                        " is not provably finite under the declared value domain");
            }
            Rule prop;
            prop.head = Atom::relational(demandPred, demandArgsOf(b.atom));
            prop.body.push_back(
                {Atom::relational(demandPred, demandArgsOf(r.head)), false});
            for (size_t li : included) prop.body.push_back(r.body[li]);
            propagation.push_back(std::move(prop));
        }
    }

    // Guard every rule of the SCC with the demand atom.
    for (auto& r : p.rules) {
        if (r.head.predicate != query.predicate) continue;
        BodyAtom guard{Atom::relational(demandPred, demandArgsOf(r.head)), false};
        r.body.insert(r.body.begin(), std::move(guard));
    }
    for (auto& prop : propagation) p.rules.push_back(std::move(prop));

    // Seed fact from the query binding.
    Atom seed;
    seed.predicate = demandPred;
    for (size_t b : boundPositions) seed.args.push_back(query.args[b]);
    p.facts.push_back(std::move(seed));

    p.resolveAtomKinds();
    return p;
}

} // namespace premlog
