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

#include "premlog/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>

#include "premlog/prem.hpp"
#include "premlog/pretty.hpp"

namespace premlog {

namespace {

// ---------------------------------------------------------------------------
// Rule plans
// ---------------------------------------------------------------------------

struct ArgBind {
    enum class K : uint8_t { Const, BoundVar, CheckVar, FreeVar } k = K::FreeVar;
    Value cst;
    size_t slot = 0;
};

struct Step {
    enum class K : uint8_t { Scan, Compare, Assign, Negation, Foreign } k = K::Scan;
    SymId pred = 0;
    std::vector<ArgBind> args;
    uint32_t mask = 0;     // Const/BoundVar positions, for index lookups
    bool useDelta = false; // Scan only
    CmpOp cmp = CmpOp::Eq;
    const Expr* lhs = nullptr;
    const Expr* rhs = nullptr;
    size_t assignSlot = 0;
    bool assignIsTest = false;
    const ForeignDecl* fdecl = nullptr;
};

struct HeadBind {
    bool isConst = false;
    Value cst;
    size_t slot = 0;
};

struct Plan {
    const Rule* rule = nullptr;
    std::vector<Step> steps;
    std::vector<HeadBind> head;
    std::unordered_map<SymId, size_t> slots;
};

Plan buildPlan(const Program& env, const Rule& rule, std::optional<size_t> deltaBodyIdx) {
    Plan plan;
    plan.rule = &rule;
    std::set<SymId> bound;
    std::vector<size_t> pending(rule.body.size());
    for (size_t i = 0; i < pending.size(); ++i) pending[i] = i;

    auto slotOf = [&](SymId v) {
        auto [it, fresh] = plan.slots.emplace(v, plan.slots.size());
        (void)fresh;
        return it->second;
    };

    auto exprReady = [&](const Expr& e) {
        auto vs = e.vars();
        return std::all_of(vs.begin(), vs.end(), [&](SymId v) { return bound.count(v) != 0; });
    };

    auto executable = [&](size_t bodyIdx) {
        const BodyAtom& b = rule.body[bodyIdx];
        if (b.negated) {
            auto vs = b.atom.vars();
            return std::all_of(vs.begin(), vs.end(),
                               [&](SymId v) { return bound.count(v) != 0; });
        }
        switch (b.atom.kind) {
            case AtomKind::Edb:
            case AtomKind::Idb: return true;
            case AtomKind::Foreign: {
                const ForeignDecl* fd = env.foreignOf(b.atom.predicate);
                if (!fd) return false;
                for (size_t i = 0; i < b.atom.args.size() && i < fd->boundMode.size(); ++i)
                    if (fd->boundMode[i] && b.atom.args[i].isVariable() &&
                        !bound.count(b.atom.args[i].name))
                        return false;
                return true;
            }
            case AtomKind::Arithmetic: return exprReady(*b.atom.rhs);
            case AtomKind::Comparison: return exprReady(*b.atom.lhs) && exprReady(*b.atom.rhs);
        }
        return false;
    };

    auto buildStep = [&](size_t bodyIdx) {
        const BodyAtom& b = rule.body[bodyIdx];
        if (b.negated || b.atom.kind == AtomKind::Edb || b.atom.kind == AtomKind::Idb) {
            Step st;
            st.k = b.negated ? Step::K::Negation : Step::K::Scan;
            st.pred = b.atom.predicate;
            st.useDelta = deltaBodyIdx && *deltaBodyIdx == bodyIdx;
            std::set<SymId> seenHere;
            for (size_t i = 0; i < b.atom.args.size(); ++i) {
                ArgBind ab;
                const Term& t = b.atom.args[i];
                if (t.isConstant()) {
                    ab.k = ArgBind::K::Const;
                    ab.cst = t.toValue();
                    st.mask |= 1u << i;
                } else if (bound.count(t.name)) {
                    ab.k = ArgBind::K::BoundVar;
                    ab.slot = slotOf(t.name);
                    st.mask |= 1u << i;
                } else if (seenHere.count(t.name)) {
                    ab.k = ArgBind::K::CheckVar;
                    ab.slot = slotOf(t.name);
                } else {
                    ab.k = ArgBind::K::FreeVar;
                    ab.slot = slotOf(t.name);
                    seenHere.insert(t.name);
                }
                st.args.push_back(ab);
            }
            if (!b.negated)
                for (const Term& t : b.atom.args)
                    if (t.isVariable()) bound.insert(t.name);
            plan.steps.push_back(std::move(st));
            return;
        }
        if (b.atom.kind == AtomKind::Foreign) {
            Step st;
            st.k = Step::K::Foreign;
            st.pred = b.atom.predicate;
            st.fdecl = env.foreignOf(b.atom.predicate);
            std::set<SymId> seenHere;
            for (const Term& t : b.atom.args) {
                ArgBind ab;
                if (t.isConstant()) {
                    ab.k = ArgBind::K::Const;
                    ab.cst = t.toValue();
                } else if (bound.count(t.name) || seenHere.count(t.name)) {
                    ab.k = ArgBind::K::BoundVar;
                    ab.slot = slotOf(t.name);
                } else {
                    ab.k = ArgBind::K::FreeVar;
                    ab.slot = slotOf(t.name);
                    seenHere.insert(t.name);
                }
                st.args.push_back(ab);
            }
            for (const Term& t : b.atom.args)
                if (t.isVariable()) bound.insert(t.name);
            plan.steps.push_back(std::move(st));
            return;
        }
        if (b.atom.kind == AtomKind::Arithmetic) {
            Step st;
            st.k = Step::K::Assign;
            st.rhs = &*b.atom.rhs;
            SymId target = b.atom.lhs->leaf.name;
            st.assignIsTest = bound.count(target) != 0;
            st.assignSlot = slotOf(target);
            bound.insert(target);
            plan.steps.push_back(std::move(st));
            return;
        }
        Step st;
        st.k = Step::K::Compare;
        st.cmp = b.atom.cmp;
        st.lhs = &*b.atom.lhs;
        st.rhs = &*b.atom.rhs;
        plan.steps.push_back(std::move(st));
    };

    while (!pending.empty()) {
        std::optional<size_t> pick;
        if (deltaBodyIdx) {
            auto it = std::find(pending.begin(), pending.end(), *deltaBodyIdx);
            if (it != pending.end()) pick = *it; // the delta atom joins first
        }
        if (!pick) {
            for (size_t idx : pending) {
                if (executable(idx)) {
                    pick = idx;
                    break;
                }
            }
        }
        if (!pick)
            throw EvalError("cannot order the body of rule: " + toString(rule) +
                            " (unbound builtin or foreign arguments)");
        buildStep(*pick);
        pending.erase(std::find(pending.begin(), pending.end(), *pick));
    }

    for (const Term& t : rule.head.args) {
        HeadBind hb;
        if (t.isConstant()) {
            hb.isConst = true;
            hb.cst = t.toValue();
        } else {
            auto it = plan.slots.find(t.name);
            if (it == plan.slots.end())
                throw EvalError("unbound head variable '" + symName(t.name) + "' in rule: " +
                                toString(rule));
            hb.slot = it->second;
        }
        plan.head.push_back(hb);
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Plan execution
// ---------------------------------------------------------------------------

Value arith(Expr::Op op, const Value& a, const Value& b, const Plan& plan,
            const std::vector<Value>& regs) {
    if (!a.isNumeric() || !b.isNumeric())
        throw EvalError("arithmetic on non-numeric values (" + a.toText() + ", " + b.toText() +
                        ") in rule: " + toString(*plan.rule));
    auto divByZero = [&]() -> EvalError {
        std::string bindings;
        for (const auto& v : regs) bindings += (bindings.empty() ? "" : ", ") + v.toText();
        return EvalError("division by zero in rule: " + toString(*plan.rule) + " with bindings [" +
                         bindings + "]");
    };
    if (a.kind() == Value::Kind::Int && b.kind() == Value::Kind::Int) {
        int64_t x = a.asInt(), y = b.asInt();
        switch (op) {
            case Expr::Op::Add: return Value::ofInt(x + y);
            case Expr::Op::Sub: return Value::ofInt(x - y);
            case Expr::Op::Mul: return Value::ofInt(x * y);
            case Expr::Op::Div:
                if (y == 0) throw divByZero();
                return Value::ofInt(x / y);
            case Expr::Op::Leaf: break;
        }
    } else {
        double x = a.numeric(), y = b.numeric();
        switch (op) {
            case Expr::Op::Add: return Value::ofReal(x + y);
            case Expr::Op::Sub: return Value::ofReal(x - y);
            case Expr::Op::Mul: return Value::ofReal(x * y);
            case Expr::Op::Div:
                if (y == 0.0) throw divByZero();
                return Value::ofReal(x / y);
            case Expr::Op::Leaf: break;
        }
    }
    throw EvalError("malformed arithmetic expression");
}

Value evalExprAt(const Expr& e, const std::vector<Value>& regs, const Plan& plan) {
    if (e.isLeaf()) {
        const Term& t = e.leaf;
        if (t.isVariable()) return regs[plan.slots.at(t.name)];
        return t.toValue();
    }
    return arith(e.op, evalExprAt(*e.lhs, regs, plan), evalExprAt(*e.rhs, regs, plan), plan, regs);
}

bool cmpHolds(CmpOp op, const Value& l, const Value& r) {
    int c = aggValueCompare(l, r);
    switch (op) {
        case CmpOp::Eq: return c == 0;
        case CmpOp::Ne: return c != 0;
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
    }
    return false;
}

class PlanRunner {
public:
    PlanRunner(const Plan& plan, const Interpretation& interp,
               const std::map<SymId, std::vector<Tuple>>* deltas, const ForeignRegistry* foreigns,
               size_t& derivations, const std::function<void(Tuple)>& emit)
        : plan_(plan),
          interp_(interp),
          deltas_(deltas),
          foreigns_(foreigns),
          derivations_(derivations),
          emit_(emit),
          regs_(plan.slots.size()) {}

    void run() { step(0); }

private:
    const Plan& plan_;
    const Interpretation& interp_;
    const std::map<SymId, std::vector<Tuple>>* deltas_;
    const ForeignRegistry* foreigns_;
    size_t& derivations_;
    const std::function<void(Tuple)>& emit_;
    std::vector<Value> regs_;

    bool matchTuple(const Step& st, const Tuple& t) {
        for (size_t i = 0; i < st.args.size(); ++i) {
            const ArgBind& ab = st.args[i];
            switch (ab.k) {
                case ArgBind::K::Const:
                    if (!(t[i] == ab.cst)) return false;
                    break;
                case ArgBind::K::BoundVar:
                case ArgBind::K::CheckVar:
                    if (!(t[i] == regs_[ab.slot])) return false;
                    break;
                case ArgBind::K::FreeVar: regs_[ab.slot] = t[i]; break;
            }
        }
        return true;
    }

    void step(size_t idx) {
        if (idx == plan_.steps.size()) {
            Tuple out;
            out.reserve(plan_.head.size());
            for (const auto& hb : plan_.head) out.push_back(hb.isConst ? hb.cst : regs_[hb.slot]);
            ++derivations_;
            emit_(std::move(out));
            return;
        }
        const Step& st = plan_.steps[idx];
        switch (st.k) {
            case Step::K::Scan: {
                if (st.useDelta) {
                    if (!deltas_) return;
                    auto it = deltas_->find(st.pred);
                    if (it == deltas_->end()) return;
                    for (const Tuple& t : it->second)
                        if (matchTuple(st, t)) step(idx + 1);
                    return;
                }
                const Relation* rel = interp_.find(st.pred);
                if (!rel || rel->empty()) return;
                if (st.mask == 0) {
                    for (const Tuple& t : rel->tuples())
                        if (matchTuple(st, t)) step(idx + 1);
                    return;
                }
                Tuple key;
                for (size_t i = 0; i < st.args.size(); ++i) {
                    if (!(st.mask & (1u << i))) continue;
                    const ArgBind& ab = st.args[i];
                    key.push_back(ab.k == ArgBind::K::Const ? ab.cst : regs_[ab.slot]);
                }
                const auto& index = rel->index(st.mask);
                auto bucket = index.find(key);
                if (bucket == index.end()) return;
                for (const Tuple* t : bucket->second)
                    if (matchTuple(st, *t)) step(idx + 1);
                return;
            }
            case Step::K::Negation: {
                Tuple probe;
                probe.reserve(st.args.size());
                for (const auto& ab : st.args)
                    probe.push_back(ab.k == ArgBind::K::Const ? ab.cst : regs_[ab.slot]);
                const Relation* rel = interp_.find(st.pred);
                if (rel && rel->contains(probe)) return;
                step(idx + 1);
                return;
            }
            case Step::K::Assign: {
                Value v = evalExprAt(*st.rhs, regs_, plan_);
                if (st.assignIsTest) {
                    if (aggValueCompare(regs_[st.assignSlot], v) != 0) return;
                } else {
                    regs_[st.assignSlot] = std::move(v);
                }
                step(idx + 1);
                return;
            }
            case Step::K::Compare: {
                Value l = evalExprAt(*st.lhs, regs_, plan_);
                Value r = evalExprAt(*st.rhs, regs_, plan_);
                if (cmpHolds(st.cmp, l, r)) step(idx + 1);
                return;
            }
            case Step::K::Foreign: {
                if (!foreigns_)
                    throw EvalError("no foreign registry available for predicate '" +
                                    symName(st.pred) + "'");
                const ForeignPredicate* fp = foreigns_->find(symName(st.pred));
                if (!fp)
                    throw EvalError("no implementation registered for foreign predicate '" +
                                    symName(st.pred) + "'");
                Tuple boundArgs;
                for (size_t i = 0; i < st.args.size(); ++i)
                    if (st.fdecl && i < st.fdecl->boundMode.size() && st.fdecl->boundMode[i])
                        boundArgs.push_back(st.args[i].k == ArgBind::K::Const
                                                ? st.args[i].cst
                                                : regs_[st.args[i].slot]);
                for (const Tuple& completion : evalForeign(*fp, boundArgs)) {
                    if (completion.size() != st.args.size())
                        throw EvalError("foreign predicate '" + symName(st.pred) +
                                        "' returned a completion of wrong arity");
                    if (matchTuple(st, completion)) step(idx + 1);
                }
                return;
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Stratum fixpoints
// ---------------------------------------------------------------------------

enum class Algo { Naive, Seminaive };
enum class Semantics { Stratified, Constrained };

struct StratumOutcome {
    size_t iterations = 0;
    size_t derivations = 0;
    bool capExceeded = false;
};

std::string predListText(const Stratum& s) {
    std::string out;
    for (SymId p : s.predicates) out += (out.empty() ? "" : ",") + symName(p);
    return out;
}

StratumOutcome evalStratum(const StratifiedProgram& sp, size_t stratumIdx, Interpretation& interp,
                           Algo algo, Semantics sem, const EvalOptions& opts,
                           const std::map<SymId, size_t>& arities) {
    const Stratum& s = sp.strata[stratumIdx];
    const Program& prog = sp.program;
    StratumOutcome outcome;

    bool constrained = sem == Semantics::Constrained && s.pushed;
    auto constraints = sp.constraintsOf(stratumIdx);

    // Materialize the stratum's relations; constrained predicates carry the
    // group index from the start (preloaded facts are re-admitted through it).
    for (SymId pred : s.predicates) {
        size_t arity = arities.at(pred);
        if (constrained) {
            const AggregateSpec* spec = nullptr;
            for (const auto& [cp, cs] : constraints)
                if (cp == pred) spec = &cs;
            if (spec) {
                Relation fresh(pred, arity);
                fresh.setConstraint(*spec);
                if (const Relation* old = interp.find(pred))
                    for (const auto& t : old->tuples()) fresh.insert(t);
                interp.relations().insert_or_assign(pred, std::move(fresh));
                continue;
            }
        }
        interp.ensure(pred, arity);
    }

    std::vector<size_t> allRules;
    allRules.insert(allRules.end(), s.exitRules.begin(), s.exitRules.end());
    allRules.insert(allRules.end(), s.recursiveRules.begin(), s.recursiveRules.end());
    std::sort(allRules.begin(), allRules.end());

    // Full plans for round one (and every naive round).
    std::vector<std::pair<size_t, Plan>> fullPlans;
    for (size_t ri : allRules) fullPlans.emplace_back(ri, buildPlan(prog, prog.rules[ri], {}));

    // Delta variants for semi-naive rounds: one per recursive-atom occurrence.
    std::vector<std::pair<size_t, Plan>> deltaPlans;
    if (algo == Algo::Seminaive) {
        for (size_t ri : s.recursiveRules) {
            const Rule& r = prog.rules[ri];
            for (size_t bi = 0; bi < r.body.size(); ++bi) {
                const BodyAtom& b = r.body[bi];
                if (b.negated || !b.atom.isRelational() || b.atom.kind == AtomKind::Foreign)
                    continue;
                if (!s.containsPred(b.atom.predicate)) continue;
                deltaPlans.emplace_back(ri, buildPlan(prog, r, bi));
            }
        }
    }

    std::map<SymId, std::vector<Tuple>> deltas;
    size_t round = 0;
    while (true) {
        ++round;
        if (round > opts.cap) {
            outcome.capExceeded = true;
            --round;
            break;
        }

        // Evaluate: candidates per rule (aggregate rules are post-processed
        // per rule before joining the shared pool).
        std::map<size_t, std::vector<Tuple>> candidatesByRule;
        auto runPlans = [&](const std::vector<std::pair<size_t, Plan>>& plans, bool withDeltas) {
            for (const auto& [ri, plan] : plans) {
                auto& bucket = candidatesByRule[ri];
                PlanRunner runner(plan, interp, withDeltas ? &deltas : nullptr, opts.foreigns,
                                  outcome.derivations,
                                  [&bucket](Tuple t) { bucket.push_back(std::move(t)); });
                runner.run();
            }
        };
        if (algo == Algo::Naive || round == 1)
            runPlans(fullPlans, false);
        else
            runPlans(deltaPlans, true);

        // Admission.
        std::map<SymId, std::vector<Tuple>> pools;
        for (auto& [ri, tuples] : candidatesByRule) {
            if (tuples.empty()) continue;
            const Rule& r = prog.rules[ri];
            // Aggregate rule outside a pushed evaluation: aggregate this
            // rule's matches before admission (perfect-model semantics).
            if (r.headAgg && !(constrained && s.containsPred(r.head.predicate))) {
                Relation raw(r.head.predicate, r.head.args.size());
                for (auto& t : tuples) raw.insert(std::move(t));
                Relation aggregated = r.headAgg->isExtremum() ? applyGamma(*r.headAgg, raw)
                                                              : applyCount(*r.headAgg, raw);
                auto& pool = pools[r.head.predicate];
                for (const auto& t : aggregated.tuples()) pool.push_back(t);
                continue;
            }
            auto& pool = pools[r.head.predicate];
            for (auto& t : tuples) pool.push_back(std::move(t));
        }

        std::map<SymId, std::vector<Tuple>> newDeltas;
        bool anyNew = false;
        for (auto& [pred, pool] : pools) {
            Relation& rel = *interp.find(pred);
            std::vector<Tuple> admitted;
            if (rel.constraint()) {
                // Pre-filter the pool per group so transient improvements
                // within one round do not churn the store.
                Relation staged(pred, rel.arity());
                staged.setConstraint(*rel.constraint());
                for (auto& t : pool) staged.insert(std::move(t));
                for (const auto& t : staged.tuples()) {
                    auto res = rel.insert(t);
                    if (res == Relation::Outcome::New || res == Relation::Outcome::Tie ||
                        res == Relation::Outcome::Improved)
                        admitted.push_back(t);
                }
            } else {
                for (auto& t : pool) {
                    auto res = rel.insert(t);
                    if (res == Relation::Outcome::New) admitted.push_back(std::move(t));
                }
            }
            if (!admitted.empty()) {
                anyNew = true;
                newDeltas.emplace(pred, std::move(admitted));
            }
        }
        deltas = std::move(newDeltas);
        if (!anyNew) break;
    }
    outcome.iterations = round;

    // Stratified semantics applies gamma once the stratum converges.
    if (!outcome.capExceeded && sem == Semantics::Stratified && s.pushed) {
        for (const auto& [pred, spec] : constraints) {
            Relation& rel = *interp.find(pred);
            Relation filtered = applyGamma(spec, rel);
            interp.relations().insert_or_assign(pred, std::move(filtered));
        }
    }
    return outcome;
}

EvalResult runProgram(const StratifiedProgram& sp, const Interpretation& edb, Algo algo,
                      Semantics sem, const EvalOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    EvalResult result;
    result.interp = edb;
    auto arities = sp.program.arities();

    for (size_t si = 0; si < sp.strata.size(); ++si) {
        StratumOutcome out = evalStratum(sp, si, result.interp, algo, sem, opts, arities);
        StratumStats ss;
        ss.predicates = predListText(sp.strata[si]);
        ss.iterations = out.iterations;
        ss.derivationsAttempted = out.derivations;
        ss.pushed = sp.strata[si].pushed && sem == Semantics::Constrained;
        ss.capExceeded = out.capExceeded;
        result.stats.perStratum.push_back(std::move(ss));
        result.stats.iterations += out.iterations;
        result.stats.derivationsAttempted += out.derivations;
        if (out.capExceeded) {
            result.capExceeded = true;
            break;
        }
    }
    for (const auto& s : sp.strata)
        for (SymId pred : s.predicates)
            if (const Relation* rel = result.interp.find(pred))
                result.stats.tuplesRetained += rel->size();
    result.stats.wallMs = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    return result;
}

} // namespace

EvalResult evalStratified(const StratifiedProgram& sp, const Interpretation& edb,
                          const EvalOptions& opts) {
    return runProgram(sp, edb, Algo::Naive, Semantics::Stratified, opts);
}

EvalResult evalSeminaive(const StratifiedProgram& sp, const Interpretation& edb,
                         const EvalOptions& opts) {
    return runProgram(sp, edb, Algo::Seminaive, Semantics::Stratified, opts);
}

EvalResult evalConstrained(const StratifiedProgram& sp, const Interpretation& edb,
                           const EvalOptions& opts) {
    return runProgram(sp, edb, Algo::Seminaive, Semantics::Constrained, opts);
}

Interpretation applyT(const Program& env, const std::vector<Rule>& rules, const Interpretation& I,
                      const ForeignRegistry* foreigns) {
    // Plain copy without constraints: T is the unconstrained operator.
    Interpretation out;
    for (const auto& [pred, rel] : I.relations()) {
        Relation& fresh = out.ensure(pred, rel.arity());
        for (const auto& t : rel.tuples()) fresh.insert(t);
    }
    size_t derivations = 0;
    for (const Rule& r : rules) {
        Plan plan = buildPlan(env, r, {});
        Relation& target = out.has(r.head.predicate)
                               ? *out.find(r.head.predicate)
                               : out.ensure(r.head.predicate, r.head.args.size());
        std::vector<Tuple> collected;
        PlanRunner runner(plan, I, nullptr, foreigns, derivations,
                          [&collected](Tuple t) { collected.push_back(std::move(t)); });
        runner.run();
        for (auto& t : collected) target.insert(std::move(t));
    }
    return out;
}

Relation oneStepConsequences(const Program& env, const std::vector<Rule>& rules,
                             const Interpretation& I, SymId pred,
                             const ForeignRegistry* foreigns) {
    size_t arity = 0;
    for (const Rule& r : rules)
        if (r.head.predicate == pred) arity = r.head.args.size();
    Relation out(pred, arity);
    size_t derivations = 0;
    for (const Rule& r : rules) {
        if (r.head.predicate != pred) continue;
        Plan plan = buildPlan(env, r, {});
        PlanRunner runner(plan, I, nullptr, foreigns, derivations,
                          [&out](Tuple t) { out.insert(std::move(t)); });
        runner.run();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Query pipeline
// ---------------------------------------------------------------------------

Interpretation mergeProgramFacts(const Interpretation& edb, const Program& p) {
    Interpretation out = edb;
    for (const auto& f : p.facts) {
        Relation& rel = out.ensure(f.predicate, f.args.size());
        Tuple t;
        t.reserve(f.args.size());
        for (const auto& a : f.args) t.push_back(a.toValue());
        rel.insert(std::move(t));
    }
    return out;
}

PreparedProgram prepareForEvaluation(const Program& input, const std::optional<Atom>& queryArg,
                                     QueryMode mode) {
    PreparedProgram out;
    Program work = substituteConfig(input);
    work = inlineConditionRules(work);
    std::optional<Atom> query = queryArg ? queryArg : work.query;

    StratifiedProgram sp = analyzeProgram(work, query, /*enforceSafety=*/false);
    work = sp.program;

    // Push higher-stratum extremum aggregates into their recursion.
    if (mode != QueryMode::Stratified) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t ri : pushableAggregateRules(sp)) {
                Program pushed;
                try {
                    pushed = pushAggregate(sp, ri);
                } catch (const NotPushable& e) {
                    out.notes.push_back(std::string("not pushed: ") + e.what());
                    continue;
                }
                StratifiedProgram spPushed = stratify(buildGraph(pushed), pushed);
                if (mode == QueryMode::Auto) {
                    bool allLicensed = true;
                    std::set<std::pair<size_t, SymId>> seen;
                    for (const auto& [si, pri, spec] : spPushed.aggInRecursion) {
                        const Stratum& st = spPushed.strata[si];
                        ConstraintGamma gamma{spPushed.program.rules[pri].head.predicate, spec};
                        if (!seen.insert({si, gamma.predicate}).second) continue;
                        for (size_t rri : st.recursiveRules) {
                            const Rule& rr = spPushed.program.rules[rri];
                            if (rr.head.predicate != gamma.predicate) continue;
                            PremClass pc = classifyPrem(spPushed.program, rr, gamma);
                            out.notes.push_back("classify " + toString(rr) + " -> " +
                                                premVerdictText(pc.verdict));
                            if (!pc.premappable()) allLicensed = false;
                        }
                    }
                    if (!allLicensed) {
                        out.notes.push_back(
                            "aggregate left at its own stratum (classification not full/intrinsic)");
                        continue;
                    }
                }
                work = pushed;
                sp = std::move(spPushed);
                out.notes.push_back("aggregate pushed into the recursion of rule " +
                                    toString(work.rules[ri]));
                changed = true;
                break;
            }
        }
    }

    // Query constant handling: radical pushdown, else demand.
    if (query) {
        bool hasBound = std::any_of(query->args.begin(), query->args.end(),
                                    [](const Term& t) { return t.isConstant(); });
        if (hasBound) {
            Program beforeConstants = work;
            try {
                for (size_t i = 0; i < query->args.size(); ++i) {
                    if (!query->args[i].isConstant()) continue;
                    ConstantPushResult res =
                        pushConstant(work, {query->predicate, i, query->args[i]});
                    work = std::move(res.program);
                    for (auto& n : res.notes) out.notes.push_back(std::move(n));
                }
            } catch (const NotRadical& e) {
                out.notes.push_back(std::string("constant push not radical: ") + e.what());
                try {
                    work = demandRewrite(beforeConstants, *query);
                    out.notes.push_back("demand rewrite applied for " + toString(*query));
                } catch (const DemandNotDerivable& de) {
                    work = std::move(beforeConstants);
                    out.notes.push_back(std::string("demand rewrite not applicable: ") +
                                        de.what());
                }
            }
        }
    }

    // Final safety gate on the evaluated form.
    {
        auto violations = safetyCheck(work);
        if (!violations.empty()) {
            const auto& v = violations.front();
            throw AnalysisError("unsafe rule: " + toString(work.rules[v.ruleIdx]) +
                                " — variable '" + symName(v.variable) + "': " + v.reason);
        }
    }
    out.program = std::move(work);
    return out;
}

QueryOutcome evalQuery(const Program& input, const Interpretation& edb,
                       const std::optional<Atom>& queryOverride, QueryMode mode,
                       const EvalOptions& opts) {
    QueryOutcome out;
    PreparedProgram prepared = prepareForEvaluation(input, queryOverride, mode);
    Program work = std::move(prepared.program);
    out.notes = std::move(prepared.notes);
    std::optional<Atom> query = queryOverride ? queryOverride : work.query;

    StratifiedProgram sp = stratify(buildGraph(work), work);
    Interpretation evalEdb = mergeProgramFacts(edb, work);

    EvalResult er = mode == QueryMode::Stratified ? evalSeminaive(sp, evalEdb, opts)
                                                  : evalConstrained(sp, evalEdb, opts);
    out.stats = std::move(er.stats);
    out.capExceeded = er.capExceeded;
    out.interp = std::move(er.interp);
    out.effectiveProgram = work;

    if (query) {
        auto arities = work.arities();
        size_t arity = arities.count(query->predicate) ? arities.at(query->predicate)
                                                       : query->args.size();
        Relation selected(query->predicate, arity);
        if (const Relation* rel = out.interp.find(query->predicate)) {
            for (const auto& t : rel->tuples()) {
                bool match = true;
                for (size_t i = 0; i < query->args.size() && i < t.size(); ++i)
                    if (query->args[i].isConstant() &&
                        aggValueCompare(query->args[i].toValue(), t[i]) != 0)
                        match = false;
                if (match) selected.insert(t);
            }
        }
        out.result = std::move(selected);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ML template runs
// ---------------------------------------------------------------------------

MlRun runMlProgram(const Program& p, const Interpretation& edb, const EvalOptions& opts) {
    MlRun run;
    QueryOutcome q = evalQuery(p, edb, std::nullopt, QueryMode::Auto, opts);
    run.stats = q.stats;

    double delta = 0.0;
    if (auto it = p.config.find("delta"); it != p.config.end())
        delta = it->second.kind == Term::Kind::IntConst ? static_cast<double>(it->second.ival)
                                                        : it->second.rval;

    std::map<int64_t, std::vector<double>> modelByIter;
    if (const Relation* rel = q.interp.find(intern("model"))) {
        for (const auto& t : rel->tuples()) {
            if (t.size() != 2 || t[0].kind() != Value::Kind::Int ||
                t[1].kind() != Value::Kind::Vec)
                continue;
            modelByIter[t[0].asInt()] = t[1].asVec();
        }
    }
    std::map<int64_t, double> errorByIter;
    if (const Relation* rel = q.interp.find(intern("stats"))) {
        for (const auto& t : rel->tuples()) {
            if (t.size() < 2 || t[0].kind() != Value::Kind::Int || !t[1].isNumeric()) continue;
            errorByIter[t[0].asInt()] = t[1].numeric();
        }
    }
    for (const auto& [j, m] : modelByIter) {
        (void)j;
        run.models.push_back(m);
    }
    for (const auto& [j, e] : errorByIter) {
        (void)j;
        run.errors.push_back(e);
    }
    run.converged = !q.capExceeded && !run.errors.empty() && !std::isnan(run.errors.back()) &&
                    run.errors.back() <= delta;
    return run;
}

bool mlTemplateEquivalence(const Program& temporal, const Program& pushed,
                           const Interpretation& edb, const EvalOptions& opts, double tol) {
    MlRun a = runMlProgram(temporal, edb, opts);
    MlRun b = runMlProgram(pushed, edb, opts);
    if (!a.converged || !b.converged)
        throw NonConvergence("training did not reach the error threshold within the cap (" +
                             std::string(a.converged ? "" : "temporal form ") +
                             std::string(b.converged ? "" : "pushed form ") + "diverged)");
    if (a.models.empty() || b.models.empty()) return false;
    const auto& ma = a.models.back();
    const auto& mb = b.models.back();
    if (ma.size() != mb.size()) return false;
    for (size_t i = 0; i < ma.size(); ++i)
        if (std::abs(ma[i] - mb[i]) > tol) return false;
    return true;
}

} // namespace premlog
