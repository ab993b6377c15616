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

#include "premlog/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "premlog/pretty.hpp"

namespace premlog {

const char* polarityText(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "positive";
        case Polarity::Negative: return "negative";
        case Polarity::Aggregated: return "aggregated";
    }
    return "?";
}

PredicateGraph buildGraph(const Program& p) {
    PredicateGraph g;
    for (const auto& f : p.facts) g.nodes.insert(f.predicate);
    for (const auto& d : p.decls) g.nodes.insert(d.predicate);
    for (const auto& r : p.rules) {
        g.nodes.insert(r.head.predicate);
        for (const auto& b : r.body) {
            if (!b.atom.isRelational() || b.atom.kind == AtomKind::Foreign) continue;
            g.nodes.insert(b.atom.predicate);
            Polarity pol = b.negated          ? Polarity::Negative
                           : r.headAgg        ? Polarity::Aggregated
                                              : Polarity::Positive;
            g.edges.emplace(b.atom.predicate, r.head.predicate, pol);
        }
    }
    return g;
}

bool Stratum::containsPred(SymId p) const {
    return std::find(predicates.begin(), predicates.end(), p) != predicates.end();
}

std::vector<std::pair<SymId, AggregateSpec>> StratifiedProgram::constraintsOf(
    size_t stratumIdx) const {
    std::vector<std::pair<SymId, AggregateSpec>> out;
    const Stratum& s = strata[stratumIdx];
    if (!s.pushed) return out;
    for (size_t idx : s.exitRules) {
        const Rule& r = program.rules[idx];
        if (r.headAgg) out.emplace_back(r.head.predicate, *r.headAgg);
    }
    for (size_t idx : s.recursiveRules) {
        const Rule& r = program.rules[idx];
        if (r.headAgg) out.emplace_back(r.head.predicate, *r.headAgg);
    }
    // dedup per predicate (specs already validated consistent)
    std::vector<std::pair<SymId, AggregateSpec>> dedup;
    for (auto& e : out) {
        bool seen = false;
        for (auto& d : dedup) seen = seen || d.first == e.first;
        if (!seen) dedup.push_back(std::move(e));
    }
    return dedup;
}

std::optional<size_t> StratifiedProgram::stratumOf(SymId pred) const {
    for (size_t i = 0; i < strata.size(); ++i)
        if (strata[i].containsPred(pred)) return i;
    return std::nullopt;
}

namespace {

// Tarjan over predicates in lexicographic order; emits components in
// reverse topological order.
struct Tarjan {
    const std::map<SymId, std::vector<SymId>>& succ;
    std::map<SymId, int> index, low;
    std::map<SymId, bool> onStack;
    std::vector<SymId> stack;
    std::vector<std::vector<SymId>> components;
    int counter = 0;

    void run(const std::vector<SymId>& nodes) {
        for (SymId n : nodes)
            if (!index.count(n)) visit(n);
    }

    void visit(SymId v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onStack[v] = true;
        auto it = succ.find(v);
        if (it != succ.end()) {
            for (SymId w : it->second) {
                if (!index.count(w)) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (onStack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<SymId> comp;
            while (true) {
                SymId w = stack.back();
                stack.pop_back();
                onStack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            components.push_back(std::move(comp));
        }
    }
};

std::vector<SymId> sortedByName(const std::set<SymId>& s) {
    std::vector<SymId> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(), [](SymId a, SymId b) { return symCompare(a, b) < 0; });
    return v;
}

} // namespace

StratifiedProgram stratify(const PredicateGraph& g, const Program& p) {
    StratifiedProgram sp;
    sp.program = p;
    sp.program.resolveAtomKinds();

    std::map<SymId, std::vector<SymId>> succ;
    for (const auto& [from, to, pol] : g.edges) succ[from].push_back(to);
    for (auto& [n, v] : succ) {
        std::sort(v.begin(), v.end(), [](SymId a, SymId b) { return symCompare(a, b) < 0; });
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    Tarjan tarjan{succ, {}, {}, {}, {}, {}, 0};
    tarjan.run(sortedByName(g.nodes));

    std::map<SymId, size_t> componentOf;
    for (size_t i = 0; i < tarjan.components.size(); ++i)
        for (SymId pred : tarjan.components[i]) componentOf[pred] = i;

    auto idb = sp.program.idbPredicates();
    sp.edbPredicates = sortedByName(sp.program.edbPredicates());

    // Reverse Tarjan order = topological order of the condensation.
    std::vector<size_t> topo;
    for (size_t i = tarjan.components.size(); i-- > 0;) topo.push_back(i);

    std::map<size_t, size_t> stratumIdxOfComponent;
    for (size_t comp : topo) {
        auto& members = tarjan.components[comp];
        bool anyIdb = std::any_of(members.begin(), members.end(),
                                  [&](SymId m) { return idb.count(m) != 0; });
        if (!anyIdb) continue;
        Stratum s;
        std::set<SymId> memberSet(members.begin(), members.end());
        s.predicates = sortedByName(memberSet);
        bool selfLoop = false;
        for (const auto& [from, to, pol] : g.edges) {
            if (componentOf.at(from) != comp || componentOf.at(to) != comp) continue;
            selfLoop = true;
            if (pol == Polarity::Negative)
                throw NotStratifiable("negation through recursion: '" + symName(from) +
                                      "' and '" + symName(to) + "' are mutually recursive");
        }
        s.sccFlag = selfLoop;
        stratumIdxOfComponent[comp] = sp.strata.size();
        sp.strata.push_back(std::move(s));
    }

    // Attach rules and validate aggregates inside recursion.
    std::map<SymId, std::optional<AggregateSpec>> specOf;
    for (size_t ri = 0; ri < sp.program.rules.size(); ++ri) {
        const Rule& r = sp.program.rules[ri];
        size_t comp = componentOf.at(r.head.predicate);
        auto it = stratumIdxOfComponent.find(comp);
        if (it == stratumIdxOfComponent.end()) continue;
        Stratum& s = sp.strata[it->second];
        s.exitRules.push_back(ri); // classifyRules refines this split
        if (r.headAgg && s.sccFlag) {
            if (!r.headAgg->isExtremum())
                throw NotStratifiable("count aggregate on recursive predicate '" +
                                      symName(r.head.predicate) +
                                      "' cannot be evaluated inside its own recursion");
            auto& known = specOf[r.head.predicate];
            if (known && *known != *r.headAgg)
                throw NotStratifiable("conflicting aggregate constraints on recursive predicate '" +
                                      symName(r.head.predicate) + "'");
            known = r.headAgg;
            s.pushed = true;
            sp.aggInRecursion.emplace_back(it->second, ri, *r.headAgg);
        }
    }
    classifyRules(sp);
    return sp;
}

StratifiedProgram& classifyRules(StratifiedProgram& sp) {
    for (auto& s : sp.strata) {
        std::vector<size_t> all;
        all.insert(all.end(), s.exitRules.begin(), s.exitRules.end());
        all.insert(all.end(), s.recursiveRules.begin(), s.recursiveRules.end());
        std::sort(all.begin(), all.end());
        s.exitRules.clear();
        s.recursiveRules.clear();
        for (size_t ri : all) {
            const Rule& r = sp.program.rules[ri];
            bool recursive = false;
            for (const auto& b : r.body)
                if (!b.negated && b.atom.isRelational() && b.atom.kind != AtomKind::Foreign &&
                    s.containsPred(b.atom.predicate))
                    recursive = true;
            (recursive ? s.recursiveRules : s.exitRules).push_back(ri);
        }
    }
    return sp;
}

namespace {

Term substituteTerm(const Term& t, const std::map<SymId, Term>& sub) {
    if (t.isVariable()) {
        auto it = sub.find(t.name);
        if (it != sub.end()) return it->second;
    }
    return t;
}

Expr substituteExpr(const Expr& e, const std::map<SymId, Term>& sub) {
    if (e.isLeaf()) return Expr::leafOf(substituteTerm(e.leaf, sub));
    return Expr::binary(e.op, substituteExpr(*e.lhs, sub), substituteExpr(*e.rhs, sub));
}

Atom substituteAtom(const Atom& a, const std::map<SymId, Term>& sub) {
    Atom out = a;
    if (a.isBuiltin()) {
        out.lhs = substituteExpr(*a.lhs, sub);
        out.rhs = substituteExpr(*a.rhs, sub);
        // Re-derive the arithmetic/comparison split: substitution may have
        // replaced the assignment target with a constant.
        return Atom::builtin(a.cmp, std::move(*out.lhs), std::move(*out.rhs));
    }
    for (auto& t : out.args) t = substituteTerm(t, sub);
    return out;
}

} // namespace

Program inlineConditionRules(const Program& input) {
    Program p = input;
    p.resolveAtomKinds();

    // Predicates referenced under negation are never inlined.
    std::set<SymId> negated;
    for (const auto& r : p.rules)
        for (const auto& b : r.body)
            if (b.negated && b.atom.isRelational()) negated.insert(b.atom.predicate);

    // Greatest fixpoint: condition predicates bottom out in builtins only.
    std::set<SymId> cond;
    for (const auto& r : p.rules) cond.insert(r.head.predicate);
    for (const auto& f : p.facts) cond.erase(f.predicate);
    for (const auto& d : p.decls) cond.erase(d.predicate);
    for (SymId n : negated) cond.erase(n);
    if (p.query) cond.erase(p.query->predicate);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : p.rules) {
            if (!cond.count(r.head.predicate)) continue;
            for (const auto& b : r.body) {
                bool ok = b.atom.isBuiltin() ||
                          (b.atom.kind != AtomKind::Foreign && !b.negated &&
                           cond.count(b.atom.predicate));
                if (!ok) {
                    cond.erase(r.head.predicate);
                    changed = true;
                    break;
                }
            }
        }
    }
    if (cond.empty()) return p;

    // Fully expanded alternatives per condition predicate (binds formal head
    // vars); DFS detects condition rules referencing each other cyclically.
    std::map<SymId, std::vector<Rule>> expanded;
    std::set<SymId> inProgress;
    std::function<void(SymId)> expand = [&](SymId pred) {
        if (expanded.count(pred)) return;
        if (inProgress.count(pred))
            throw InliningCycle("condition predicate '" + symName(pred) +
                                "' is defined in terms of itself");
        inProgress.insert(pred);
        std::vector<Rule> alts;
        for (const auto& r : p.rules) {
            if (r.head.predicate != pred) continue;
            for (const auto& t : r.head.args)
                if (!t.isVariable())
                    throw AnalysisError("condition rule heads must use distinct variables: " +
                                        toString(r));
            std::set<SymId> seen;
            for (const auto& t : r.head.args)
                if (!seen.insert(t.name).second)
                    throw AnalysisError("condition rule heads must use distinct variables: " +
                                        toString(r));
            // Expand nested condition atoms first.
            std::vector<Rule> variants{Rule{r.head, std::nullopt, {}}};
            for (const auto& b : r.body) {
                if (b.atom.isRelational() && cond.count(b.atom.predicate)) {
                    expand(b.atom.predicate);
                    std::vector<Rule> next;
                    for (const auto& v : variants) {
                        for (const auto& alt : expanded.at(b.atom.predicate)) {
                            Rule nv = v;
                            std::map<SymId, Term> sub;
                            for (size_t i = 0; i < alt.head.args.size(); ++i)
                                sub[alt.head.args[i].name] = b.atom.args[i];
                            for (const auto& lit : alt.body)
                                nv.body.push_back({substituteAtom(lit.atom, sub), lit.negated});
                            next.push_back(std::move(nv));
                        }
                    }
                    variants = std::move(next);
                } else {
                    for (auto& v : variants) v.body.push_back(b);
                }
            }
            for (auto& v : variants) alts.push_back(std::move(v));
        }
        inProgress.erase(pred);
        expanded.emplace(pred, std::move(alts));
    };
    for (SymId pred : cond) expand(pred);

    // Expand call sites in the remaining rules.
    Program out;
    out.decls = p.decls;
    out.foreigns = p.foreigns;
    out.config = p.config;
    out.facts = p.facts;
    out.query = p.query;
    for (const auto& r : p.rules) {
        if (cond.count(r.head.predicate)) continue;
        std::vector<Rule> variants{Rule{r.head, r.headAgg, {}}};
        for (const auto& b : r.body) {
            if (b.atom.isRelational() && !b.negated && cond.count(b.atom.predicate)) {
                std::vector<Rule> next;
                for (const auto& v : variants) {
                    for (const auto& alt : expanded.at(b.atom.predicate)) {
                        Rule nv = v;
                        std::map<SymId, Term> sub;
                        for (size_t i = 0; i < alt.head.args.size(); ++i)
                            sub[alt.head.args[i].name] = b.atom.args[i];
                        for (const auto& lit : alt.body)
                            nv.body.push_back({substituteAtom(lit.atom, sub), lit.negated});
                        next.push_back(std::move(nv));
                    }
                }
                variants = std::move(next);
            } else {
                for (auto& v : variants) v.body.push_back(b);
            }
        }
        for (auto& v : variants) out.rules.push_back(std::move(v));
    }
    out.resolveAtomKinds();
    return out;
}

std::vector<SafetyViolation> safetyCheck(const Program& p, const std::optional<Atom>& demandQuery) {
    std::vector<SafetyViolation> violations;
    for (size_t ri = 0; ri < p.rules.size(); ++ri) {
        const Rule& r = p.rules[ri];
        std::set<SymId> bound;
        if (demandQuery && r.head.predicate == demandQuery->predicate &&
            r.head.args.size() == demandQuery->args.size()) {
            for (size_t i = 0; i < demandQuery->args.size(); ++i)
                if (demandQuery->args[i].isConstant() && r.head.args[i].isVariable())
                    bound.insert(r.head.args[i].name);
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& b : r.body) {
                if (b.negated) continue;
                if (b.atom.kind == AtomKind::Foreign) {
                    const ForeignDecl* fd = p.foreignOf(b.atom.predicate);
                    if (!fd) continue;
                    bool ready = true;
                    for (size_t i = 0; i < b.atom.args.size() && i < fd->boundMode.size(); ++i)
                        if (fd->boundMode[i] && b.atom.args[i].isVariable() &&
                            !bound.count(b.atom.args[i].name))
                            ready = false;
                    if (!ready) continue;
                    for (size_t i = 0; i < b.atom.args.size(); ++i)
                        if (b.atom.args[i].isVariable() &&
                            bound.insert(b.atom.args[i].name).second)
                            changed = true;
                } else if (b.atom.isRelational()) {
                    for (const auto& t : b.atom.args)
                        if (t.isVariable() && bound.insert(t.name).second) changed = true;
                } else if (b.atom.kind == AtomKind::Arithmetic) {
                    auto rhsVars = b.atom.rhs->vars();
                    bool ready = std::all_of(rhsVars.begin(), rhsVars.end(),
                                             [&](SymId v) { return bound.count(v) != 0; });
                    SymId target = b.atom.lhs->leaf.name;
                    if (ready && bound.insert(target).second) changed = true;
                }
            }
        }
        auto flag = [&](SymId var, const std::string& reason) {
            violations.push_back({ri, var, reason});
        };
        for (const auto& t : r.head.args)
            if (t.isVariable() && !bound.count(t.name))
                flag(t.name, "head variable not bound by a positive body atom");
        for (const auto& b : r.body) {
            if (b.negated) {
                for (SymId v : b.atom.vars())
                    if (!bound.count(v)) flag(v, "variable of a negated atom not bound");
            } else if (b.atom.isBuiltin()) {
                for (SymId v : b.atom.vars())
                    if (!bound.count(v)) flag(v, "variable of a builtin not bound");
            } else if (b.atom.kind == AtomKind::Foreign) {
                const ForeignDecl* fd = p.foreignOf(b.atom.predicate);
                if (!fd) continue;
                for (size_t i = 0; i < b.atom.args.size() && i < fd->boundMode.size(); ++i)
                    if (fd->boundMode[i] && b.atom.args[i].isVariable() &&
                        !bound.count(b.atom.args[i].name))
                        flag(b.atom.args[i].name, "bound-mode foreign argument not bound");
            }
        }
    }
    return violations;
}

Program substituteConfig(const Program& input) {
    if (input.config.empty()) return input;
    Program p = input;
    std::map<SymId, Term> sub;
    for (const auto& [name, value] : p.config) sub[intern(name)] = value;
    auto subTermOrSym = [&](const Term& t) -> Term {
        if (t.isVariable() || t.kind == Term::Kind::SymConst) {
            auto it = sub.find(t.name);
            if (it != sub.end()) return it->second;
        }
        return t;
    };
    for (auto& r : p.rules) {
        for (auto& b : r.body) {
            if (b.atom.isBuiltin()) {
                std::function<Expr(const Expr&)> subExpr = [&](const Expr& e) -> Expr {
                    if (e.isLeaf()) return Expr::leafOf(subTermOrSym(e.leaf));
                    return Expr::binary(e.op, subExpr(*e.lhs), subExpr(*e.rhs));
                };
                b.atom = Atom::builtin(b.atom.cmp, subExpr(*b.atom.lhs), subExpr(*b.atom.rhs));
            } else {
                for (auto& t : b.atom.args) t = subTermOrSym(t);
            }
        }
    }
    return p;
}

StratifiedProgram analyzeProgram(const Program& input, const std::optional<Atom>& query,
                                 bool enforceSafety) {
    Program p = substituteConfig(input);
    p = inlineConditionRules(p);
    p.arities(); // throws on conflicts

    // Every referenced predicate must be defined somewhere.
    {
        std::set<SymId> defined;
        for (const auto& r : p.rules) defined.insert(r.head.predicate);
        for (const auto& f : p.facts) defined.insert(f.predicate);
        for (const auto& d : p.decls) defined.insert(d.predicate);
        for (const auto& f : p.foreigns) defined.insert(f.predicate);
        for (const auto& r : p.rules)
            for (const auto& b : r.body)
                if (b.atom.isRelational() && !defined.count(b.atom.predicate))
                    throw AnalysisError("undefined predicate '" + symName(b.atom.predicate) +
                                        "' (no rules, facts, declaration or foreign registration)");
        const Atom* q = query ? &*query : (p.query ? &*p.query : nullptr);
        if (q && !defined.count(q->predicate))
            throw AnalysisError("undefined query predicate '" + symName(q->predicate) + "'");
    }

    std::optional<Atom> effectiveQuery = query ? query : p.query;
    if (enforceSafety) {
        auto violations = safetyCheck(p, effectiveQuery);
        if (!violations.empty()) {
            const auto& v = violations.front();
            throw AnalysisError("unsafe rule: " + toString(p.rules[v.ruleIdx]) + " — variable '" +
                                symName(v.variable) + "': " + v.reason);
        }
    }
    return stratify(buildGraph(p), p);
}

} // namespace premlog
