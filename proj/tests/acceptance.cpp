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

// Acceptance suite: one criterion per check, one pass/fail line each.
// Run via ctest or directly; exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "premlog/certify.hpp"
#include "premlog/corpus.hpp"
#include "premlog/json_io.hpp"
#include "premlog/oracles.hpp"
#include "premlog/parser.hpp"
#include "premlog/prem.hpp"

using namespace premlog;
using namespace premlog::testing;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty()) {
        std::printf("[PASS] criterion %2d: %s (%.0f ms)\n", number, title.c_str(), ms);
    } else {
        ++failures;
        std::printf("[FAIL] criterion %2d: %s — %s\n", number, title.c_str(), error.c_str());
    }
    std::fflush(stdout);
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

double secondsSince(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main() {
    const auto corpus = corpusRoot();

    // 1. Coin change reproduces the documented numbers, under a second.
    criterion(1, "coin change: num(9)->2 and num(6)->1, < 1 s", [&] {
        auto start = std::chrono::steady_clock::now();
        CaseResult nine = runCase(corpus, "coin_change_9");
        require(nine.result.size() == 1 &&
                    nine.result.contains({Value::ofInt(9), Value::ofInt(2)}),
                "num(9, N) must be exactly {num(9, 2)}");
        CaseResult six = runCase(corpus, "coin_change_6");
        require(six.result.size() == 1 &&
                    six.result.contains({Value::ofInt(6), Value::ofInt(1)}),
                "num(6, N) must be exactly {num(6, 1)}");
        require(secondsSince(start) < 1.0, "runtime exceeded 1 s");
    });

    // 2. Pushed shortest path equals Floyd–Warshall on 25 seeded graphs.
    criterion(2, "pushed shortest path == Floyd-Warshall on 25 seeded graphs, < 30 s", [&] {
        auto start = std::chrono::steady_clock::now();
        std::mt19937 rng(2026);
        Program p = parseProgram(kShortestPathPushed);
        StratifiedProgram sp = stratify(buildGraph(p), p);
        for (int i = 0; i < 25; ++i) {
            auto arcs = randomGraph(rng, 200, 2000, 100);
            Interpretation edb = arcsOf(arcs);
            EvalResult res = evalConstrained(sp, edb);
            require(!res.capExceeded, "pushed evaluation must terminate");
            Relation expected =
                oracles::floydWarshall(edb.at(intern("arc")), intern("shortestpath"));
            require(res.interp.at(intern("shortestpath")).sameTuples(expected),
                    "instance " + std::to_string(i) + " disagrees with the oracle");
        }
        require(secondsSince(start) < 30.0, "runtime exceeded 30 s");
    });

    // 3. Positive-weight cycles: stratified exceeds 10,000 iterations, pushed
    //    converges within |V| semi-naive iterations on the same graph.
    criterion(3, "cycles: stratified exceeds cap 10000, pushed converges in <= |V|", [&] {
        std::vector<std::vector<std::tuple<std::string, std::string, int64_t>>> graphs;
        graphs.push_back({{"a", "b", 1}, {"b", "a", 1}, {"b", "c", 2}});
        std::mt19937 rng(33);
        auto seeded = randomGraph(rng, 30, 90, 9);
        seeded.emplace_back("n000", "n001", 1); // ensure a positive cycle
        seeded.emplace_back("n001", "n000", 1);
        graphs.push_back(seeded);

        Program p = parseProgram(kShortestPathStratified);
        StratifiedProgram sp = stratify(buildGraph(p), p);
        Program pushedP = parseProgram(kShortestPathPushed);
        StratifiedProgram spPushed = stratify(buildGraph(pushedP), pushedP);
        for (const auto& arcs : graphs) {
            std::set<std::string> verts;
            for (const auto& [u, v, w] : arcs) {
                verts.insert(u);
                verts.insert(v);
            }
            Interpretation edb = arcsOf(arcs);
            EvalOptions opts;
            opts.cap = 10000;
            EvalResult strat = evalSeminaive(sp, edb, opts);
            require(strat.capExceeded, "stratified form must exceed 10000 iterations");
            EvalResult pushed = evalConstrained(spPushed, edb, opts);
            require(!pushed.capExceeded, "pushed form must converge");
            require(pushed.stats.perStratum[0].iterations <= verts.size(),
                    "pushed SCC must converge within |V| iterations");
        }
    });

    // 4. Static classification matches the documented verdicts via explain.
    criterion(4, "explain: sum->full, 3.14*Dzy->intrinsic, X=a->radical exit push", [&] {
        Program strat = parseProgram(kShortestPathStratified);
        auto j = explainJson(strat, parseQueryAtom("shortestpath(a, Y, D)"));
        require(j.contains("rewrite") && j["rewrite"].contains("pushed"),
                "explain must show the push rewrite diff");
        bool sawFull = false;
        for (const auto& entry : j["prem"])
            if (entry["verdict"] == "full" &&
                entry["rule"].get<std::string>().find("D = Dxz + Dzy") != std::string::npos)
                sawFull = true;
        require(sawFull, "r2.2-style rule must classify full");

        auto scaled = explainJson(parseProgram(kShortestPathScaled), std::nullopt);
        bool sawIntrinsic = false;
        for (const auto& entry : scaled["prem"])
            if (entry["verdict"] == "intrinsic") sawIntrinsic = true;
        require(sawIntrinsic, "the 3.14 * Dzy variant must classify intrinsic");

        require(j["constant_push"]["verdict"] == "radical",
                "X=a on the projection must be radical");
        bool exitSpecialized = false, recursiveTouched = false;
        for (const auto& rule : j["constant_push"]["rewritten_rules"]) {
            std::string text = rule.get<std::string>();
            if (text == "path(a, Y, min<D>) <- arc(a, Y, D).") exitSpecialized = true;
            if (text.find("path(a, Z") != std::string::npos ||
                text.find("<- path(a") != std::string::npos)
                recursiveTouched = true;
        }
        require(exitSpecialized, "the exit rule must carry the pushed constant");
        require(!recursiveTouched, "recursive rules must stay untouched");
    });

    // 5. Runtime certification on the corpus + the counterexample + random
    //    interpretations for full-classified rules.
    criterion(5, "certification: 4 case studies clean, counterexample violates, 100 random I",
              [&] {
        for (const char* name :
             {"shortest_path_cyclic", "coin_change_9", "knn_small", "ml_linreg_pushed"}) {
            CaseResult res = runCase(corpus, name);
            require(res.cert.hasConstraint, std::string(name) + " must certify a constraint");
            require(!res.cert.perIteration.empty(),
                    std::string(name) + " must record iterations");
            require(!res.cert.anyViolation(),
                    std::string(name) + " must hold the full identity at every iteration");
        }
        CaseResult minus = runCase(corpus, "non_prem_minus");
        require(minus.cert.anyViolation(), "the D = Dzy - Dxz case must violate");
        bool witnessed = false;
        for (const auto& rec : minus.cert.perIteration)
            if (rec.witness &&
                *rec.witness == Tuple{Value::ofSym("a"), Value::ofSym("c"), Value::ofInt(-1)})
                witnessed = true;
        require(witnessed, "violation witness must be path(a, c, -1)");

        // property part: 100 random interpretations per full-classified rule
        {
            Program p = parseProgram(kShortestPathPushed);
            StratifiedProgram sp = stratify(buildGraph(p), p);
            auto [si, ri, spec] = sp.aggInRecursion.front();
            ConstraintGamma gamma{p.rules[ri].head.predicate, spec};
            std::vector<Rule> recRules;
            for (size_t rri : sp.strata[si].recursiveRules) recRules.push_back(p.rules[rri]);
            std::mt19937 rng(505);
            const char* syms[] = {"a", "b", "c", "d", "e"};
            std::uniform_int_distribution<int> symDist(0, 4);
            std::uniform_int_distribution<int64_t> wDist(0, 9);
            for (int i = 0; i < 100; ++i) {
                Interpretation I;
                Relation& arc = I.ensure(intern("arc"), 3);
                Relation& path = I.ensure(intern("path"), 3);
                for (int k = 0; k < 8; ++k)
                    arc.insert({Value::ofSym(syms[symDist(rng)]),
                                Value::ofSym(syms[symDist(rng)]), Value::ofInt(wDist(rng))});
                for (int k = 0; k < 10; ++k)
                    path.insert({Value::ofSym(syms[symDist(rng)]),
                                 Value::ofSym(syms[symDist(rng)]), Value::ofInt(wDist(rng))});
                IterationRecord rec = certifyStep(p, recRules, gamma, I, 1);
                require(rec.fullOk, "full identity must hold on random interpretation " +
                                        std::to_string(i));
            }
        }
        {
            PreparedProgram prepared = prepareForEvaluation(
                parseProgram(kCoinChange), parseQueryAtom("num(9, N)"), QueryMode::Pushed);
            StratifiedProgram sp =
                stratify(buildGraph(prepared.program), prepared.program);
            auto [si, ri, spec] = sp.aggInRecursion.front();
            ConstraintGamma gamma{prepared.program.rules[ri].head.predicate, spec};
            std::vector<Rule> recRules;
            for (size_t rri : sp.strata[si].recursiveRules)
                recRules.push_back(prepared.program.rules[rri]);
            std::mt19937 rng(507);
            std::uniform_int_distribution<int64_t> vDist(1, 9);
            for (int i = 0; i < 100; ++i) {
                Interpretation I;
                Relation& coins = I.ensure(intern("coins"), 1);
                coins.insert({Value::ofInt(2)});
                coins.insert({Value::ofInt(3)});
                coins.insert({Value::ofInt(6)});
                Relation& demand = I.ensure(intern("demand_num"), 1);
                for (int k = 0; k < 5; ++k) demand.insert({Value::ofInt(vDist(rng))});
                Relation& num = I.ensure(intern("num"), 2);
                for (int k = 0; k < 7; ++k)
                    num.insert({Value::ofInt(vDist(rng)), Value::ofInt(vDist(rng))});
                IterationRecord rec = certifyStep(prepared.program, recRules, gamma, I, 1);
                require(rec.fullOk, "coin full identity must hold on random interpretation " +
                                        std::to_string(i));
            }
        }
    });

    // 6. Aggregate operator == negation rewrite on 200 random relations.
    criterion(6, "min/max/companion == negation rewrite on 200 random relations", [&] {
        std::mt19937 rng(606);
        for (int i = 0; i < 200; ++i) {
            size_t arity = 2 + static_cast<size_t>(i % 3);
            Relation r = randomRelation(rng, 50, arity);
            AggregateSpec spec;
            spec.kind = i % 2 ? AggKind::Max : AggKind::Min;
            spec.valueCol = arity - 1;
            for (size_t c = 0; c + 1 < arity; ++c) {
                if (arity >= 3 && c == arity - 2 && i % 3 == 0)
                    spec.companionCols.push_back(c);
                else
                    spec.groupbyCols.push_back(c);
            }
            Relation viaOperator = applyGamma(spec, r);
            Relation viaRewrite = oracles::negationRewriteExtremum(spec, r);
            require(viaOperator.sameTuples(viaRewrite),
                    "relation " + std::to_string(i) + " disagrees with the rewrite");
        }
    });

    // 7. kNN end to end on 10 seeded instances.
    criterion(7, "kNN == brute-force sort-vote oracle on 10 seeded instances", [&] {
        CorpusCase base = loadCase(corpus, "knn_small");
        std::mt19937 rng(707);
        std::uniform_real_distribution<double> coord(0.0, 10.0);
        const char* labels[] = {"a", "b", "c"};
        for (int i = 0; i < 10; ++i) {
            int64_t k = std::vector<int64_t>{1, 3, 5}[i % 3];
            size_t trainN = 50 + static_cast<size_t>(i) * 45; // up to 455
            size_t testN = 5 + static_cast<size_t>(i);
            std::vector<oracles::TrainingPoint> tr;
            std::vector<oracles::TestPoint> te;
            Interpretation edb;
            Relation& trRel = edb.ensure(intern("tr"), 4);
            Relation& teRel = edb.ensure(intern("te"), 3);
            for (size_t t = 0; t < trainN; ++t) {
                oracles::TrainingPoint pt{static_cast<int64_t>(t + 1), coord(rng), coord(rng),
                                          labels[t % 3]};
                tr.push_back(pt);
                trRel.insert({Value::ofInt(pt.id), Value::ofReal(pt.x), Value::ofReal(pt.y),
                              Value::ofSym(pt.label)});
            }
            for (size_t t = 0; t < testN; ++t) {
                oracles::TestPoint pt{static_cast<int64_t>(100 + t), coord(rng), coord(rng)};
                te.push_back(pt);
                teRel.insert({Value::ofInt(pt.id), Value::ofReal(pt.x), Value::ofReal(pt.y)});
            }
            Program p = base.program;
            p.config["K"] = Term::intConst(k);
            QueryOutcome out =
                evalQuery(p, edb, parseQueryAtom("classify(Id, V, L)"), QueryMode::Auto, {});
            Relation expected = oracles::knnClassify(tr, te, k, intern("classify"));
            require(out.result.sameTuples(expected),
                    "instance " + std::to_string(i) + " (K=" + std::to_string(k) +
                        ") disagrees with the oracle");
        }
    });

    // 8. ML template equivalence.
    criterion(8, "ML: identical trajectories, non-increasing E, same stopping point", [&] {
        CorpusCase t = loadCase(corpus, "ml_linreg_temporal");
        CorpusCase pc = loadCase(corpus, "ml_linreg_pushed");
        ForeignRegistry reg;
        registerLinearRegressionFromProgram(reg, t.program, t.edb);
        EvalOptions opts;
        opts.foreigns = &reg;
        require(mlTemplateEquivalence(t.program, pc.program, t.edb, opts, 1e-9),
                "final models must agree within 1e-9");
        MlRun a = runMlProgram(t.program, t.edb, opts);
        MlRun b = runMlProgram(pc.program, t.edb, opts);
        require(a.converged && b.converged, "both runs must converge");
        require(a.models.size() == b.models.size(), "trajectories must have equal length");
        for (size_t j = 0; j < a.models.size(); ++j)
            for (size_t kk = 0; kk < a.models[j].size(); ++kk)
                require(std::abs(a.models[j][kk] - b.models[j][kk]) <= 1e-9,
                        "trajectory diverges at iteration " + std::to_string(j));
        for (size_t j = 0; j + 1 < a.errors.size(); ++j)
            require(a.errors[j + 1] <= a.errors[j], "error sequence must be non-increasing");
        double delta = 1e-4;
        for (size_t j = 0; j + 1 < a.errors.size(); ++j)
            require(a.errors[j] > delta, "stopping must occur at the first E <= delta");
        require(!a.errors.empty() && a.errors.back() <= delta,
                "the final error must be at or below delta");
        require(a.errors.size() == b.errors.size(), "stopping iterations must agree");
    });

    // 9. Substituted performance property over the bench-flagged corpus graphs.
    criterion(9, "bench graphs: pushed derivations < stratified, <= iters * |relation|", [&] {
        size_t checked = 0;
        for (const auto& name : listCases(corpus)) {
            CorpusCase c = loadCase(corpus, name);
            if (!c.meta.value("bench", false)) continue;
            Program p = c.program;
            StratifiedProgram sp = stratify(buildGraph(p), p);
            EvalOptions opts;
            opts.cap = 10000;
            QueryOutcome pushed = evalQuery(p, c.edb, std::nullopt, QueryMode::Pushed, opts);
            require(!pushed.capExceeded, name + ": pushed mode must terminate");
            EvalResult strat = evalSeminaive(sp, c.edb, opts);
            if (!strat.capExceeded) {
                require(pushed.stats.derivationsAttempted < strat.stats.derivationsAttempted,
                        name + ": pushed derivations must be strictly fewer");
                ++checked;
            }
            size_t relationSize = pushed.interp.at(intern("path")).size();
            require(pushed.stats.derivationsAttempted <=
                        pushed.stats.iterations * relationSize,
                    name + ": derivations must be bounded by iterations * relation size");
        }
        // additional seeded DAGs where the baseline terminates
        std::mt19937 rng(909);
        for (int i = 0; i < 3; ++i) {
            auto arcs = randomDag(rng, 30 + i * 5, 5, 9);
            Interpretation edb = arcsOf(arcs);
            Program p = parseProgram(kShortestPathStratified);
            StratifiedProgram sp = stratify(buildGraph(p), p);
            EvalResult strat = evalSeminaive(sp, edb);
            QueryOutcome pushed = evalQuery(p, edb, std::nullopt, QueryMode::Pushed, {});
            require(!strat.capExceeded && !pushed.capExceeded, "DAG runs must terminate");
            require(pushed.stats.derivationsAttempted < strat.stats.derivationsAttempted,
                    "seeded DAG " + std::to_string(i) + ": pushed must prune");
            size_t relationSize = pushed.interp.at(intern("path")).size();
            require(pushed.stats.derivationsAttempted <=
                        pushed.stats.iterations * relationSize,
                    "seeded DAG " + std::to_string(i) + ": derivation bound violated");
            ++checked;
        }
        require(checked >= 4, "the bench set must cover at least four graphs");
    });

    // 10. Naive == semi-naive on the corpus and 25 random acyclic instances.
    criterion(10, "naive == semi-naive on corpus cases and 25 random DAGs", [&] {
        for (const auto& name : listCases(corpus)) {
            CorpusCase c = loadCase(corpus, name);
            ForeignRegistry reg;
            EvalOptions opts;
            opts.cap = 400; // enough for every terminating corpus case
            if (!c.program.foreigns.empty()) {
                registerLinearRegressionFromProgram(reg, c.program, c.edb);
                opts.foreigns = &reg;
            }
            PreparedProgram prepared = prepareForEvaluation(c.program, c.query, QueryMode::Auto);
            StratifiedProgram sp = stratify(buildGraph(prepared.program), prepared.program);
            Interpretation edb = mergeProgramFacts(c.edb, prepared.program);
            EvalResult naive = evalStratified(sp, edb, opts);
            EvalResult semi = evalSeminaive(sp, edb, opts);
            require(naive.capExceeded == semi.capExceeded,
                    name + ": modes must agree on termination");
            if (naive.capExceeded) continue; // cyclic baseline: nothing to compare
            for (SymId pred : prepared.program.idbPredicates())
                require(naive.interp.sameOn(pred, semi.interp),
                        name + ": naive and semi-naive disagree on '" + symName(pred) + "'");
        }
        std::mt19937 rng(1010);
        Program p = parseProgram(kShortestPathStratified);
        StratifiedProgram sp = stratify(buildGraph(p), p);
        for (int i = 0; i < 25; ++i) {
            auto arcs = randomDag(rng, 10 + (i % 12), 3, 9);
            Interpretation edb = arcsOf(arcs);
            EvalResult naive = evalStratified(sp, edb);
            EvalResult semi = evalSeminaive(sp, edb);
            require(!naive.capExceeded && !semi.capExceeded, "DAG runs must terminate");
            require(naive.interp.sameOn(intern("path"), semi.interp) &&
                        naive.interp.sameOn(intern("shortestpath"), semi.interp),
                    "instance " + std::to_string(i) + " disagrees");
        }
    });

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
