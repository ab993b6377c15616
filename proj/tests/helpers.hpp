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
#include <random>
#include <string>
#include <vector>

#include "premlog/engine.hpp"
#include "premlog/facts.hpp"
#include "premlog/parser.hpp"

namespace premlog::testing {

inline std::filesystem::path corpusRoot() {
#ifdef PREMLOG_CORPUS_DIR
    return PREMLOG_CORPUS_DIR;
#else
    return "corpus";
#endif
}

// The stratified shortest-path program (aggregate above the recursion).
inline const char* kShortestPathStratified = R"(
.decl arc(sym, sym, int >= 0)

path(X, Y, D) <- arc(X, Y, D).
path(X, Y, D) <- path(X, Z, Dxz), arc(Z, Y, Dzy), D = Dxz + Dzy.
shortestpath(X, Y, min<D>) <- path(X, Y, D).
)";

// The pushed form, as the optimizer should produce it.
inline const char* kShortestPathPushed = R"(
.decl arc(sym, sym, int >= 0)

path(X, Y, min<D>) <- arc(X, Y, D).
path(X, Y, min<D>) <- path(X, Z, Dxz), arc(Z, Y, Dzy), D = Dxz + Dzy.
shortestpath(X, Y, D) <- path(X, Y, D).
)";

// Distance independent of the recursive input: intrinsically pre-mappable.
inline const char* kShortestPathScaled = R"(
.decl arc(sym, sym, int >= 0)

path(X, Y, min<D>) <- arc(X, Y, D).
path(X, Y, min<D>) <- path(X, Z, Dxz), arc(Z, Y, Dzy), D = 3.14 * Dzy.
shortestpath(X, Y, D) <- path(X, Y, D).
)";

// Anti-monotone distance: not pre-mappable, certification finds a witness.
inline const char* kShortestPathMinus = R"(
.decl arc(sym, sym, int >= 0)

path(X, Y, min<D>) <- arc(X, Y, D).
path(X, Y, min<D>) <- path(X, Z, Dxz), arc(Z, Y, Dzy), D = Dzy - Dxz.
shortestpath(X, Y, D) <- path(X, Y, D).
)";

inline const char* kCoinChange = R"(
.decl coins(int >= 1)

num(C, 1) <- coins(C).
num(V, min<N>) <- coins(C), C < V, X = V - C, num(X, Y), N = Y + 1.
)";

inline Interpretation arcsOf(const std::vector<std::tuple<std::string, std::string, int64_t>>& arcs) {
    Interpretation edb;
    Relation& rel = edb.ensure(intern("arc"), 3);
    for (const auto& [u, v, w] : arcs)
        rel.insert({Value::ofSym(u), Value::ofSym(v), Value::ofInt(w)});
    return edb;
}

inline Interpretation coinsOf(const std::vector<int64_t>& coins) {
    Interpretation edb;
    Relation& rel = edb.ensure(intern("coins"), 1);
    for (int64_t c : coins) rel.insert({Value::ofInt(c)});
    return edb;
}

// Seeded random digraph: up to maxN vertices, nonnegative integer weights.
inline std::vector<std::tuple<std::string, std::string, int64_t>> randomGraph(
    std::mt19937& rng, size_t maxN, size_t maxM, int64_t maxW) {
    std::uniform_int_distribution<size_t> nDist(4, maxN);
    size_t n = nDist(rng);
    std::uniform_int_distribution<size_t> mDist(n, std::min(maxM, n * (n - 1)));
    size_t m = mDist(rng);
    std::uniform_int_distribution<size_t> vDist(0, n - 1);
    std::uniform_int_distribution<int64_t> wDist(0, maxW);
    std::set<std::pair<size_t, size_t>> seen;
    std::vector<std::tuple<std::string, std::string, int64_t>> arcs;
    auto name = [](size_t i) {
        char buf[16];
        snprintf(buf, sizeof buf, "n%03zu", i);
        return std::string(buf);
    };
    size_t attempts = 0;
    while (arcs.size() < m && attempts < 20 * m) {
        ++attempts;
        size_t u = vDist(rng), v = vDist(rng);
        if (u == v || !seen.insert({u, v}).second) continue;
        arcs.emplace_back(name(u), name(v), wDist(rng));
    }
    return arcs;
}

// Seeded random DAG (edges go up in vertex order): safe for the stratified
// baseline. Chain plus a few shortcuts keeps the walk count small.
inline std::vector<std::tuple<std::string, std::string, int64_t>> randomDag(std::mt19937& rng,
                                                                            size_t n,
                                                                            size_t shortcuts,
                                                                            int64_t maxW) {
    std::uniform_int_distribution<int64_t> wDist(1, maxW);
    auto name = [](size_t i) {
        char buf[16];
        snprintf(buf, sizeof buf, "n%03zu", i);
        return std::string(buf);
    };
    std::vector<std::tuple<std::string, std::string, int64_t>> arcs;
    for (size_t i = 0; i + 1 < n; ++i) arcs.emplace_back(name(i), name(i + 1), wDist(rng));
    std::uniform_int_distribution<size_t> startDist(0, n - 3);
    std::set<std::pair<size_t, size_t>> seen;
    for (size_t s = 0; s < shortcuts; ++s) {
        size_t i = startDist(rng);
        std::uniform_int_distribution<size_t> lenDist(2, std::min<size_t>(7, n - 1 - i));
        size_t j = i + lenDist(rng);
        if (!seen.insert({i, j}).second) continue;
        arcs.emplace_back(name(i), name(j), wDist(rng) * 3);
    }
    return arcs;
}

// Random relation for property tests over gamma and the negation rewrite.
inline Relation randomRelation(std::mt19937& rng, size_t maxTuples, size_t arity) {
    std::uniform_int_distribution<size_t> tDist(0, maxTuples);
    std::uniform_int_distribution<int64_t> vDist(0, 6);
    std::uniform_int_distribution<int> symDist(0, 3);
    Relation rel(intern("r"), arity);
    size_t count = tDist(rng);
    const char* syms[] = {"a", "b", "c", "d"};
    for (size_t i = 0; i < count; ++i) {
        Tuple t;
        for (size_t c = 0; c < arity; ++c) {
            if (c == 0)
                t.push_back(Value::ofSym(syms[symDist(rng)]));
            else
                t.push_back(Value::ofInt(vDist(rng)));
        }
        rel.insert(std::move(t));
    }
    return rel;
}

inline QueryOutcome runText(const std::string& program, const Interpretation& edb,
                            const std::string& query, QueryMode mode, size_t cap = 10000) {
    Program p = parseProgram(program);
    EvalOptions opts;
    opts.cap = cap;
    std::optional<Atom> q;
    if (!query.empty()) q = parseQueryAtom(query);
    return evalQuery(p, edb, q, mode, opts);
}

} // namespace premlog::testing
