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

#include "premlog/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace premlog::oracles {

Relation floydWarshall(const Relation& arcs, SymId outPred) {
    // Collect vertices deterministically.
    std::vector<SymId> verts;
    {
        std::set<SymId> seen;
        for (const auto& t : arcs.tuples()) {
            seen.insert(t[0].asSym());
            seen.insert(t[1].asSym());
        }
        verts.assign(seen.begin(), seen.end());
    }
    size_t n = verts.size();
    std::map<SymId, size_t> idx;
    for (size_t i = 0; i < n; ++i) idx[verts[i]] = i;

    const int64_t INF = std::numeric_limits<int64_t>::max() / 4;
    std::vector<std::vector<int64_t>> dist(n, std::vector<int64_t>(n, INF));
    for (const auto& t : arcs.tuples()) {
        size_t u = idx.at(t[0].asSym());
        size_t v = idx.at(t[1].asSym());
        dist[u][v] = std::min(dist[u][v], t[2].asInt());
    }
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (dist[i][k] == INF) continue;
            for (size_t j = 0; j < n; ++j) {
                if (dist[k][j] == INF) continue;
                dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
            }
        }

    Relation out(outPred, 3);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (dist[i][j] != INF)
                out.insert({Value::ofSym(verts[i]), Value::ofSym(verts[j]),
                            Value::ofInt(dist[i][j])});
    return out;
}

std::optional<int64_t> coinChangeMin(const std::vector<int64_t>& coins, int64_t value) {
    if (value < 0) return std::nullopt;
    const int64_t INF = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> table(static_cast<size_t>(value) + 1, INF);
    table[0] = 0;
    for (int64_t v = 1; v <= value; ++v)
        for (int64_t c : coins)
            if (c > 0 && c <= v && table[v - c] != INF)
                table[v] = std::min(table[v], table[v - c] + 1);
    if (table[value] == INF) return std::nullopt;
    return table[value];
}

std::set<int64_t> coinDemandClosure(const std::vector<int64_t>& coins, int64_t start) {
    std::set<int64_t> closure{start};
    std::vector<int64_t> work{start};
    while (!work.empty()) {
        int64_t v = work.back();
        work.pop_back();
        for (int64_t c : coins) {
            if (c >= v) continue; // C < V keeps the child positive
            int64_t child = v - c;
            if (closure.insert(child).second) work.push_back(child);
        }
    }
    return closure;
}

Relation knnClassify(const std::vector<TrainingPoint>& tr, const std::vector<TestPoint>& te,
                     int64_t k, SymId outPred) {
    Relation out(outPred, 3);
    for (const auto& q : te) {
        struct Entry {
            double d;
            int64_t id;
            const std::string* label;
        };
        std::vector<Entry> entries;
        entries.reserve(tr.size());
        for (const auto& p : tr) {
            double d = (q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y);
            entries.push_back({d, p.id, &p.label});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.d != b.d) return a.d < b.d;
            return a.id < b.id;
        });
        size_t take = std::min<size_t>(entries.size(), static_cast<size_t>(std::max<int64_t>(k, 0)));
        std::map<std::string, int64_t> votes;
        for (size_t i = 0; i < take; ++i) ++votes[*entries[i].label];
        int64_t best = 0;
        for (const auto& [label, v] : votes) best = std::max(best, v);
        for (const auto& [label, v] : votes)
            if (v == best)
                out.insert({Value::ofInt(q.id), Value::ofInt(v), Value::ofSym(label)});
    }
    return out;
}

GdTrace gradientDescent(const std::vector<std::vector<double>>& rows, size_t dim, double eta,
                        double delta, size_t cap) {
    GdTrace trace;
    std::vector<double> w(dim, 0.0);
    auto errorAndGrad = [&](const std::vector<double>& model) {
        double mse = 0.0;
        std::vector<double> grad(dim, 0.0);
        for (const auto& row : rows) {
            double pred = 0.0;
            for (size_t i = 0; i < dim; ++i) pred += model[i] * row[i];
            double resid = row[dim] - pred;
            mse += resid * resid;
            for (size_t i = 0; i < dim; ++i) grad[i] += -2.0 * row[i] * resid;
        }
        double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
        mse /= n;
        for (auto& g : grad) g /= n;
        return std::make_pair(mse, grad);
    };
    for (size_t iter = 0; iter <= cap; ++iter) {
        auto [mse, grad] = errorAndGrad(w);
        trace.models.push_back(w);
        trace.errors.push_back(mse);
        if (std::isnan(mse)) break;
        if (mse <= delta) {
            trace.converged = true;
            break;
        }
        for (size_t i = 0; i < dim; ++i) w[i] -= eta * grad[i];
    }
    return trace;
}

Relation negationRewriteExtremum(const AggregateSpec& spec, const Relation& r) {
    // shortestpath(..) <- p(..), !better(..) with
    // better(G, V) <- p(G, V), p(G, V'), V' better-than V.
    Relation out(r.predicate(), r.arity());
    for (const auto& t : r.tuples()) {
        bool betterExists = false;
        for (const auto& u : r.tuples()) {
            bool sameGroup = true;
            for (size_t g : spec.groupbyCols)
                if (!(t[g] == u[g])) sameGroup = false;
            if (!sameGroup) continue;
            int c = aggValueCompare(u[spec.valueCol], t[spec.valueCol]);
            if ((spec.kind == AggKind::Min && c < 0) || (spec.kind == AggKind::Max && c > 0))
                betterExists = true;
        }
        if (!betterExists) out.insert(t);
    }
    return out;
}

} // namespace premlog::oracles
