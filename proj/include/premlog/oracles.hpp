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
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "premlog/relation.hpp"

namespace premlog::oracles {

// Independent ground-truth generators. These deliberately avoid the rule
// engine: plain textbook algorithms over plain containers.

/// Min-plus closure over walks of one or more arcs (Floyd–Warshall with an
/// uninitialized diagonal: (x,x) appears only through an actual cycle).
/// Arc tuples are (sym, sym, int); the result relation holds (X, Y, D).
Relation floydWarshall(const Relation& arcs, SymId outPred);

/// Minimum number of coins (infinite supply) summing exactly to value;
/// nullopt when the value is unreachable. Bottom-up table over 0..value.
std::optional<int64_t> coinChangeMin(const std::vector<int64_t>& coins, int64_t value);

/// Closure of `start` under x -> x - c for coin values c < x (results stay
/// positive); includes start. Mirrors top-down demand propagation.
std::set<int64_t> coinDemandClosure(const std::vector<int64_t>& coins, int64_t start);

struct TrainingPoint {
    int64_t id;
    double x, y;
    std::string label;
};
struct TestPoint {
    int64_t id;
    double x, y;
};

/// Sort-and-vote k-nearest-neighbour classification: squared Euclidean
/// distance, (distance, id) tie-break, majority vote keeping all vote ties.
/// Output tuples are (testId, votes, label).
Relation knnClassify(const std::vector<TrainingPoint>& tr, const std::vector<TestPoint>& te,
                     int64_t k, SymId outPred);

struct GdTrace {
    std::vector<std::vector<double>> models; // index J = iteration
    std::vector<double> errors;              // E_J at model J
    bool converged = false;
};

/// Direct batch-gradient-descent loop: rows are [x_1..x_dim, y], model w
/// predicts w·x; E = mean squared error, stop at the first E <= delta.
GdTrace gradientDescent(const std::vector<std::vector<double>>& rows, size_t dim, double eta,
                        double delta, size_t cap);

/// Reference extremum semantics by the negation rewrite: keep a tuple iff no
/// tuple in the same group has a strictly better value. Quantification is
/// over the group-by columns only (companions are projected attributes).
Relation negationRewriteExtremum(const AggregateSpec& spec, const Relation& r);

} // namespace premlog::oracles
