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

#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "premlog/ast.hpp"

namespace premlog {

/// Numeric-axis comparison used by extremum aggregates: ints and reals
/// compare by value (3 ties 3.0); everything else falls back to the total
/// Value order.
int aggValueCompare(const Value& a, const Value& b);

/// Set-semantics tuple store. With a constraint attached, the store keeps,
/// per group key, only the tuples attaining the current extremum (all ties).
class Relation {
public:
    Relation() = default;
    Relation(SymId pred, size_t arity) : pred_(pred), arity_(arity) {}

    SymId predicate() const { return pred_; }
    size_t arity() const { return arity_; }
    size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    void setConstraint(AggregateSpec spec);
    const std::optional<AggregateSpec>& constraint() const { return constraint_; }

    enum class Outcome { New, Tie, Improved, Duplicate, Rejected };

    /// Inserts honoring the constraint; Improved evicts dominated incumbents.
    Outcome insert(Tuple t);

    bool contains(const Tuple& t) const { return tuples_.count(t) != 0; }

    const std::unordered_set<Tuple, TupleHash>& tuples() const { return tuples_; }

    /// Current extremum value of a group, if the group exists.
    const Value* groupBest(const Tuple& key) const;

    /// Tuples in deterministic (lexicographic tuple) order.
    std::vector<Tuple> sorted() const;

    bool sameTuples(const Relation& o) const;

    /// Join index for the given bound-position mask (bit i set = column i
    /// bound). Rebuilt lazily after mutations; pointers are into the store
    /// and stay valid until the next mutation.
    using IndexMap = std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash>;
    const IndexMap& index(uint32_t mask) const;

    uint64_t version() const { return version_; }

private:
    SymId pred_ = 0;
    size_t arity_ = 0;
    std::unordered_set<Tuple, TupleHash> tuples_;
    std::optional<AggregateSpec> constraint_;

    struct Group {
        Value best;
        std::vector<Tuple> members;
    };
    std::unordered_map<Tuple, Group, TupleHash> groups_;

    uint64_t version_ = 0;
    mutable uint64_t indexVersion_ = ~0ULL;
    mutable std::map<uint32_t, IndexMap> indexes_;

    Tuple groupKey(const Tuple& t) const;
};

/// Per-group extremum filter (ties kept). Works on any relation; the spec
/// decides the group key, value column and comparison direction.
Relation applyGamma(const AggregateSpec& spec, const Relation& r);

/// Count-distinct aggregation: one output tuple per group, with the number
/// of distinct value-column values at the value position.
Relation applyCount(const AggregateSpec& spec, const Relation& r);

/// Predicate -> relation map; lower strata are final once evaluated.
class Interpretation {
public:
    Relation& ensure(SymId pred, size_t arity);
    const Relation* find(SymId pred) const;
    Relation* find(SymId pred);
    const Relation& at(SymId pred) const;
    bool has(SymId pred) const { return rels_.count(pred) != 0; }

    const std::map<SymId, Relation>& relations() const { return rels_; }
    std::map<SymId, Relation>& relations() { return rels_; }

    size_t totalTuples() const;
    bool sameOn(SymId pred, const Interpretation& o) const;

private:
    std::map<SymId, Relation> rels_;
};

} // namespace premlog
