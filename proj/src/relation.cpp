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

#include "premlog/relation.hpp"

#include <algorithm>
#include <stdexcept>

namespace premlog {

int aggValueCompare(const Value& a, const Value& b) {
    if (a.isNumeric() && b.isNumeric()) {
        double x = a.numeric(), y = b.numeric();
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    }
    return Value::compare(a, b);
}

namespace {

// True when `candidate` is strictly better than `best` for the given kind.
bool strictlyBetter(AggKind kind, const Value& candidate, const Value& best) {
    int c = aggValueCompare(candidate, best);
    return kind == AggKind::Min ? c < 0 : c > 0;
}

} // namespace

void Relation::setConstraint(AggregateSpec spec) {
    if (!tuples_.empty()) throw std::logic_error("constraint must be set on an empty relation");
    constraint_ = std::move(spec);
}

Tuple Relation::groupKey(const Tuple& t) const {
    Tuple key;
    key.reserve(constraint_->groupbyCols.size());
    for (size_t c : constraint_->groupbyCols) key.push_back(t[c]);
    return key;
}

Relation::Outcome Relation::insert(Tuple t) {
    if (t.size() != arity_) throw std::logic_error("tuple arity mismatch");
    if (!constraint_) {
        auto [it, fresh] = tuples_.insert(std::move(t));
        (void)it;
        if (fresh) ++version_;
        return fresh ? Outcome::New : Outcome::Duplicate;
    }
    Tuple key = groupKey(t);
    const Value& val = t[constraint_->valueCol];
    auto git = groups_.find(key);
    if (git == groups_.end()) {
        Group g;
        g.best = val;
        g.members.push_back(t);
        groups_.emplace(std::move(key), std::move(g));
        tuples_.insert(std::move(t));
        ++version_;
        return Outcome::New;
    }
    Group& g = git->second;
    if (strictlyBetter(constraint_->kind, val, g.best)) {
        for (const auto& m : g.members) tuples_.erase(m);
        g.best = val;
        g.members.clear();
        g.members.push_back(t);
        tuples_.insert(std::move(t));
        ++version_;
        return Outcome::Improved;
    }
    if (aggValueCompare(val, g.best) == 0) {
        if (tuples_.count(t)) return Outcome::Duplicate;
        g.members.push_back(t);
        tuples_.insert(std::move(t));
        ++version_;
        return Outcome::Tie;
    }
    return Outcome::Rejected;
}

const Value* Relation::groupBest(const Tuple& key) const {
    auto it = groups_.find(key);
    return it == groups_.end() ? nullptr : &it->second.best;
}

std::vector<Tuple> Relation::sorted() const {
    std::vector<Tuple> out(tuples_.begin(), tuples_.end());
    std::sort(out.begin(), out.end(),
              [](const Tuple& a, const Tuple& b) { return compareTuples(a, b) < 0; });
    return out;
}

bool Relation::sameTuples(const Relation& o) const {
    if (tuples_.size() != o.tuples_.size()) return false;
    for (const auto& t : tuples_)
        if (!o.tuples_.count(t)) return false;
    return true;
}

const Relation::IndexMap& Relation::index(uint32_t mask) const {
    if (indexVersion_ != version_) {
        indexes_.clear();
        indexVersion_ = version_;
    }
    auto it = indexes_.find(mask);
    if (it != indexes_.end()) return it->second;
    IndexMap map;
    for (const auto& t : tuples_) {
        Tuple key;
        for (size_t i = 0; i < arity_; ++i)
            if (mask & (1u << i)) key.push_back(t[i]);
        map[std::move(key)].push_back(&t);
    }
    return indexes_.emplace(mask, std::move(map)).first->second;
}

Relation applyGamma(const AggregateSpec& spec, const Relation& r) {
    Relation out(r.predicate(), r.arity());
    std::unordered_map<Tuple, std::pair<Value, std::vector<const Tuple*>>, TupleHash> groups;
    for (const auto& t : r.tuples()) {
        Tuple key;
        key.reserve(spec.groupbyCols.size());
        for (size_t c : spec.groupbyCols) key.push_back(t[c]);
        const Value& val = t[spec.valueCol];
        auto it = groups.find(key);
        if (it == groups.end()) {
            groups.emplace(std::move(key), std::make_pair(val, std::vector<const Tuple*>{&t}));
            continue;
        }
        int c = aggValueCompare(val, it->second.first);
        bool better = spec.kind == AggKind::Min ? c < 0 : c > 0;
        if (better) {
            it->second.first = val;
            it->second.second.clear();
            it->second.second.push_back(&t);
        } else if (c == 0) {
            it->second.second.push_back(&t);
        }
    }
    for (auto& [key, entry] : groups)
        for (const Tuple* t : entry.second) out.insert(*t);
    return out;
}

Relation applyCount(const AggregateSpec& spec, const Relation& r) {
    Relation out(r.predicate(), r.arity());
    std::unordered_map<Tuple, std::pair<Tuple, std::unordered_set<Tuple, TupleHash>>, TupleHash>
        groups;
    for (const auto& t : r.tuples()) {
        Tuple key;
        key.reserve(spec.groupbyCols.size());
        for (size_t c : spec.groupbyCols) key.push_back(t[c]);
        auto& entry = groups[key];
        entry.first = t; // representative, carries the group-by values
        entry.second.insert(Tuple{t[spec.valueCol]});
    }
    for (auto& [key, entry] : groups) {
        Tuple result = entry.first;
        result[spec.valueCol] = Value::ofInt(static_cast<int64_t>(entry.second.size()));
        out.insert(std::move(result));
    }
    return out;
}

Relation& Interpretation::ensure(SymId pred, size_t arity) {
    auto it = rels_.find(pred);
    if (it == rels_.end()) it = rels_.emplace(pred, Relation(pred, arity)).first;
    return it->second;
}

const Relation* Interpretation::find(SymId pred) const {
    auto it = rels_.find(pred);
    return it == rels_.end() ? nullptr : &it->second;
}

Relation* Interpretation::find(SymId pred) {
    auto it = rels_.find(pred);
    return it == rels_.end() ? nullptr : &it->second;
}

const Relation& Interpretation::at(SymId pred) const {
    auto it = rels_.find(pred);
    if (it == rels_.end()) throw std::out_of_range("no relation for '" + symName(pred) + "'");
    return it->second;
}

size_t Interpretation::totalTuples() const {
    size_t n = 0;
    for (const auto& [pred, rel] : rels_) n += rel.size();
    return n;
}

bool Interpretation::sameOn(SymId pred, const Interpretation& o) const {
    const Relation* a = find(pred);
    const Relation* b = o.find(pred);
    if (!a || a->empty()) return !b || b->empty();
    if (!b) return false;
    return a->sameTuples(*b);
}

} // namespace premlog
