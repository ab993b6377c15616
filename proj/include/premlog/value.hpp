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

#include <cstdint>
#include <string>
#include <vector>

#include "premlog/symbols.hpp"

namespace premlog {

/// A ground runtime value: integer, real, interned symbol, or real vector.
///
/// Equality is identity (an int 3 and a real 3.0 are distinct set members);
/// compare() is a total order that compares ints and reals numerically, so
/// extremum aggregates see one numeric axis.
class Value {
public:
    enum class Kind : uint8_t { Int, Real, Sym, Vec };

    Value() : kind_(Kind::Int), int_(0) {}

    static Value ofInt(int64_t v) {
        Value x;
        x.kind_ = Kind::Int;
        x.int_ = v;
        return x;
    }
    static Value ofReal(double v);
    static Value ofSym(SymId s) {
        Value x;
        x.kind_ = Kind::Sym;
        x.sym_ = s;
        return x;
    }
    static Value ofSym(std::string_view s) { return ofSym(intern(s)); }
    static Value ofVec(std::vector<double> v) {
        Value x;
        x.kind_ = Kind::Vec;
        x.vec_ = std::move(v);
        return x;
    }

    Kind kind() const { return kind_; }
    bool isNumeric() const { return kind_ == Kind::Int || kind_ == Kind::Real; }
    int64_t asInt() const { return int_; }
    double asReal() const { return real_; }
    double numeric() const { return kind_ == Kind::Int ? static_cast<double>(int_) : real_; }
    SymId asSym() const { return sym_; }
    const std::vector<double>& asVec() const { return vec_; }

    bool operator==(const Value& o) const;
    bool operator!=(const Value& o) const { return !(*this == o); }

    /// Total order: numerics first (by value, int before real on numeric
    /// ties), then symbols by name, then vectors lexicographically.
    static int compare(const Value& a, const Value& b);

    size_t hash() const;

    /// Text form used in TSV output and diagnostics.
    std::string toText() const;

private:
    Kind kind_;
    union {
        int64_t int_;
        double real_;
        SymId sym_;
    };
    std::vector<double> vec_;
};

using Tuple = std::vector<Value>;

struct TupleHash {
    size_t operator()(const Tuple& t) const;
};

int compareTuples(const Tuple& a, const Tuple& b);

std::string tupleText(const Tuple& t);

/// Shortest round-trip decimal form of a double.
std::string formatReal(double v);

} // namespace premlog
