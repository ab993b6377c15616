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

#include "premlog/value.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

namespace premlog {

Value Value::ofReal(double v) {
    Value x;
    x.kind_ = Kind::Real;
    // Canonicalize NaN so set semantics stay well defined.
    x.real_ = std::isnan(v) ? std::numeric_limits<double>::quiet_NaN() : v;
    return x;
}

bool Value::operator==(const Value& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case Kind::Int: return int_ == o.int_;
        case Kind::Real: {
            // Bit equality (post NaN canonicalization) keeps hashing consistent.
            uint64_t a, b;
            std::memcpy(&a, &real_, sizeof a);
            std::memcpy(&b, &o.real_, sizeof b);
            return a == b;
        }
        case Kind::Sym: return sym_ == o.sym_;
        case Kind::Vec: return vec_ == o.vec_;
    }
    return false;
}

int Value::compare(const Value& a, const Value& b) {
    auto rank = [](Kind k) { return k == Kind::Int || k == Kind::Real ? 0 : k == Kind::Sym ? 1 : 2; };
    int ra = rank(a.kind_), rb = rank(b.kind_);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (ra == 0) {
        double x = a.numeric(), y = b.numeric();
        if (std::isnan(x) || std::isnan(y)) {
            if (std::isnan(x) && std::isnan(y)) return 0;
            return std::isnan(x) ? 1 : -1; // NaN sorts last
        }
        if (x < y) return -1;
        if (x > y) return 1;
        if (a.kind_ == b.kind_) return 0;
        return a.kind_ == Kind::Int ? -1 : 1;
    }
    if (ra == 1) return symCompare(a.sym_, b.sym_);
    const auto& va = a.vec_;
    const auto& vb = b.vec_;
    size_t n = std::min(va.size(), vb.size());
    for (size_t i = 0; i < n; ++i) {
        if (va[i] < vb[i]) return -1;
        if (va[i] > vb[i]) return 1;
    }
    if (va.size() != vb.size()) return va.size() < vb.size() ? -1 : 1;
    return 0;
}

size_t Value::hash() const {
    auto mix = [](size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); };
    switch (kind_) {
        case Kind::Int: return mix(1, static_cast<size_t>(int_));
        case Kind::Real: {
            uint64_t bits;
            std::memcpy(&bits, &real_, sizeof bits);
            return mix(2, static_cast<size_t>(bits));
        }
        case Kind::Sym: return mix(3, sym_);
        case Kind::Vec: {
            size_t h = 4;
            for (double d : vec_) {
                uint64_t bits;
                std::memcpy(&bits, &d, sizeof bits);
                h = mix(h, static_cast<size_t>(bits));
            }
            return h;
        }
    }
    return 0;
}

std::string formatReal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    // Keep a real-typed literal recognizable on re-parse.
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string Value::toText() const {
    switch (kind_) {
        case Kind::Int: return std::to_string(int_);
        case Kind::Real: return formatReal(real_);
        case Kind::Sym: return symName(sym_);
        case Kind::Vec: {
            std::string s = "[";
            for (size_t i = 0; i < vec_.size(); ++i) {
                if (i) s += ",";
                s += formatReal(vec_[i]);
            }
            s += "]";
            return s;
        }
    }
    return {};
}

size_t TupleHash::operator()(const Tuple& t) const {
    size_t h = t.size();
    for (const auto& v : t) h = h * 1099511628211ULL ^ v.hash();
    return h;
}

int compareTuples(const Tuple& a, const Tuple& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = Value::compare(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

std::string tupleText(const Tuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += t[i].toText();
    }
    s += ")";
    return s;
}

} // namespace premlog
