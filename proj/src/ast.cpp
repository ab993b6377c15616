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

#include "premlog/ast.hpp"

#include <stdexcept>

namespace premlog {

Term Term::fromValue(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Int: return intConst(v.asInt());
        case Value::Kind::Real: return realConst(v.asReal());
        case Value::Kind::Sym: return symConst(v.asSym());
        case Value::Kind::Vec: return vecConst(v.asVec());
    }
    return {};
}

Value Term::toValue() const {
    switch (kind) {
        case Kind::IntConst: return Value::ofInt(ival);
        case Kind::RealConst: return Value::ofReal(rval);
        case Kind::SymConst: return Value::ofSym(name);
        case Kind::VecConst: return Value::ofVec(vec);
        case Kind::Variable: throw std::logic_error("variable has no value");
    }
    return {};
}

bool Term::operator==(const Term& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Variable:
        case Kind::SymConst: return name == o.name;
        case Kind::IntConst: return ival == o.ival;
        case Kind::RealConst: return rval == o.rval;
        case Kind::VecConst: return vec == o.vec;
    }
    return false;
}

void Expr::collectVars(std::set<SymId>& out) const {
    if (isLeaf()) {
        if (leaf.isVariable()) out.insert(leaf.name);
        return;
    }
    lhs->collectVars(out);
    rhs->collectVars(out);
}

bool Expr::operator==(const Expr& o) const {
    if (op != o.op) return false;
    if (isLeaf()) return leaf == o.leaf;
    return *lhs == *o.lhs && *rhs == *o.rhs;
}

const char* cmpOpText(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

const char* aggKindText(AggKind k) {
    switch (k) {
        case AggKind::Min: return "min";
        case AggKind::Max: return "max";
        case AggKind::Count: return "count";
    }
    return "?";
}

const char* colTypeText(ColType t) {
    switch (t) {
        case ColType::Sym: return "sym";
        case ColType::Int: return "int";
        case ColType::Real: return "float";
        case ColType::Vec: return "vec";
    }
    return "?";
}

Atom Atom::builtin(CmpOp op, Expr l, Expr r) {
    Atom a;
    a.cmp = op;
    a.lhs = std::move(l);
    a.rhs = std::move(r);
    // `V = expr` is assignment-capable; everything else is a pure test.
    a.kind = (op == CmpOp::Eq && a.lhs->isLeaf() && a.lhs->leaf.isVariable())
                 ? AtomKind::Arithmetic
                 : AtomKind::Comparison;
    a.predicate = intern(cmpOpText(op));
    return a;
}

std::set<SymId> Atom::vars() const {
    std::set<SymId> s;
    if (isBuiltin()) {
        lhs->collectVars(s);
        rhs->collectVars(s);
        return s;
    }
    for (const auto& t : args)
        if (t.isVariable()) s.insert(t.name);
    return s;
}

bool Atom::operator==(const Atom& o) const {
    if (kind != o.kind || predicate != o.predicate) return false;
    if (isBuiltin()) return cmp == o.cmp && *lhs == *o.lhs && *rhs == *o.rhs;
    return args == o.args;
}

const RelationDecl* Program::declOf(SymId pred) const {
    for (const auto& d : decls)
        if (d.predicate == pred) return &d;
    return nullptr;
}

const ForeignDecl* Program::foreignOf(SymId pred) const {
    for (const auto& f : foreigns)
        if (f.predicate == pred) return &f;
    return nullptr;
}

std::set<SymId> Program::idbPredicates() const {
    std::set<SymId> s;
    for (const auto& r : rules) s.insert(r.head.predicate);
    return s;
}

std::set<SymId> Program::edbPredicates() const {
    std::set<SymId> referenced;
    auto add = [&](const Atom& a) {
        if (a.isRelational()) referenced.insert(a.predicate);
    };
    for (const auto& r : rules) {
        add(r.head);
        for (const auto& b : r.body) add(b.atom);
    }
    for (const auto& f : facts) referenced.insert(f.predicate);
    for (const auto& d : decls) referenced.insert(d.predicate);
    for (SymId p : idbPredicates()) referenced.erase(p);
    for (const auto& f : foreigns) referenced.erase(f.predicate);
    return referenced;
}

std::map<SymId, size_t> Program::arities() const {
    std::map<SymId, size_t> out;
    auto note = [&](SymId pred, size_t n) {
        auto [it, fresh] = out.emplace(pred, n);
        if (!fresh && it->second != n)
            throw std::runtime_error("arity conflict for predicate '" + symName(pred) + "': " +
                                     std::to_string(it->second) + " vs " + std::to_string(n));
    };
    for (const auto& r : rules) {
        note(r.head.predicate, r.head.args.size());
        for (const auto& b : r.body)
            if (b.atom.isRelational()) note(b.atom.predicate, b.atom.args.size());
    }
    for (const auto& f : facts) note(f.predicate, f.args.size());
    for (const auto& d : decls) note(d.predicate, d.columns.size());
    for (const auto& f : foreigns) note(f.predicate, f.boundMode.size());
    if (query) note(query->predicate, query->args.size());
    return out;
}

void Program::resolveAtomKinds() {
    auto idb = idbPredicates();
    auto tag = [&](Atom& a) {
        if (!a.isRelational()) return;
        if (isForeign(a.predicate))
            a.kind = AtomKind::Foreign;
        else if (idb.count(a.predicate))
            a.kind = AtomKind::Idb;
        else
            a.kind = AtomKind::Edb;
    };
    for (auto& r : rules) {
        tag(r.head);
        for (auto& b : r.body) tag(b.atom);
    }
    for (auto& f : facts) f.kind = AtomKind::Edb;
    if (query) tag(*query);
}

bool Program::operator==(const Program& o) const {
    return decls == o.decls && foreigns == o.foreigns && config == o.config && rules == o.rules &&
           facts == o.facts && query == o.query;
}

std::set<SymId> positiveRelationalVars(const Rule& r) {
    std::set<SymId> s;
    for (const auto& b : r.body) {
        if (b.negated || !b.atom.isRelational()) continue;
        for (const auto& t : b.atom.args)
            if (t.isVariable()) s.insert(t.name);
    }
    return s;
}

} // namespace premlog
