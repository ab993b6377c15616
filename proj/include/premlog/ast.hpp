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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "premlog/value.hpp"

namespace premlog {

// ---------------------------------------------------------------------------
// Terms and arithmetic expressions
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind : uint8_t { Variable, IntConst, RealConst, SymConst, VecConst };

    Kind kind = Kind::IntConst;
    SymId name = 0;             // Variable / SymConst
    int64_t ival = 0;           // IntConst
    double rval = 0.0;          // RealConst
    std::vector<double> vec;    // VecConst

    static Term var(std::string_view n) {
        Term t;
        t.kind = Kind::Variable;
        t.name = intern(n);
        return t;
    }
    static Term var(SymId n) {
        Term t;
        t.kind = Kind::Variable;
        t.name = n;
        return t;
    }
    static Term intConst(int64_t v) {
        Term t;
        t.kind = Kind::IntConst;
        t.ival = v;
        return t;
    }
    static Term realConst(double v) {
        Term t;
        t.kind = Kind::RealConst;
        t.rval = v;
        return t;
    }
    static Term symConst(std::string_view n) {
        Term t;
        t.kind = Kind::SymConst;
        t.name = intern(n);
        return t;
    }
    static Term symConst(SymId n) {
        Term t;
        t.kind = Kind::SymConst;
        t.name = n;
        return t;
    }
    static Term vecConst(std::vector<double> v) {
        Term t;
        t.kind = Kind::VecConst;
        t.vec = std::move(v);
        return t;
    }
    static Term fromValue(const Value& v);

    bool isVariable() const { return kind == Kind::Variable; }
    bool isConstant() const { return kind != Kind::Variable; }
    Value toValue() const; // constants only

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }
};

/// Arithmetic over terms: leaves are variables or numeric constants.
/// Immutable; subtrees are shared on copy.
struct Expr {
    enum class Op : uint8_t { Leaf, Add, Sub, Mul, Div };

    Op op = Op::Leaf;
    Term leaf;
    std::shared_ptr<const Expr> lhs, rhs;

    static Expr leafOf(Term t) {
        Expr e;
        e.leaf = std::move(t);
        return e;
    }
    static Expr binary(Op op, Expr l, Expr r) {
        Expr e;
        e.op = op;
        e.lhs = std::make_shared<const Expr>(std::move(l));
        e.rhs = std::make_shared<const Expr>(std::move(r));
        return e;
    }

    bool isLeaf() const { return op == Op::Leaf; }
    void collectVars(std::set<SymId>& out) const;
    std::set<SymId> vars() const {
        std::set<SymId> s;
        collectVars(s);
        return s;
    }

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }
};

// ---------------------------------------------------------------------------
// Atoms, rules, program
// ---------------------------------------------------------------------------

enum class AtomKind : uint8_t {
    Edb,        // facts / fact files only
    Idb,        // defined by rules
    Foreign,    // registered foreign predicate
    Comparison, // expr op expr
    Arithmetic, // Var = expr
};

enum class CmpOp : uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmpOpText(CmpOp op);

struct Atom {
    SymId predicate = 0;
    AtomKind kind = AtomKind::Idb;
    std::vector<Term> args;          // relational / foreign atoms
    CmpOp cmp = CmpOp::Eq;           // builtins
    std::optional<Expr> lhs, rhs;    // builtins

    bool isRelational() const {
        return kind == AtomKind::Edb || kind == AtomKind::Idb || kind == AtomKind::Foreign;
    }
    bool isBuiltin() const { return kind == AtomKind::Comparison || kind == AtomKind::Arithmetic; }

    static Atom relational(SymId pred, std::vector<Term> args) {
        Atom a;
        a.predicate = pred;
        a.args = std::move(args);
        return a;
    }
    static Atom builtin(CmpOp op, Expr l, Expr r);

    std::set<SymId> vars() const;

    bool operator==(const Atom& o) const;
    bool operator!=(const Atom& o) const { return !(*this == o); }
};

struct BodyAtom {
    Atom atom;
    bool negated = false;

    bool operator==(const BodyAtom& o) const { return negated == o.negated && atom == o.atom; }
    bool operator!=(const BodyAtom& o) const { return !(*this == o); }
};

enum class AggKind : uint8_t { Min, Max, Count };

const char* aggKindText(AggKind k);

/// Head-aggregate layout: which head column carries the extremum/count value,
/// which columns are cmin/cmax companions, and the remaining group-by columns.
struct AggregateSpec {
    AggKind kind = AggKind::Min;
    size_t valueCol = 0;
    std::vector<size_t> companionCols;
    std::vector<size_t> groupbyCols;

    bool isExtremum() const { return kind != AggKind::Count; }

    bool operator==(const AggregateSpec& o) const {
        return kind == o.kind && valueCol == o.valueCol && companionCols == o.companionCols &&
               groupbyCols == o.groupbyCols;
    }
    bool operator!=(const AggregateSpec& o) const { return !(*this == o); }
};

struct Rule {
    Atom head;
    std::optional<AggregateSpec> headAgg;
    std::vector<BodyAtom> body;

    bool operator==(const Rule& o) const {
        return head == o.head && headAgg == o.headAgg && body == o.body;
    }
    bool operator!=(const Rule& o) const { return !(*this == o); }
};

enum class ColType : uint8_t { Sym, Int, Real, Vec };

const char* colTypeText(ColType t);

struct ColumnDecl {
    ColType type = ColType::Sym;
    // Optional lower bound from declarations like `int >= 0` / `int > 0`.
    std::optional<double> lowerBound;
    bool lowerStrict = false;

    bool nonNegative() const { return lowerBound && *lowerBound >= 0.0; }
    bool strictlyPositive() const {
        return lowerBound && (*lowerBound > 0.0 || (*lowerBound == 0.0 && lowerStrict));
    }

    bool operator==(const ColumnDecl& o) const {
        return type == o.type && lowerBound == o.lowerBound && lowerStrict == o.lowerStrict;
    }
    bool operator!=(const ColumnDecl& o) const { return !(*this == o); }
};

struct RelationDecl {
    SymId predicate = 0;
    std::vector<ColumnDecl> columns;

    bool operator==(const RelationDecl& o) const {
        return predicate == o.predicate && columns == o.columns;
    }
    bool operator!=(const RelationDecl& o) const { return !(*this == o); }
};

struct ForeignDecl {
    SymId predicate = 0;
    std::vector<bool> boundMode; // true = '+': must be bound on call

    bool operator==(const ForeignDecl& o) const {
        return predicate == o.predicate && boundMode == o.boundMode;
    }
    bool operator!=(const ForeignDecl& o) const { return !(*this == o); }
};

struct Program {
    std::vector<RelationDecl> decls;
    std::vector<ForeignDecl> foreigns;
    std::map<std::string, Term> config; // named constants (K, delta, eta, dim)
    std::vector<Rule> rules;
    std::vector<Atom> facts; // ground relational atoms
    std::optional<Atom> query;

    const RelationDecl* declOf(SymId pred) const;
    const ForeignDecl* foreignOf(SymId pred) const;
    bool isForeign(SymId pred) const { return foreignOf(pred) != nullptr; }

    /// Predicates that have at least one rule head.
    std::set<SymId> idbPredicates() const;
    /// Relational predicates referenced anywhere minus IDB and foreign.
    std::set<SymId> edbPredicates() const;

    /// Fixed arity per predicate; throws std::runtime_error on conflicts.
    std::map<SymId, size_t> arities() const;

    /// Re-tags relational atoms as Edb/Idb/Foreign from the program shape.
    void resolveAtomKinds();

    bool operator==(const Program& o) const;
    bool operator!=(const Program& o) const { return !(*this == o); }
};

/// Variables of all positive relational (non-builtin, non-negated) body atoms.
std::set<SymId> positiveRelationalVars(const Rule& r);

} // namespace premlog
