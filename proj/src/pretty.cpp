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

#include "premlog/pretty.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace premlog {

namespace {

bool isPlainSymbol(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div: return 2;
        case Expr::Op::Leaf: return 3;
    }
    return 3;
}

const char* opText(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add: return " + ";
        case Expr::Op::Sub: return " - ";
        case Expr::Op::Mul: return " * ";
        case Expr::Op::Div: return " / ";
        case Expr::Op::Leaf: return "";
    }
    return "";
}

void printExpr(std::ostream& os, const Expr& e, int parentPrec, bool rightChild) {
    if (e.isLeaf()) {
        os << toString(e.leaf);
        return;
    }
    int prec = precedence(e.op);
    bool parens = prec < parentPrec || (prec == parentPrec && rightChild);
    if (parens) os << '(';
    printExpr(os, *e.lhs, prec, false);
    os << opText(e.op);
    printExpr(os, *e.rhs, prec, true);
    if (parens) os << ')';
}

void printHeadArg(std::ostream& os, const Rule& r, size_t i) {
    if (r.headAgg) {
        const auto& agg = *r.headAgg;
        if (agg.valueCol == i) {
            os << aggKindText(agg.kind) << '<' << toString(r.head.args[i]) << '>';
            return;
        }
        if (std::find(agg.companionCols.begin(), agg.companionCols.end(), i) !=
            agg.companionCols.end()) {
            os << (agg.kind == AggKind::Min ? "cmin" : "cmax") << '<' << toString(r.head.args[i])
               << '>';
            return;
        }
    }
    os << toString(r.head.args[i]);
}

} // namespace

std::string toString(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Variable: return symName(t.name);
        case Term::Kind::IntConst: return std::to_string(t.ival);
        case Term::Kind::RealConst: return formatReal(t.rval);
        case Term::Kind::SymConst: {
            const auto& n = symName(t.name);
            return isPlainSymbol(n) ? n : quoted(n);
        }
        case Term::Kind::VecConst: {
            std::string s = "[";
            for (size_t i = 0; i < t.vec.size(); ++i) {
                if (i) s += ", ";
                s += formatReal(t.vec[i]);
            }
            return s + "]";
        }
    }
    return {};
}

std::string toString(const Expr& e) {
    std::ostringstream os;
    printExpr(os, e, 0, false);
    return os.str();
}

std::string toString(const Atom& a) {
    std::ostringstream os;
    if (a.isBuiltin()) {
        printExpr(os, *a.lhs, 0, false);
        os << ' ' << cmpOpText(a.cmp) << ' ';
        printExpr(os, *a.rhs, 0, false);
        return os.str();
    }
    os << symName(a.predicate) << '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ", ";
        os << toString(a.args[i]);
    }
    os << ')';
    return os.str();
}

std::string toString(const Rule& r) {
    std::ostringstream os;
    os << symName(r.head.predicate) << '(';
    for (size_t i = 0; i < r.head.args.size(); ++i) {
        if (i) os << ", ";
        printHeadArg(os, r, i);
    }
    os << ") <- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) os << ", ";
        if (r.body[i].negated) os << '!';
        os << toString(r.body[i].atom);
    }
    os << '.';
    return os.str();
}

std::string prettyPrint(const Program& p) {
    std::ostringstream os;
    for (const auto& d : p.decls) {
        os << ".decl " << symName(d.predicate) << '(';
        for (size_t i = 0; i < d.columns.size(); ++i) {
            if (i) os << ", ";
            os << colTypeText(d.columns[i].type);
            if (d.columns[i].lowerBound) {
                os << (d.columns[i].lowerStrict ? " > " : " >= ");
                double b = *d.columns[i].lowerBound;
                if (b == static_cast<int64_t>(b))
                    os << static_cast<int64_t>(b);
                else
                    os << formatReal(b);
            }
        }
        os << ")\n";
    }
    for (const auto& f : p.foreigns) {
        os << ".foreign " << symName(f.predicate) << '(';
        for (size_t i = 0; i < f.boundMode.size(); ++i) {
            if (i) os << ", ";
            os << 'A' << i + 1 << (f.boundMode[i] ? '+' : '-');
        }
        os << ")\n";
    }
    for (const auto& [name, value] : p.config)
        os << ".config " << name << " = " << toString(value) << '\n';
    for (const auto& f : p.facts) os << toString(f) << ".\n";
    for (const auto& r : p.rules) os << toString(r) << '\n';
    if (p.query) os << "?- " << toString(*p.query) << ".\n";
    return os.str();
}

} // namespace premlog
