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

#include "premlog/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <vector>

namespace premlog {

namespace {

struct Token {
    enum class Type {
        End,
        LowerIdent, // symbols, predicate names
        UpperIdent, // variables
        Directive,  // .decl / .foreign / .config
        Integer,
        Real,
        String,
        LParen,
        RParen,
        LBracket,
        RBracket,
        Comma,
        Dot,
        Arrow,     // <-
        QueryMark, // ?-
        Bang,
        Plus,
        Minus,
        Star,
        Slash,
        Lt,
        Le,
        Gt,
        Ge,
        EqOp,
        NeOp,
    };

    Type type = Type::End;
    std::string text;
    int64_t ival = 0;
    double rval = 0.0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skipTrivia();
        Token t;
        t.line = line_;
        t.col = col_;
        if (eof()) return t;
        char c = peek();
        if (c == '(') return take(t, Token::Type::LParen);
        if (c == ')') return take(t, Token::Type::RParen);
        if (c == '[') return take(t, Token::Type::LBracket);
        if (c == ']') return take(t, Token::Type::RBracket);
        if (c == ',') return take(t, Token::Type::Comma);
        if (c == '+') return take(t, Token::Type::Plus);
        if (c == '*') return take(t, Token::Type::Star);
        if (c == '/') return take(t, Token::Type::Slash);
        if (c == '-') return take(t, Token::Type::Minus);
        if (c == '.') {
            if (pos_ + 1 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_ + 1]))) {
                advance();
                t.type = Token::Type::Directive;
                t.text = lexIdentText();
                return t;
            }
            return take(t, Token::Type::Dot);
        }
        if (c == '!') {
            advance();
            if (!eof() && peek() == '=') {
                advance();
                t.type = Token::Type::NeOp;
                return t;
            }
            t.type = Token::Type::Bang;
            return t;
        }
        if (c == '<') {
            advance();
            if (!eof() && peek() == '-') {
                advance();
                t.type = Token::Type::Arrow;
                return t;
            }
            if (!eof() && peek() == '=') {
                advance();
                t.type = Token::Type::Le;
                return t;
            }
            t.type = Token::Type::Lt;
            return t;
        }
        if (c == '>') {
            advance();
            if (!eof() && peek() == '=') {
                advance();
                t.type = Token::Type::Ge;
                return t;
            }
            t.type = Token::Type::Gt;
            return t;
        }
        if (c == '=') {
            advance();
            t.type = Token::Type::EqOp;
            return t;
        }
        if (c == '?') {
            advance();
            if (!eof() && peek() == '-') {
                advance();
                t.type = Token::Type::QueryMark;
                return t;
            }
            throw ParseError(t.line, t.col, "stray '?'");
        }
        if (c == '"') return lexString(t);
        if (std::isdigit(static_cast<unsigned char>(c))) return lexNumber(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.text = lexIdentText();
            t.type = std::isupper(static_cast<unsigned char>(t.text[0])) ? Token::Type::UpperIdent
                                                                         : Token::Type::LowerIdent;
            return t;
        }
        throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }

private:
    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token take(Token& t, Token::Type type) {
        advance();
        t.type = type;
        return t;
    }

    void skipTrivia() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (!eof() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string lexIdentText() {
        std::string s;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            s += peek();
            advance();
        }
        return s;
    }

    Token lexNumber(Token& t) {
        std::string s;
        bool real = false;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            s += peek();
            advance();
        }
        // A '.' starts a fraction only when a digit follows; otherwise it
        // terminates the clause (e.g. "num(9, N).").
        if (!eof() && peek() == '.' && pos_ + 1 < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            real = true;
            s += peek();
            advance();
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                s += peek();
                advance();
            }
        }
        if (!eof() && (peek() == 'e' || peek() == 'E')) {
            size_t save = pos_;
            std::string exp;
            exp += peek();
            advance();
            if (!eof() && (peek() == '+' || peek() == '-')) {
                exp += peek();
                advance();
            }
            if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                real = true;
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    exp += peek();
                    advance();
                }
                s += exp;
            } else {
                // not an exponent; rewind
                while (pos_ > save) {
                    --pos_;
                    --col_;
                }
            }
        }
        if (real) {
            t.type = Token::Type::Real;
            t.rval = std::strtod(s.c_str(), nullptr);
        } else {
            t.type = Token::Type::Integer;
            auto res = std::from_chars(s.data(), s.data() + s.size(), t.ival);
            if (res.ec != std::errc())
                throw ParseError(t.line, t.col, "integer literal out of range: " + s);
        }
        t.text = std::move(s);
        return t;
    }

    Token lexString(Token& t) {
        advance(); // opening quote
        std::string s;
        while (!eof() && peek() != '"') {
            char c = peek();
            if (c == '\\') {
                advance();
                if (eof()) break;
                c = peek();
            }
            s += c;
            advance();
        }
        if (eof()) throw ParseError(t.line, t.col, "unterminated string literal");
        advance(); // closing quote
        t.type = Token::Type::String;
        t.text = std::move(s);
        return t;
    }
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    Program parseProgram() {
        Program prog;
        while (tok_.type != Token::Type::End) {
            if (tok_.type == Token::Type::Directive) {
                parseDirective(prog);
            } else if (tok_.type == Token::Type::QueryMark) {
                advance();
                Atom q = parseRelationalAtom();
                expect(Token::Type::Dot, "'.'");
                if (prog.query) fail("duplicate query");
                prog.query = std::move(q);
            } else if (tok_.type == Token::Type::LowerIdent) {
                parseClause(prog);
            } else {
                fail("expected a rule, fact, query or directive");
            }
        }
        finalize(prog);
        return prog;
    }

    Atom parseQueryAtom() {
        Atom a = parseRelationalAtom();
        if (tok_.type == Token::Type::Dot) advance();
        if (tok_.type != Token::Type::End) fail("trailing input after query atom");
        return a;
    }

private:
    Lexer lexer_;
    Token tok_;
    std::map<SymId, std::pair<size_t, std::pair<int, int>>> arity_;

    void advance() { tok_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(tok_.line, tok_.col, msg);
    }

    bool accept(Token::Type t) {
        if (tok_.type == t) {
            advance();
            return true;
        }
        return false;
    }

    void expect(Token::Type t, const char* what) {
        if (!accept(t)) fail(std::string("expected ") + what);
    }

    std::string expectIdent() {
        if (tok_.type != Token::Type::LowerIdent && tok_.type != Token::Type::UpperIdent)
            fail("expected an identifier");
        std::string s = tok_.text;
        advance();
        return s;
    }

    void noteArity(SymId pred, size_t n) {
        auto it = arity_.find(pred);
        if (it == arity_.end()) {
            arity_[pred] = {n, {tok_.line, tok_.col}};
        } else if (it->second.first != n) {
            fail("arity conflict for predicate '" + symName(pred) + "': used with " +
                 std::to_string(it->second.first) + " and " + std::to_string(n) + " arguments");
        }
    }

    // ---- directives ----

    void parseDirective(Program& prog) {
        std::string name = tok_.text;
        advance();
        if (name == "decl")
            parseDecl(prog);
        else if (name == "foreign")
            parseForeign(prog);
        else if (name == "config")
            parseConfig(prog);
        else
            fail("unknown directive '." + name + "'");
    }

    void parseDecl(Program& prog) {
        RelationDecl d;
        if (tok_.type != Token::Type::LowerIdent) fail("expected predicate name after .decl");
        d.predicate = intern(tok_.text);
        advance();
        expect(Token::Type::LParen, "'('");
        while (true) {
            ColumnDecl col;
            std::string ty = expectIdent();
            if (ty == "sym")
                col.type = ColType::Sym;
            else if (ty == "int")
                col.type = ColType::Int;
            else if (ty == "float")
                col.type = ColType::Real;
            else if (ty == "vec")
                col.type = ColType::Vec;
            else
                fail("unknown column type '" + ty + "'");
            if (tok_.type == Token::Type::Ge || tok_.type == Token::Type::Gt) {
                col.lowerStrict = tok_.type == Token::Type::Gt;
                advance();
                bool neg = accept(Token::Type::Minus);
                if (tok_.type == Token::Type::Integer)
                    col.lowerBound = static_cast<double>(tok_.ival);
                else if (tok_.type == Token::Type::Real)
                    col.lowerBound = tok_.rval;
                else
                    fail("expected a number after column bound");
                if (neg) col.lowerBound = -*col.lowerBound;
                advance();
            }
            d.columns.push_back(col);
            if (accept(Token::Type::Comma)) continue;
            expect(Token::Type::RParen, "')'");
            break;
        }
        noteArity(d.predicate, d.columns.size());
        prog.decls.push_back(std::move(d));
    }

    void parseForeign(Program& prog) {
        ForeignDecl f;
        if (tok_.type != Token::Type::LowerIdent) fail("expected predicate name after .foreign");
        f.predicate = intern(tok_.text);
        advance();
        expect(Token::Type::LParen, "'('");
        while (true) {
            expectIdent(); // mode argument name (documentation only)
            if (accept(Token::Type::Plus))
                f.boundMode.push_back(true);
            else if (accept(Token::Type::Minus))
                f.boundMode.push_back(false);
            else
                fail("expected '+' or '-' mode marker");
            if (accept(Token::Type::Comma)) continue;
            expect(Token::Type::RParen, "')'");
            break;
        }
        noteArity(f.predicate, f.boundMode.size());
        prog.foreigns.push_back(std::move(f));
    }

    void parseConfig(Program& prog) {
        std::string name = expectIdent();
        expect(Token::Type::EqOp, "'='");
        Term value = parseTerm();
        if (value.isVariable()) fail("config value must be a constant");
        prog.config[name] = std::move(value);
    }

    // ---- clauses ----

    void parseClause(Program& prog) {
        // Head with optional aggregate annotations.
        SymId pred = intern(tok_.text);
        advance();
        expect(Token::Type::LParen, "'('");
        Atom head;
        head.predicate = pred;
        std::optional<AggregateSpec> agg;
        std::vector<size_t> companions;
        std::optional<AggKind> companionKind;
        size_t idx = 0;
        if (!accept(Token::Type::RParen)) {
            while (true) {
                parseHeadArg(head, agg, companions, companionKind, idx);
                ++idx;
                if (accept(Token::Type::Comma)) continue;
                expect(Token::Type::RParen, "')'");
                break;
            }
        }
        noteArity(pred, head.args.size());

        if (accept(Token::Type::Dot)) {
            // Fact.
            if (agg || !companions.empty()) fail("facts cannot carry aggregates");
            for (const auto& t : head.args)
                if (t.isVariable()) fail("facts must be ground");
            prog.facts.push_back(std::move(head));
            return;
        }
        expect(Token::Type::Arrow, "'<-' or '.'");

        Rule rule;
        rule.head = std::move(head);
        if (agg) {
            for (size_t c : companions) agg->companionCols.push_back(c);
            for (size_t i = 0; i < rule.head.args.size(); ++i) {
                if (i == agg->valueCol) continue;
                if (std::find(companions.begin(), companions.end(), i) != companions.end())
                    continue;
                agg->groupbyCols.push_back(i);
            }
            if (companionKind && *companionKind != agg->kind)
                fail("companion annotation does not match the aggregate kind");
            if (agg->kind == AggKind::Count && !companions.empty())
                fail("count aggregates cannot take companion columns");
            rule.headAgg = std::move(agg);
        } else if (!companions.empty()) {
            fail("cmin/cmax requires a min/max aggregate in the same head");
        }

        while (true) {
            rule.body.push_back(parseBodyLiteral());
            if (accept(Token::Type::Comma)) continue;
            expect(Token::Type::Dot, "'.' or ','");
            break;
        }
        prog.rules.push_back(std::move(rule));
    }

    void parseHeadArg(Atom& head, std::optional<AggregateSpec>& agg,
                      std::vector<size_t>& companions, std::optional<AggKind>& companionKind,
                      size_t idx) {
        if (tok_.type == Token::Type::LowerIdent) {
            std::string word = tok_.text;
            if (word == "nil") {
                advance();
                head.args.push_back(Term::intConst(0));
                return;
            }
            bool isAgg = word == "min" || word == "max" || word == "count";
            bool isCompanion = word == "cmin" || word == "cmax";
            // Peek for '<' to distinguish `min<D>` from a plain symbol.
            if (isAgg || isCompanion) {
                advance();
                if (tok_.type == Token::Type::Lt) {
                    advance();
                    if (tok_.type != Token::Type::UpperIdent)
                        fail("expected a variable inside the aggregate annotation");
                    Term var = Term::var(tok_.text);
                    advance();
                    expect(Token::Type::Gt, "'>'");
                    if (isAgg) {
                        if (agg) fail("a head may carry at most one aggregate");
                        AggregateSpec spec;
                        spec.kind = word == "min"   ? AggKind::Min
                                    : word == "max" ? AggKind::Max
                                                    : AggKind::Count;
                        spec.valueCol = idx;
                        agg = spec;
                    } else {
                        companions.push_back(idx);
                        companionKind = word == "cmin" ? AggKind::Min : AggKind::Max;
                    }
                    head.args.push_back(std::move(var));
                    return;
                }
                // Plain symbol that happened to be named min/max/...
                head.args.push_back(Term::symConst(word));
                return;
            }
            // Detect `foo<X>` with an unknown keyword for a better message.
            std::string sym = word;
            advance();
            if (tok_.type == Token::Type::Lt) fail("unknown aggregate keyword '" + sym + "'");
            head.args.push_back(Term::symConst(sym));
            return;
        }
        head.args.push_back(parseTerm());
    }

    BodyAtom parseBodyLiteral() {
        BodyAtom lit;
        if (accept(Token::Type::Bang)) {
            lit.negated = true;
            if (tok_.type != Token::Type::LowerIdent) fail("expected an atom after '!'");
            lit.atom = parseRelationalAtom();
            return lit;
        }
        // Relational atom iff lower identifier followed by '('.
        if (tok_.type == Token::Type::LowerIdent) {
            std::string name = tok_.text;
            int line = tok_.line, col = tok_.col;
            advance();
            if (tok_.type == Token::Type::LParen) {
                advance();
                lit.atom = parseRelationalAtomTail(intern(name));
                return lit;
            }
            // Symbol leaf of a comparison.
            Expr lhs = parseExprContinued(Expr::leafOf(Term::symConst(name)));
            lit.atom = parseComparisonTail(std::move(lhs), line, col);
            return lit;
        }
        int line = tok_.line, col = tok_.col;
        Expr lhs = parseExpr();
        lit.atom = parseComparisonTail(std::move(lhs), line, col);
        return lit;
    }

    Atom parseComparisonTail(Expr lhs, int line, int col) {
        CmpOp op;
        switch (tok_.type) {
            case Token::Type::EqOp: op = CmpOp::Eq; break;
            case Token::Type::NeOp: op = CmpOp::Ne; break;
            case Token::Type::Lt: op = CmpOp::Lt; break;
            case Token::Type::Le: op = CmpOp::Le; break;
            case Token::Type::Gt: op = CmpOp::Gt; break;
            case Token::Type::Ge: op = CmpOp::Ge; break;
            default: throw ParseError(line, col, "expected a comparison operator");
        }
        advance();
        Expr rhs = parseExpr();
        return Atom::builtin(op, std::move(lhs), std::move(rhs));
    }

    Atom parseRelationalAtom() {
        if (tok_.type != Token::Type::LowerIdent) fail("expected a predicate name");
        SymId pred = intern(tok_.text);
        advance();
        expect(Token::Type::LParen, "'('");
        return parseRelationalAtomTail(pred);
    }

    Atom parseRelationalAtomTail(SymId pred) {
        // '(' already consumed.
        Atom a;
        a.predicate = pred;
        if (accept(Token::Type::RParen)) {
            noteArity(pred, 0);
            return a;
        }
        while (true) {
            a.args.push_back(parseTerm());
            if (accept(Token::Type::Comma)) continue;
            expect(Token::Type::RParen, "')'");
            break;
        }
        noteArity(pred, a.args.size());
        return a;
    }

    Term parseTerm() {
        switch (tok_.type) {
            case Token::Type::UpperIdent: {
                Term t = Term::var(tok_.text);
                advance();
                return t;
            }
            case Token::Type::LowerIdent: {
                // `nil` reads as the integer 0 (see README).
                Term t = tok_.text == "nil" ? Term::intConst(0) : Term::symConst(tok_.text);
                advance();
                return t;
            }
            case Token::Type::String: {
                Term t = Term::symConst(tok_.text);
                advance();
                return t;
            }
            case Token::Type::Integer: {
                Term t = Term::intConst(tok_.ival);
                advance();
                return t;
            }
            case Token::Type::Real: {
                Term t = Term::realConst(tok_.rval);
                advance();
                return t;
            }
            case Token::Type::Minus: {
                advance();
                if (tok_.type == Token::Type::Integer) {
                    Term t = Term::intConst(-tok_.ival);
                    advance();
                    return t;
                }
                if (tok_.type == Token::Type::Real) {
                    Term t = Term::realConst(-tok_.rval);
                    advance();
                    return t;
                }
                fail("expected a number after '-'");
            }
            case Token::Type::LBracket: {
                advance();
                std::vector<double> vec;
                if (!accept(Token::Type::RBracket)) {
                    while (true) {
                        bool neg = accept(Token::Type::Minus);
                        double v;
                        if (tok_.type == Token::Type::Integer)
                            v = static_cast<double>(tok_.ival);
                        else if (tok_.type == Token::Type::Real)
                            v = tok_.rval;
                        else
                            fail("expected a number in vector literal");
                        advance();
                        vec.push_back(neg ? -v : v);
                        if (accept(Token::Type::Comma)) continue;
                        expect(Token::Type::RBracket, "']'");
                        break;
                    }
                }
                return Term::vecConst(std::move(vec));
            }
            default: fail("expected a term");
        }
    }

    Expr parseExpr() { return parseExprContinued(parsePrimary()); }

    Expr parseExprContinued(Expr first) {
        // first is a parsed primary; continue with +- over */ precedence.
        Expr lhs = parseMulDivContinued(std::move(first));
        while (tok_.type == Token::Type::Plus || tok_.type == Token::Type::Minus) {
            Expr::Op op = tok_.type == Token::Type::Plus ? Expr::Op::Add : Expr::Op::Sub;
            advance();
            Expr rhs = parseMulDiv();
            lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parseMulDiv() { return parseMulDivContinued(parsePrimary()); }

    Expr parseMulDivContinued(Expr lhs) {
        while (tok_.type == Token::Type::Star || tok_.type == Token::Type::Slash) {
            Expr::Op op = tok_.type == Token::Type::Star ? Expr::Op::Mul : Expr::Op::Div;
            advance();
            Expr rhs = parsePrimary();
            lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parsePrimary() {
        if (accept(Token::Type::LParen)) {
            Expr e = parseExpr();
            expect(Token::Type::RParen, "')'");
            return e;
        }
        return Expr::leafOf(parseTerm());
    }

    // ---- program finalization ----

    void finalize(Program& prog) {
        prog.resolveAtomKinds();
        // Vector literals may only appear in facts and at foreign-atom positions.
        for (const auto& r : prog.rules) {
            for (const auto& b : r.body) {
                if (!b.atom.isRelational() || b.atom.kind == AtomKind::Foreign) continue;
                for (const auto& t : b.atom.args)
                    if (t.kind == Term::Kind::VecConst)
                        throw ParseError(0, 0,
                                         "vector literals are only allowed as foreign-predicate "
                                         "arguments (rule over '" +
                                             symName(b.atom.predicate) + "')");
            }
        }
    }
};

} // namespace

Program parseProgram(std::string_view text) {
    return Parser(text).parseProgram();
}

Atom parseQueryAtom(std::string_view text) {
    return Parser(text).parseQueryAtom();
}

} // namespace premlog
