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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "premlog/facts.hpp"
#include "premlog/parser.hpp"
#include "premlog/pretty.hpp"

using namespace premlog;

TEST_CASE("aggregate head parses into the spec layout") {
    Program p = parseProgram("p(X,min<D>) <- q(X,D).");
    REQUIRE(p.rules.size() == 1);
    const Rule& r = p.rules[0];
    REQUIRE(r.headAgg.has_value());
    CHECK(r.headAgg->kind == AggKind::Min);
    CHECK(r.headAgg->valueCol == 1);
    CHECK(r.headAgg->groupbyCols == std::vector<size_t>{0});
    CHECK(r.headAgg->companionCols.empty());
}

TEST_CASE("empty input parses to the empty program") {
    Program p = parseProgram("");
    CHECK(p.rules.empty());
    CHECK(p.facts.empty());
    CHECK(prettyPrint(p) == "");
}

TEST_CASE("unclosed paren reports position") {
    try {
        parseProgram("p(X) <- q(X");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.col() >= 11);
    }
}

TEST_CASE("arity conflicts are rejected") {
    CHECK_THROWS_AS(parseProgram("p(X) <- q(X).\np(X, Y) <- q(X), q(Y)."), ParseError);
}

TEST_CASE("unknown aggregate keyword") {
    try {
        parseProgram("p(X, med<D>) <- q(X, D).");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unknown aggregate keyword") != std::string::npos);
    }
}

TEST_CASE("companion annotations require matching extremum") {
    CHECK_THROWS_AS(parseProgram("p(min<D>, cmax<L>) <- q(D, L)."), ParseError);
    CHECK_THROWS_AS(parseProgram("p(count<D>, cmin<L>) <- q(D, L)."), ParseError);
    CHECK_THROWS_AS(parseProgram("p(X, cmin<L>) <- q(X, L)."), ParseError);
    Program ok = parseProgram("p(min<D>, cmin<L>) <- q(D, L).");
    CHECK(ok.rules[0].headAgg->companionCols == std::vector<size_t>{1});
}

TEST_CASE("nil parses as the integer 0") {
    Program p = parseProgram("p(Id, nil) <- q(Id).\nf(nil).");
    CHECK((p.rules[0].head.args[1] == Term::intConst(0)));
    CHECK((p.facts[0].args[0] == Term::intConst(0)));
}

TEST_CASE("facts must be ground") {
    CHECK_THROWS_AS(parseProgram("arc(a, Y, 1)."), ParseError);
}

TEST_CASE("vector literals only at foreign positions") {
    CHECK_THROWS_AS(parseProgram("p(X) <- q(X, [1.0, 2.0])."), ParseError);
    Program ok = parseProgram(".foreign f(A+, B-)\np(X) <- f([1.0], X), X > 0.");
    CHECK(ok.rules.size() == 1);
}

TEST_CASE("negative literals, strings and reals") {
    Program p = parseProgram("p(-1, \"hello world\", 2.5).");
    CHECK((p.facts[0].args[0] == Term::intConst(-1)));
    CHECK((p.facts[0].args[1] == Term::symConst("hello world")));
    CHECK((p.facts[0].args[2] == Term::realConst(2.5)));
    Program round = parseProgram(prettyPrint(p));
    CHECK((round == p));
}

TEST_CASE("round-trip on the corpus programs") {
    namespace fs = std::filesystem;
    size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(premlog::testing::corpusRoot())) {
        fs::path prog = entry.path() / "program.dl";
        if (!fs::exists(prog)) continue;
        std::ifstream in(prog);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        Program once = parseProgram(text);
        Program twice = parseProgram(prettyPrint(once));
        CHECK_MESSAGE((once == twice), "round-trip failed for ", prog.string());
        ++seen;
    }
    CHECK(seen >= 9);
}

TEST_CASE("pushed shortest path prints min in both path rules") {
    Program p = parseProgram(premlog::testing::kShortestPathPushed);
    std::string text = prettyPrint(p);
    size_t first = text.find("min<");
    REQUIRE(first != std::string::npos);
    CHECK(text.find("min<", first + 1) != std::string::npos);
}

TEST_CASE("query and directives round-trip") {
    Program p = parseProgram(
        ".decl arc(sym, sym, int >= 0)\n.config K = 3\n.foreign f(A+, B-)\n"
        "p(X) <- arc(X, Y, D), f(X, Z).\n?- p(q1).\n");
    REQUIRE(p.query.has_value());
    CHECK((p.config.at("K") == Term::intConst(3)));
    CHECK(p.decls[0].columns[2].nonNegative());
    CHECK((parseProgram(prettyPrint(p)) == p));
}

// ---------------------------------------------------------------------------
// Fact files
// ---------------------------------------------------------------------------

namespace {

std::filesystem::path writeTemp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_facts single row") {
    auto path = writeTemp("premlog_facts1.tsv", "a\tb\t1\n");
    std::vector<ColumnDecl> schema{{ColType::Sym}, {ColType::Sym}, {ColType::Int}};
    Relation rel = loadFacts(path, intern("arc"), schema);
    REQUIRE(rel.size() == 1);
    CHECK(rel.contains({Value::ofSym("a"), Value::ofSym("b"), Value::ofInt(1)}));
}

TEST_CASE("duplicate rows collapse and order does not matter") {
    std::vector<ColumnDecl> schema{{ColType::Sym}, {ColType::Int}};
    auto p1 = writeTemp("premlog_facts2.tsv", "a\t1\nb\t2\na\t1\n");
    auto p2 = writeTemp("premlog_facts3.tsv", "b\t2\na\t1\n");
    Relation r1 = loadFacts(p1, intern("e"), schema);
    Relation r2 = loadFacts(p2, intern("e"), schema);
    CHECK(r1.size() == 2);
    CHECK(r1.sameTuples(r2));
}

TEST_CASE("type errors carry the row number") {
    auto path = writeTemp("premlog_facts4.tsv", "a\tb\tx\n");
    std::vector<ColumnDecl> schema{{ColType::Sym}, {ColType::Sym}, {ColType::Int}};
    try {
        loadFacts(path, intern("arc"), schema);
        FAIL("expected a fact error");
    } catch (const FactError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("column count mismatches are rejected") {
    auto path = writeTemp("premlog_facts5.tsv", "a\tb\n");
    std::vector<ColumnDecl> schema{{ColType::Sym}, {ColType::Sym}, {ColType::Int}};
    CHECK_THROWS_AS(loadFacts(path, intern("arc"), schema), FactError);
}

TEST_CASE("csv and vec cells") {
    auto path = writeTemp("premlog_facts6.csv", "1,[0.5,1.5]\n");
    std::vector<ColumnDecl> schema{{ColType::Int}, {ColType::Vec}};
    Relation rel = loadFacts(path, intern("training_data"), schema);
    REQUIRE(rel.size() == 1);
    CHECK(rel.contains({Value::ofInt(1), Value::ofVec({0.5, 1.5})}));
}
