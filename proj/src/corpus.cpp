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

#include "premlog/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "premlog/facts.hpp"
#include "premlog/oracles.hpp"
#include "premlog/parser.hpp"

namespace premlog {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

QueryMode modeOf(const std::string& s) {
    if (s == "stratified") return QueryMode::Stratified;
    if (s == "pushed") return QueryMode::Pushed;
    return QueryMode::Auto;
}

double configReal(const Program& p, const std::string& name, double fallback) {
    auto it = p.config.find(name);
    if (it == p.config.end()) return fallback;
    return it->second.kind == Term::Kind::IntConst ? static_cast<double>(it->second.ival)
                                                   : it->second.rval;
}

} // namespace

std::vector<std::string> listCases(const std::filesystem::path& corpusRoot) {
    std::vector<std::string> names;
    if (!std::filesystem::exists(corpusRoot)) return names;
    for (const auto& entry : std::filesystem::directory_iterator(corpusRoot))
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "meta.json"))
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

CorpusCase loadCase(const std::filesystem::path& corpusRoot, const std::string& name) {
    CorpusCase c;
    c.name = name;
    c.dir = corpusRoot / name;
    std::ifstream metaIn(c.dir / "meta.json");
    if (!metaIn) throw std::runtime_error("no such corpus case: " + name);
    metaIn >> c.meta;

    std::string programFile = c.meta.value("program", std::string("program.dl"));
    c.program = parseProgram(slurp(c.dir / programFile));
    c.edb = loadFactDir(c.program, c.dir);
    if (c.meta.contains("query"))
        c.query = parseQueryAtom(c.meta["query"].get<std::string>());
    else if (c.program.query)
        c.query = c.program.query;
    c.mode = modeOf(c.meta.value("mode", std::string("auto")));
    c.cap = c.meta.value("cap", size_t{10000});
    c.oracle = c.meta.value("oracle", std::string("none"));
    c.outputPredicate = intern(c.meta.value("output", std::string("")));
    return c;
}

CaseResult runCase(const std::filesystem::path& corpusRoot, const std::string& name) {
    CorpusCase c = loadCase(corpusRoot, name);
    CaseResult res;

    ForeignRegistry registry;
    EvalOptions opts;
    opts.cap = c.cap;
    if (!c.program.foreigns.empty()) {
        registerLinearRegressionFromProgram(registry, c.program, c.edb);
        opts.foreigns = &registry;
    }

    QueryOutcome outcome = evalQuery(c.program, c.edb, c.query, c.mode, opts);
    res.stats = std::move(outcome.stats);
    res.capExceeded = outcome.capExceeded;
    if (c.query) {
        res.result = std::move(outcome.result);
    } else if (const Relation* rel = outcome.interp.find(c.outputPredicate)) {
        res.result = *rel;
    } else {
        res.result = Relation(c.outputPredicate, 0);
    }
    res.cert = certifyProgram(c.program, c.edb, opts, c.query);
    return res;
}

Relation runOracle(const std::filesystem::path& corpusRoot, const std::string& name) {
    CorpusCase c = loadCase(corpusRoot, name);

    if (c.oracle == "floyd_warshall") {
        const Relation* arcs = c.edb.find(intern("arc"));
        Relation empty(intern("arc"), 3);
        return oracles::floydWarshall(arcs ? *arcs : empty, c.outputPredicate);
    }
    if (c.oracle == "coin_change") {
        std::vector<int64_t> coins;
        if (const Relation* rel = c.edb.find(intern("coins")))
            for (const auto& t : rel->tuples()) coins.push_back(t[0].asInt());
        if (!c.query || c.query->args.empty() || !c.query->args[0].isConstant())
            throw std::runtime_error("coin_change oracle needs a bound query value");
        int64_t value = c.query->args[0].ival;
        Relation out(c.outputPredicate, 2);
        if (auto n = oracles::coinChangeMin(coins, value))
            out.insert({Value::ofInt(value), Value::ofInt(*n)});
        return out;
    }
    if (c.oracle == "knn") {
        std::vector<oracles::TrainingPoint> tr;
        std::vector<oracles::TestPoint> te;
        if (const Relation* rel = c.edb.find(intern("tr")))
            for (const auto& t : rel->sorted())
                tr.push_back({t[0].asInt(), t[1].numeric(), t[2].numeric(),
                              symName(t[3].asSym())});
        if (const Relation* rel = c.edb.find(intern("te")))
            for (const auto& t : rel->sorted())
                te.push_back({t[0].asInt(), t[1].numeric(), t[2].numeric()});
        int64_t k = static_cast<int64_t>(configReal(c.program, "K", 3));
        return oracles::knnClassify(tr, te, k, c.outputPredicate);
    }
    if (c.oracle == "gradient_descent") {
        std::vector<std::vector<double>> rows;
        if (const Relation* rel = c.edb.find(intern("training_data")))
            for (const auto& t : rel->sorted())
                for (const auto& v : t)
                    if (v.kind() == Value::Kind::Vec) rows.push_back(v.asVec());
        size_t dim = static_cast<size_t>(configReal(c.program, "dim", 2));
        double eta = configReal(c.program, "eta", 0.05);
        double delta = configReal(c.program, "delta", 1e-4);
        auto trace = oracles::gradientDescent(rows, dim, eta, delta, c.cap);
        Relation out(c.outputPredicate, 2);
        if (!trace.models.empty())
            out.insert({Value::ofInt(static_cast<int64_t>(trace.models.size()) - 1),
                        Value::ofVec(trace.models.back())});
        return out;
    }
    throw std::runtime_error("case '" + name + "' has no oracle (oracle = " + c.oracle + ")");
}

Relation loadGolden(const CorpusCase& c) {
    std::string goldenFile = c.meta.value("golden", std::string("golden.tsv"));
    std::ifstream in(c.dir / goldenFile);
    if (!in) throw std::runtime_error("no golden output for case " + c.name);
    std::vector<Tuple> rows;
    std::string line;
    size_t arity = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Tuple t;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, '\t')) {
            // Infer the cell type: vector, integer, real, else symbol.
            if (!cell.empty() && cell.front() == '[') {
                std::vector<double> vec;
                std::string body = cell.substr(1, cell.size() - 2);
                std::istringstream vs(body);
                std::string part;
                while (std::getline(vs, part, ',')) vec.push_back(std::stod(part));
                t.push_back(Value::ofVec(std::move(vec)));
                continue;
            }
            try {
                size_t pos = 0;
                long long iv = std::stoll(cell, &pos);
                if (pos == cell.size()) {
                    t.push_back(Value::ofInt(iv));
                    continue;
                }
            } catch (...) {
            }
            try {
                size_t pos = 0;
                double rv = std::stod(cell, &pos);
                if (pos == cell.size()) {
                    t.push_back(Value::ofReal(rv));
                    continue;
                }
            } catch (...) {
            }
            t.push_back(Value::ofSym(cell));
        }
        arity = std::max(arity, t.size());
        rows.push_back(std::move(t));
    }
    Relation out(c.outputPredicate, arity);
    for (auto& t : rows) out.insert(std::move(t));
    return out;
}

} // namespace premlog
