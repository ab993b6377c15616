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

#include "premlog/facts.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace premlog {

namespace {

std::vector<std::string> splitLine(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

Value parseCell(const std::string& cell, const ColumnDecl& col, const std::string& file,
                size_t row) {
    auto err = [&](const std::string& what) -> FactError {
        return FactError(file + ": row " + std::to_string(row) + ": " + what + " (cell '" + cell +
                         "')");
    };
    switch (col.type) {
        case ColType::Sym: return Value::ofSym(cell);
        case ColType::Int: {
            int64_t v = 0;
            const char* b = cell.data();
            const char* e = b + cell.size();
            auto res = std::from_chars(b, e, v);
            if (res.ec != std::errc() || res.ptr != e) throw err("expected an integer");
            return Value::ofInt(v);
        }
        case ColType::Real: {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end != cell.c_str() + cell.size() || cell.empty())
                throw err("expected a real number");
            return Value::ofReal(v);
        }
        case ColType::Vec: {
            std::string body = cell;
            if (!body.empty() && body.front() == '[') {
                if (body.back() != ']') throw err("unterminated vector");
                body = body.substr(1, body.size() - 2);
            }
            std::vector<double> vec;
            if (!body.empty()) {
                for (const auto& part : splitLine(body, ',')) {
                    char* end = nullptr;
                    double v = std::strtod(part.c_str(), &end);
                    if (end != part.c_str() + part.size() || part.empty())
                        throw err("expected a real number in vector");
                    vec.push_back(v);
                }
            }
            return Value::ofVec(std::move(vec));
        }
    }
    throw err("unknown column type");
}

} // namespace

Relation loadFacts(const std::filesystem::path& path, SymId predicate,
                   const std::vector<ColumnDecl>& schema) {
    std::ifstream in(path);
    if (!in) throw FactError("cannot open fact file: " + path.string());
    char sep = path.extension() == ".csv" ? ',' : '\t';
    Relation rel(predicate, schema.size());
    std::string line;
    size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = splitLine(line, sep);
        if (cells.size() != schema.size())
            throw FactError(path.string() + ": row " + std::to_string(row) + ": expected " +
                            std::to_string(schema.size()) + " columns, found " +
                            std::to_string(cells.size()));
        Tuple t;
        t.reserve(schema.size());
        for (size_t i = 0; i < schema.size(); ++i)
            t.push_back(parseCell(cells[i], schema[i], path.string(), row));
        rel.insert(std::move(t));
    }
    return rel;
}

Interpretation factsOf(const Program& p) {
    Interpretation interp;
    for (const auto& f : p.facts) {
        Relation& rel = interp.ensure(f.predicate, f.args.size());
        Tuple t;
        t.reserve(f.args.size());
        for (const auto& a : f.args) t.push_back(a.toValue());
        rel.insert(std::move(t));
    }
    return interp;
}

Interpretation loadFactDir(const Program& p, const std::filesystem::path& dir) {
    Interpretation interp = factsOf(p);
    auto idb = p.idbPredicates();
    for (const auto& d : p.decls) {
        if (idb.count(d.predicate) || p.isForeign(d.predicate)) continue;
        std::filesystem::path tsv = dir / (symName(d.predicate) + ".tsv");
        std::filesystem::path csv = dir / (symName(d.predicate) + ".csv");
        std::filesystem::path file;
        if (std::filesystem::exists(tsv))
            file = tsv;
        else if (std::filesystem::exists(csv))
            file = csv;
        else
            continue;
        Relation loaded = loadFacts(file, d.predicate, d.columns);
        Relation& rel = interp.ensure(d.predicate, d.columns.size());
        for (const auto& t : loaded.tuples()) rel.insert(t);
    }
    return interp;
}

} // namespace premlog
