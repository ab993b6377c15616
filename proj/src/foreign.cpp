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

#include "premlog/foreign.hpp"

#include <algorithm>
#include <memory>

namespace premlog {

std::vector<Tuple> evalForeign(const ForeignPredicate& fp, const Tuple& boundArgs) {
    size_t boundCount = static_cast<size_t>(
        std::count(fp.boundMode.begin(), fp.boundMode.end(), true));
    if (boundArgs.size() != boundCount)
        throw ForeignError("UnboundModeArg: foreign predicate '" + fp.name + "' expects " +
                           std::to_string(boundCount) + " bound arguments, got " +
                           std::to_string(boundArgs.size()));
    return fp.eval(boundArgs);
}

void registerLinearRegression(ForeignRegistry& reg, std::string relationName,
                              std::vector<std::vector<double>> rows, double eta, size_t dim) {
    for (const auto& row : rows)
        if (row.size() != dim + 1)
            throw ForeignError("training row has " + std::to_string(row.size()) +
                               " entries, expected " + std::to_string(dim + 1) +
                               " ([x_1..x_dim, y])");

    reg.add(ForeignPredicate{
        "init_model",
        {false},
        [dim](const Tuple&) -> std::vector<Tuple> {
            return {Tuple{Value::ofVec(std::vector<double>(dim, 0.0))}};
        }});

    auto rowsShared = std::make_shared<std::vector<std::vector<double>>>(std::move(rows));
    std::string relName = relationName;

    reg.add(ForeignPredicate{
        "compute",
        {true, true, false, false},
        [rowsShared, relName, dim](const Tuple& bound) -> std::vector<Tuple> {
            const Value& m = bound[0];
            const Value& rel = bound[1];
            if (m.kind() != Value::Kind::Vec)
                throw ForeignError("compute: model argument must be a vector");
            if (rel.kind() != Value::Kind::Sym || symName(rel.asSym()) != relName)
                throw ForeignError("compute: unknown training relation argument '" +
                                   rel.toText() + "', expected '" + relName + "'");
            const auto& w = m.asVec();
            if (w.size() != dim)
                throw ForeignError("compute: model has dimension " + std::to_string(w.size()) +
                                   ", training rows expect " + std::to_string(dim));
            const auto& data = *rowsShared;
            double mse = 0.0;
            std::vector<double> grad(dim, 0.0);
            for (const auto& row : data) {
                double pred = 0.0;
                for (size_t k = 0; k < dim; ++k) pred += w[k] * row[k];
                double resid = row[dim] - pred;
                mse += resid * resid;
                for (size_t k = 0; k < dim; ++k) grad[k] += -2.0 * row[k] * resid;
            }
            double n = data.empty() ? 1.0 : static_cast<double>(data.size());
            mse /= n;
            for (auto& gk : grad) gk /= n;
            return {Tuple{m, rel, Value::ofReal(mse), Value::ofVec(std::move(grad))}};
        }});

    reg.add(ForeignPredicate{
        "update",
        {true, true, false},
        [eta, dim](const Tuple& bound) -> std::vector<Tuple> {
            const Value& m = bound[0];
            const Value& g = bound[1];
            if (m.kind() != Value::Kind::Vec || g.kind() != Value::Kind::Vec)
                throw ForeignError("update: model and gradient must be vectors");
            const auto& w = m.asVec();
            const auto& grad = g.asVec();
            if (w.size() != dim || grad.size() != dim)
                throw ForeignError("update: dimension mismatch between model (" +
                                   std::to_string(w.size()) + ") and gradient (" +
                                   std::to_string(grad.size()) + ")");
            std::vector<double> next(dim);
            for (size_t k = 0; k < dim; ++k) next[k] = w[k] - eta * grad[k];
            return {Tuple{m, g, Value::ofVec(std::move(next))}};
        }});
}

void registerLinearRegressionFromProgram(ForeignRegistry& reg, const Program& p,
                                         const Interpretation& edb) {
    auto cfgReal = [&](const std::string& name, double fallback) {
        auto it = p.config.find(name);
        if (it == p.config.end()) return fallback;
        const Term& t = it->second;
        return t.kind == Term::Kind::IntConst ? static_cast<double>(t.ival) : t.rval;
    };
    double eta = cfgReal("eta", 0.05);
    size_t dim = static_cast<size_t>(cfgReal("dim", 2));

    std::string relName = "training_data";
    std::vector<std::vector<double>> rows;
    if (const Relation* rel = edb.find(intern(relName))) {
        // Capture in deterministic (id-sorted) order: tuple order pins the
        // floating-point summation order of compute().
        for (const auto& t : rel->sorted()) {
            for (const auto& v : t)
                if (v.kind() == Value::Kind::Vec) rows.push_back(v.asVec());
        }
    }
    registerLinearRegression(reg, relName, std::move(rows), eta, dim);
}

} // namespace premlog
