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

#include <cmath>

#include "helpers.hpp"
#include "premlog/corpus.hpp"
#include "premlog/foreign.hpp"
#include "premlog/oracles.hpp"
#include "premlog/parser.hpp"

using namespace premlog;
using namespace premlog::testing;

namespace {

ForeignRegistry linreg(std::vector<std::vector<double>> rows, double eta, size_t dim) {
    ForeignRegistry reg;
    registerLinearRegression(reg, "training_data", std::move(rows), eta, dim);
    return reg;
}

} // namespace

TEST_CASE("init_model yields the zero vector of the configured dimension") {
    ForeignRegistry reg = linreg({{1.0, 1.0, 3.0}}, 0.1, 2);
    auto out = evalForeign(*reg.find("init_model"), {});
    REQUIRE(out.size() == 1);
    CHECK((out[0][0] == Value::ofVec({0.0, 0.0})));
}

TEST_CASE("compute at the true coefficients on noiseless data is exact") {
    // y = 2x + 1, rows [x, 1, y]
    ForeignRegistry reg = linreg({{0.0, 1.0, 1.0}, {1.0, 1.0, 3.0}, {2.0, 1.0, 5.0}}, 0.1, 2);
    Tuple bound{Value::ofVec({2.0, 1.0}), Value::ofSym("training_data")};
    auto out = evalForeign(*reg.find("compute"), bound);
    REQUIRE(out.size() == 1);
    CHECK((out[0][2] == Value::ofReal(0.0)));
    CHECK((out[0][3] == Value::ofVec({0.0, 0.0})));
}

TEST_CASE("one update step on the single-point dataset") {
    // {x=1 -> y=2}, M=(0), eta=0.1: G = -2*1*(2-0) = -4, M' = 0.4
    ForeignRegistry reg = linreg({{1.0, 2.0}}, 0.1, 1);
    auto computed = evalForeign(*reg.find("compute"),
                                {Value::ofVec({0.0}), Value::ofSym("training_data")});
    REQUIRE(computed.size() == 1);
    CHECK((computed[0][3] == Value::ofVec({-4.0})));
    auto updated = evalForeign(*reg.find("update"), {Value::ofVec({0.0}), Value::ofVec({-4.0})});
    REQUIRE(updated.size() == 1);
    CHECK((updated[0][2] == Value::ofVec({0.4})));
}

TEST_CASE("dimension mismatches are reported") {
    ForeignRegistry reg = linreg({{1.0, 1.0, 3.0}}, 0.1, 2);
    CHECK_THROWS_AS(
        evalForeign(*reg.find("compute"), {Value::ofVec({0.0}), Value::ofSym("training_data")}),
        ForeignError);
    CHECK_THROWS_AS(
        evalForeign(*reg.find("update"), {Value::ofVec({0.0}), Value::ofVec({1.0, 2.0})}),
        ForeignError);
}

TEST_CASE("missing bound arguments are reported") {
    ForeignRegistry reg = linreg({{1.0, 2.0}}, 0.1, 1);
    CHECK_THROWS_AS(evalForeign(*reg.find("compute"), {Value::ofVec({0.0})}), ForeignError);
}

TEST_CASE("unknown relation argument is rejected") {
    ForeignRegistry reg = linreg({{1.0, 2.0}}, 0.1, 1);
    CHECK_THROWS_AS(
        evalForeign(*reg.find("compute"), {Value::ofVec({0.0}), Value::ofSym("other")}),
        ForeignError);
}

// ---------------------------------------------------------------------------
// Template equivalence
// ---------------------------------------------------------------------------

namespace {

struct MlFixture {
    Program temporal, pushed;
    Interpretation edb;
    ForeignRegistry registry;
    EvalOptions opts;

    explicit MlFixture(const std::string& overrides = "") {
        CorpusCase t = loadCase(corpusRoot(), "ml_linreg_temporal");
        CorpusCase p = loadCase(corpusRoot(), "ml_linreg_pushed");
        temporal = t.program;
        pushed = p.program;
        if (!overrides.empty()) {
            // apply config overrides to both programs (name=value,...)
            std::istringstream ss(overrides);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto eq = item.find('=');
                double v = std::stod(item.substr(eq + 1));
                Term term = Term::realConst(v);
                temporal.config[item.substr(0, eq)] = term;
                pushed.config[item.substr(0, eq)] = term;
            }
        }
        edb = t.edb;
        registerLinearRegressionFromProgram(registry, temporal, edb);
        opts.foreigns = &registry;
    }
};

} // namespace

TEST_CASE("temporal and pushed training agree on the shipped case") {
    MlFixture f;
    CHECK(mlTemplateEquivalence(f.temporal, f.pushed, f.edb, f.opts, 1e-9));

    MlRun a = runMlProgram(f.temporal, f.edb, f.opts);
    MlRun b = runMlProgram(f.pushed, f.edb, f.opts);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    REQUIRE(a.models.size() == b.models.size());
    for (size_t j = 0; j < a.models.size(); ++j) {
        REQUIRE(a.models[j].size() == b.models[j].size());
        for (size_t k = 0; k < a.models[j].size(); ++k)
            CHECK(std::abs(a.models[j][k] - b.models[j][k]) <= 1e-9);
    }
    // error sequence non-increasing, stop at the first E <= delta
    for (size_t j = 0; j + 1 < a.errors.size(); ++j) CHECK(a.errors[j + 1] <= a.errors[j]);
    for (size_t j = 0; j + 1 < a.errors.size(); ++j) CHECK(a.errors[j] > 1e-4);
    CHECK(a.errors.back() <= 1e-4);

    // the independent gradient-descent loop reproduces the trajectory
    CorpusCase t = loadCase(corpusRoot(), "ml_linreg_temporal");
    std::vector<std::vector<double>> rows;
    for (const auto& tup : t.edb.at(intern("training_data")).sorted())
        rows.push_back(tup[1].asVec());
    auto trace = oracles::gradientDescent(rows, 2, 0.05, 1e-4, 10000);
    REQUIRE(trace.converged);
    REQUIRE(trace.models.size() == a.models.size());
    for (size_t j = 0; j < trace.models.size(); ++j)
        for (size_t k = 0; k < 2; ++k)
            CHECK(std::abs(trace.models[j][k] - a.models[j][k]) <= 1e-9);
}

TEST_CASE("a threshold above the initial error stops both runs at iteration 0") {
    MlFixture f("delta=1000.0");
    CHECK(mlTemplateEquivalence(f.temporal, f.pushed, f.edb, f.opts, 1e-9));
    MlRun a = runMlProgram(f.temporal, f.edb, f.opts);
    CHECK(a.models.size() == 1);
    CHECK((a.models[0] == std::vector<double>{0.0, 0.0}));
}

TEST_CASE("a divergent step size raises NonConvergence") {
    MlFixture f("eta=1000.0");
    // re-register so the new eta reaches the update predicate
    ForeignRegistry reg;
    registerLinearRegressionFromProgram(reg, f.temporal, f.edb);
    EvalOptions opts;
    opts.foreigns = &reg;
    opts.cap = 2000;
    CHECK_THROWS_AS(mlTemplateEquivalence(f.temporal, f.pushed, f.edb, opts, 1e-9),
                    NonConvergence);
}
