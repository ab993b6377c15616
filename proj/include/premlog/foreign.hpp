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

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "premlog/relation.hpp"

namespace premlog {

class ForeignError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Host-registered predicate. Given the values of the bound ('+') argument
/// positions, in order, eval returns the set of ground completions as full
/// argument tuples. Must be deterministic in its bound arguments.
struct ForeignPredicate {
    std::string name;
    std::vector<bool> boundMode; // true = '+', must be bound on call
    std::function<std::vector<Tuple>(const Tuple& boundArgs)> eval;
};

class ForeignRegistry {
public:
    void add(ForeignPredicate fp) { preds_[fp.name] = std::move(fp); }
    const ForeignPredicate* find(const std::string& name) const {
        auto it = preds_.find(name);
        return it == preds_.end() ? nullptr : &it->second;
    }

private:
    std::map<std::string, ForeignPredicate> preds_;
};

/// Validates the mode signature and runs the predicate.
std::vector<Tuple> evalForeign(const ForeignPredicate& fp, const Tuple& boundArgs);

/// Batch-gradient-descent linear regression over captured training rows.
/// Each row is [x_1 .. x_dim, y]; the model is the weight vector w with
/// prediction w·x.
///
/// Registers:
///   init_model(M-)            -> zero vector of the configured dimension
///   compute(M+, R+, E-, G-)   -> E = mean squared error, G = mean gradient
///                                of the MSE at M; R names the captured
///                                relation and is validated, rows are used
///                                in capture order
///   update(M+, G+, M2-)       -> M2 = M - eta * G
void registerLinearRegression(ForeignRegistry& reg, std::string relationName,
                              std::vector<std::vector<double>> rows, double eta, size_t dim);

/// Convenience: captures rows from an interpretation relation whose tuples
/// are (id, vec) and registers the trio using the program's eta/dim config.
void registerLinearRegressionFromProgram(ForeignRegistry& reg, const Program& p,
                                         const Interpretation& edb);

} // namespace premlog
