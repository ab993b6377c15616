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

#include <json.hpp>

#include "premlog/certify.hpp"
#include "premlog/engine.hpp"

namespace premlog {

nlohmann::json valueToJson(const Value& v);

/// Rows in lexicographic tuple order; first column is the predicate name.
std::string relationToTsv(const Relation& r, bool predColumn = true);

nlohmann::json relationToJson(const Relation& r);

nlohmann::json statsToJson(const FixpointStats& s);

nlohmann::json certificationToJson(const CertificationReport& r);

/// Pure-analysis report: strata, SCCs, rule classification, safety verdicts,
/// PreM verdicts, the push rewrite diff, and the constant-push outcome for a
/// bound query.
nlohmann::json explainJson(const Program& p, const std::optional<Atom>& query);

} // namespace premlog
