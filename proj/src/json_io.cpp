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

#include "premlog/json_io.hpp"

#include <algorithm>
#include <sstream>

#include "premlog/prem.hpp"
#include "premlog/pretty.hpp"

namespace premlog {

using nlohmann::json;

json valueToJson(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Int: return v.asInt();
        case Value::Kind::Real: return v.asReal();
        case Value::Kind::Sym: return symName(v.asSym());
        case Value::Kind::Vec: return v.asVec();
    }
    return nullptr;
}

std::string relationToTsv(const Relation& r, bool predColumn) {
    std::ostringstream os;
    for (const auto& t : r.sorted()) {
        if (predColumn) os << symName(r.predicate());
        for (size_t i = 0; i < t.size(); ++i) {
            if (i || predColumn) os << '\t';
            os << t[i].toText();
        }
        os << '\n';
    }
    return os.str();
}

json relationToJson(const Relation& r) {
    json rows = json::array();
    for (const auto& t : r.sorted()) {
        json row = json::array();
        for (const auto& v : t) row.push_back(valueToJson(v));
        rows.push_back(std::move(row));
    }
    return json{{"predicate", symName(r.predicate())}, {"tuples", std::move(rows)}};
}

json statsToJson(const FixpointStats& s) {
    json per = json::array();
    for (const auto& st : s.perStratum)
        per.push_back(json{{"predicates", st.predicates},
                           {"iterations", st.iterations},
                           {"derivations_attempted", st.derivationsAttempted},
                           {"pushed", st.pushed},
                           {"cap_exceeded", st.capExceeded}});
    return json{{"v", 1},
                {"iterations", s.iterations},
                {"derivations_attempted", s.derivationsAttempted},
                {"tuples_retained", s.tuplesRetained},
                {"wall_ms", s.wallMs},
                {"per_stratum", std::move(per)}};
}

json certificationToJson(const CertificationReport& r) {
    json per = json::array();
    for (const auto& rec : r.perIteration) {
        json item{{"iter", rec.iter},
                  {"full_ok", rec.fullOk},
                  {"intrinsic_ok", rec.intrinsicOk},
                  {"radical_ok", rec.radicalOk}};
        if (rec.witness) {
            json w = json::array();
            for (const auto& v : *rec.witness) w.push_back(valueToJson(v));
            item["witness"] = std::move(w);
        } else {
            item["witness"] = nullptr;
        }
        per.push_back(std::move(item));
    }
    json endToEnd{{"baseline_terminated", r.baselineTerminated}};
    if (r.equal)
        endToEnd["equal"] = *r.equal;
    else
        endToEnd["equal"] = nullptr;
    if (!r.explanation.empty()) endToEnd["explanation"] = r.explanation;
    json out{{"v", 1},
             {"check", "reached-interpretation"},
             {"per_iteration", std::move(per)},
             {"end_to_end", std::move(endToEnd)}};
    out["constrained_predicate"] = r.hasConstraint ? json(symName(r.predicate)) : json(nullptr);
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

json explainJson(const Program& input, const std::optional<Atom>& query) {
    json out{{"v", 1}};
    Program work = substituteConfig(input);
    work = inlineConditionRules(work);
    std::optional<Atom> q = query ? query : work.query;

    StratifiedProgram sp = stratify(buildGraph(work), work);

    json edb = json::array();
    for (SymId p : sp.edbPredicates) edb.push_back(symName(p));
    out["edb"] = std::move(edb);

    auto strataJson = [](const StratifiedProgram& s) {
        json arr = json::array();
        for (size_t i = 0; i < s.strata.size(); ++i) {
            const Stratum& st = s.strata[i];
            json preds = json::array();
            for (SymId p : st.predicates) preds.push_back(symName(p));
            json exitRules = json::array(), recRules = json::array();
            for (size_t ri : st.exitRules) exitRules.push_back(toString(s.program.rules[ri]));
            for (size_t ri : st.recursiveRules) recRules.push_back(toString(s.program.rules[ri]));
            arr.push_back(json{{"index", i},
                               {"predicates", std::move(preds)},
                               {"recursive", st.sccFlag},
                               {"pushed", st.pushed},
                               {"exit_rules", std::move(exitRules)},
                               {"recursive_rules", std::move(recRules)}});
        }
        return arr;
    };
    out["strata"] = strataJson(sp);

    // Safety verdicts, with and without the demand-mode query seeding.
    {
        auto violations = safetyCheck(work);
        auto demandViolations = q ? safetyCheck(work, q) : violations;
        json vj = json::array();
        for (const auto& v : violations) {
            bool demandSafe =
                std::none_of(demandViolations.begin(), demandViolations.end(),
                             [&](const SafetyViolation& d) {
                                 return d.ruleIdx == v.ruleIdx && d.variable == v.variable;
                             });
            vj.push_back(json{{"rule", toString(work.rules[v.ruleIdx])},
                              {"variable", symName(v.variable)},
                              {"reason", v.reason},
                              {"safe_in_demand_mode", demandSafe}});
        }
        out["safety"] = json{{"violations", std::move(vj)}};
    }

    // Aggregate pushing: rewrite diff plus PreM verdicts per recursive rule.
    Program analysisTarget = work;
    StratifiedProgram spTarget = sp;
    {
        json rewrite;
        auto pushable = pushableAggregateRules(sp);
        if (!pushable.empty()) {
            json original = json::array();
            for (const auto& r : work.rules) original.push_back(toString(r));
            Program pushed = work;
            StratifiedProgram spPushed = sp;
            bool any = false;
            for (bool changed = true; changed;) {
                changed = false;
                for (size_t ri : pushableAggregateRules(spPushed)) {
                    try {
                        pushed = pushAggregate(spPushed, ri);
                        spPushed = stratify(buildGraph(pushed), pushed);
                        any = true;
                        changed = true;
                        break;
                    } catch (const NotPushable& e) {
                        rewrite["not_pushable"] = e.what();
                    }
                }
            }
            if (any) {
                json pushedRules = json::array();
                for (const auto& r : pushed.rules) pushedRules.push_back(toString(r));
                rewrite["original"] = std::move(original);
                rewrite["pushed"] = std::move(pushedRules);
                analysisTarget = pushed;
                spTarget = spPushed;
            }
        }
        out["rewrite"] = std::move(rewrite);
    }

    {
        json prem = json::array();
        std::set<std::pair<size_t, SymId>> seen;
        for (const auto& [si, ri, spec] : spTarget.aggInRecursion) {
            const Stratum& st = spTarget.strata[si];
            ConstraintGamma gamma{spTarget.program.rules[ri].head.predicate, spec};
            if (!seen.insert({si, gamma.predicate}).second) continue;
            for (size_t rri : st.recursiveRules) {
                const Rule& rr = spTarget.program.rules[rri];
                if (rr.head.predicate != gamma.predicate) continue;
                PremClass pc = classifyPrem(spTarget.program, rr, gamma);
                prem.push_back(json{{"rule", toString(rr)},
                                    {"predicate", symName(gamma.predicate)},
                                    {"verdict", premVerdictText(pc.verdict)},
                                    {"evidence", pc.evidence}});
            }
        }
        out["prem"] = std::move(prem);
    }

    // Constant pushdown for a bound query (r-PreM).
    if (q) {
        json cp;
        bool anyBound = false;
        for (size_t i = 0; i < q->args.size(); ++i) {
            if (!q->args[i].isConstant()) continue;
            anyBound = true;
            cp["predicate"] = symName(q->predicate);
            cp["arg"] = i;
            cp["value"] = valueToJson(q->args[i].toValue());
            try {
                ConstantPushResult res =
                    pushConstant(analysisTarget, {q->predicate, i, q->args[i]});
                cp["verdict"] = "radical";
                json rules = json::array();
                for (const auto& s : res.rewrittenRules) rules.push_back(s);
                cp["rewritten_rules"] = std::move(rules);
                json notes = json::array();
                for (const auto& n : res.notes) notes.push_back(n);
                cp["notes"] = std::move(notes);
                cp["recursive_rules_unchanged"] = true;
            } catch (const NotRadical& e) {
                cp["verdict"] = "not_radical";
                cp["reason"] = e.what();
                cp["fallback"] = "demand_rewrite";
            }
            break;
        }
        if (anyBound) out["constant_push"] = std::move(cp);
    }
    return out;
}

} // namespace premlog
