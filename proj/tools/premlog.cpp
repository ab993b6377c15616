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

// Command-line front end: run programs, certify the aggregate pushdown,
// explain the analysis, and benchmark stratified vs pushed evaluation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "premlog/certify.hpp"
#include "premlog/corpus.hpp"
#include "premlog/engine.hpp"
#include "premlog/facts.hpp"
#include "premlog/json_io.hpp"
#include "premlog/parser.hpp"
#include "premlog/pretty.hpp"

namespace {

using namespace premlog;

// Documented exit codes.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitCapExceeded = 4;
constexpr int kExitCertViolation = 5;

struct CommonArgs {
    std::string programPath;
    std::string factDir;
    std::string queryText;
    std::string mode = "auto";
    size_t cap = 0; // 0 = unset
    std::string format = "tsv";
    std::string outPath;
    std::vector<std::string> sets;
};

size_t effectiveCap(size_t flagCap) {
    if (flagCap > 0) return flagCap;
    if (const char* env = std::getenv("PREMLOG_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return 10000;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void applySets(Program& p, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects name=value, got '" + s + "'");
        std::string name = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        // integer, real, else symbol
        try {
            size_t pos = 0;
            long long iv = std::stoll(value, &pos);
            if (pos == value.size()) {
                p.config[name] = Term::intConst(iv);
                continue;
            }
        } catch (...) {
        }
        try {
            size_t pos = 0;
            double rv = std::stod(value, &pos);
            if (pos == value.size()) {
                p.config[name] = Term::realConst(rv);
                continue;
            }
        } catch (...) {
        }
        p.config[name] = Term::symConst(value);
    }
}

QueryMode parseMode(const std::string& mode) {
    if (mode == "stratified") return QueryMode::Stratified;
    if (mode == "pushed") return QueryMode::Pushed;
    if (mode == "auto") return QueryMode::Auto;
    throw std::runtime_error("unknown mode '" + mode + "' (stratified|pushed|auto)");
}

struct LoadedProgram {
    Program program;
    Interpretation edb;
    std::optional<Atom> query;
    ForeignRegistry registry;
    EvalOptions opts;
};

LoadedProgram loadAll(const CommonArgs& args) {
    LoadedProgram lp;
    lp.program = parseProgram(slurp(args.programPath));
    applySets(lp.program, args.sets);
    lp.edb = args.factDir.empty() ? factsOf(lp.program)
                                  : loadFactDir(lp.program, args.factDir);
    if (!args.queryText.empty())
        lp.query = parseQueryAtom(args.queryText);
    else
        lp.query = lp.program.query;
    lp.opts.cap = effectiveCap(args.cap);
    if (!lp.program.foreigns.empty()) {
        registerLinearRegressionFromProgram(lp.registry, lp.program, lp.edb);
        lp.opts.foreigns = &lp.registry;
    }
    return lp;
}

void emit(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outPath);
    out << text;
}

int cmdRun(const CommonArgs& args, bool certify) {
    LoadedProgram lp = loadAll(args);
    QueryOutcome outcome =
        evalQuery(lp.program, lp.edb, lp.query, parseMode(args.mode), lp.opts);

    std::string text;
    if (args.format == "json") {
        nlohmann::json j{{"v", 1}, {"stats", statsToJson(outcome.stats)}};
        if (lp.query) {
            j["result"] = relationToJson(outcome.result);
        } else {
            nlohmann::json rels = nlohmann::json::array();
            auto idb = outcome.effectiveProgram.idbPredicates();
            for (const auto& [pred, rel] : outcome.interp.relations())
                if (idb.count(pred)) rels.push_back(relationToJson(rel));
            j["result"] = std::move(rels);
        }
        if (outcome.capExceeded) j["cap_exceeded"] = true;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        if (lp.query) {
            os << relationToTsv(outcome.result);
        } else {
            auto idb = outcome.effectiveProgram.idbPredicates();
            for (const auto& [pred, rel] : outcome.interp.relations())
                if (idb.count(pred)) os << relationToTsv(rel);
        }
        text = os.str();
    }
    emit(text, args.outPath);
    std::cerr << "stats: " << statsToJson(outcome.stats).dump() << "\n";

    int code = kExitOk;
    if (outcome.capExceeded) code = kExitCapExceeded;
    if (certify) {
        CertificationReport report = certifyProgram(lp.program, lp.edb, lp.opts, lp.query);
        std::cerr << "certification: " << certificationToJson(report).dump() << "\n";
        if (report.anyViolation()) code = kExitCertViolation;
    }
    return code;
}

int cmdCertify(const CommonArgs& args) {
    LoadedProgram lp = loadAll(args);
    CertificationReport report = certifyProgram(lp.program, lp.edb, lp.opts, lp.query);
    emit(certificationToJson(report).dump(2) + "\n", args.outPath);
    return report.anyViolation() ? kExitCertViolation : kExitOk;
}

int cmdExplain(const CommonArgs& args) {
    LoadedProgram lp = loadAll(args);
    emit(explainJson(lp.program, lp.query).dump(2) + "\n", args.outPath);
    return kExitOk;
}

int cmdBench(const CommonArgs& args) {
    LoadedProgram lp = loadAll(args);
    struct Row {
        std::string mode;
        FixpointStats stats;
        bool capExceeded;
    };
    std::vector<Row> rows;
    for (const char* mode : {"stratified", "pushed"}) {
        QueryOutcome outcome = evalQuery(lp.program, lp.edb, lp.query, parseMode(mode), lp.opts);
        rows.push_back({mode, std::move(outcome.stats), outcome.capExceeded});
    }
    if (args.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json item{{"mode", r.mode}, {"stats", statsToJson(r.stats)}};
            item["cap_exceeded"] = r.capExceeded;
            j.push_back(std::move(item));
        }
        emit(nlohmann::json{{"v", 1}, {"rows", std::move(j)}}.dump(2) + "\n", args.outPath);
    } else {
        std::ostringstream os;
        os << "mode\titerations\tderivations\tretained\twall_ms\tstatus\n";
        for (const auto& r : rows)
            os << r.mode << '\t' << r.stats.iterations << '\t' << r.stats.derivationsAttempted
               << '\t' << r.stats.tuplesRetained << '\t' << r.stats.wallMs << '\t'
               << (r.capExceeded ? "cap_exceeded" : "ok") << '\n';
        emit(os.str(), args.outPath);
    }
    return kExitOk;
}

void addCommon(CLI::App* cmd, CommonArgs& args, bool withMode = true) {
    cmd->add_option("program", args.programPath, "program file (.dl)")->required();
    cmd->add_option("--facts", args.factDir, "fact directory (<pred>.tsv / <pred>.csv)");
    cmd->add_option("--query", args.queryText, "query atom, e.g. \"num(9, N)\"");
    if (withMode)
        cmd->add_option("--mode", args.mode, "evaluation mode: stratified|pushed|auto");
    cmd->add_option("--cap", args.cap, "iteration cap (default 10000; env PREMLOG_CAP)");
    cmd->add_option("--format", args.format, "output format: tsv|json");
    cmd->add_option("--out", args.outPath, "write results to a file instead of stdout");
    cmd->add_option("--set", args.sets, "config constant override, name=value (repeatable)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"premlog — Datalog with extremum aggregates in recursion"};
    app.require_subcommand(1);

    CommonArgs runArgs, certifyArgs, explainArgs, benchArgs;
    bool runCertify = false;

    CLI::App* run = app.add_subcommand("run", "evaluate a program / query");
    addCommon(run, runArgs);
    run->add_flag("--certify", runCertify, "record per-iteration identity checks");

    CLI::App* certify = app.add_subcommand("certify", "runtime-certify the pushed aggregates");
    addCommon(certify, certifyArgs, false);

    CLI::App* explain = app.add_subcommand("explain", "analysis report (JSON)");
    addCommon(explain, explainArgs, false);

    CLI::App* bench = app.add_subcommand("bench", "compare stratified vs pushed evaluation");
    addCommon(bench, benchArgs, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmdRun(runArgs, runCertify);
        if (certify->parsed()) return cmdCertify(certifyArgs);
        if (explain->parsed()) return cmdExplain(explainArgs);
        if (bench->parsed()) return cmdBench(benchArgs);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOther;
}
