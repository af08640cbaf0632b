// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/audit.hpp>
#include <dogebridge/simulation.hpp>
#include <dogebridge/trace.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dogebridge;
using json = nlohmann::json;

namespace {

constexpr int kClean = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;

std::optional<ScenarioConfig> load_or_report(const std::string& path)
{
    auto cfg = load_scenario_file(path);
    if (!cfg) {
        std::cerr << "config error at " << cfg.error().path << ": " << cfg.error().message << "\n";
        return std::nullopt;
    }
    return std::move(cfg).value();
}

std::optional<std::vector<std::string>> read_lines(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return split_trace(ss.str());
}

void print_audit(const AuditReport& r)
{
    for (const auto& v : r.violations) std::cout << "violation seq=" << v.seq << " " << v.check << ": " << v.detail << "\n";
    for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "audit: " << r.violations.size() << " violation(s), " << r.stats.value("events", 0)
              << " event(s), " << r.stats.value("identity_checks", 0) << " identity check(s)\n";
}

std::vector<fs::path> scenario_files(const std::string& dir)
{
    std::vector<fs::path> out;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out, bool quiet)
{
    auto cfg = load_or_report(config);
    if (!cfg) return kUsage;
    if (seed) cfg->seed = *seed;
    RunResult r = run_scenario(*cfg);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return kUsage;
        }
        f << join_trace(r.lines);
    }
    AuditReport audit = audit_events(*parse_trace(r.lines));
    if (!quiet) std::cout << r.summary.dump(2) << "\n";
    print_audit(audit);
    return audit.clean() ? kClean : kViolations;
}

int cmd_audit(const std::string& trace, bool as_json)
{
    auto lines = read_lines(trace);
    if (!lines) return kUsage;
    auto r = audit_trace(*lines);
    if (!r) {
        std::cerr << "ParseError at line " << r.error().line << ": " << r.error().message << "\n";
        return kUsage;
    }
    if (as_json)
        std::cout << r->to_json().dump(2) << "\n";
    else
        print_audit(*r);
    return r->clean() ? kClean : kViolations;
}

int cmd_replay(const std::string& config, const std::string& trace, std::optional<std::uint64_t> seed)
{
    auto cfg = load_or_report(config);
    if (!cfg) return kUsage;
    if (seed) cfg->seed = *seed;
    auto lines = read_lines(trace);
    if (!lines) return kUsage;
    ReplayResult r = replay_check(*cfg, *lines);
    if (r.identical) {
        std::cout << "replay: identical (" << lines->size() << " events)\n";
        return kClean;
    }
    std::cout << "replay: diverged at event " << *r.divergence << " (" << r.detail << ")\n";
    return kViolations;
}

int cmd_list(const std::string& dir)
{
    auto files = scenario_files(dir);
    if (files.empty()) {
        std::cerr << "no scenarios in " << dir << "\n";
        return kUsage;
    }
    for (const auto& f : files) {
        auto cfg = load_scenario_file(f.string());
        if (!cfg) {
            std::cout << f.filename().string() << "  INVALID " << cfg.error().path << ": " << cfg.error().message
                      << "\n";
            continue;
        }
        std::string tags;
        for (const auto& t : cfg->tags) tags += (tags.empty() ? "" : ",") + t;
        std::cout << f.filename().string() << "  " << cfg->name << "  [" << tags << "]\n";
    }
    return kClean;
}

int cmd_run_all(const std::string& dir)
{
    auto files = scenario_files(dir);
    if (files.empty()) {
        std::cerr << "no scenarios in " << dir << "\n";
        return kUsage;
    }
    int status = kClean;
    for (const auto& f : files) {
        auto cfg = load_scenario_file(f.string());
        if (!cfg) {
            std::cout << f.filename().string() << ": config error at " << cfg.error().path << ": "
                      << cfg.error().message << "\n";
            status = kUsage;
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        RunResult r = run_scenario(*cfg);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        AuditReport audit = audit_events(*parse_trace(r.lines));
        ReplayResult replay = replay_check(*cfg, r.lines);
        bool ok = audit.clean() && replay.identical;
        if (!ok && status == kClean) status = kViolations;
        std::cout << (ok ? "ok   " : "FAIL ") << f.filename().string() << "  events=" << r.lines.size()
                  << " violations=" << audit.violations.size() << " replay=" << (replay.identical ? "same" : "diff")
                  << " digest=" << r.digest.hex().substr(0, 16) << " time=" << secs << "s\n";
        for (const auto& v : audit.violations)
            std::cout << "     seq=" << v.seq << " " << v.check << ": " << v.detail << "\n";
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic simulator and auditor for a collateralized DOGE/ETH peg"};
    app.require_subcommand(1);

    std::string config, trace, out, dir = DOGEBRIDGE_SCENARIO_DIR;
    std::optional<std::uint64_t> seed;
    bool quiet = false, as_json = false;

    auto* run = app.add_subcommand("run", "Run a scenario, audit it, print the summary");
    run->add_option("config", config, "Scenario JSON")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out, "Write the NDJSON trace here");
    run->add_flag("--quiet", quiet, "Print only the audit result");

    auto* audit = app.add_subcommand("audit", "Audit a trace file");
    audit->add_option("trace", trace, "NDJSON trace")->required();
    audit->add_flag("--json", as_json, "Print the report as JSON");

    auto* replay = app.add_subcommand("replay", "Re-run a config and compare against a trace");
    replay->add_option("config", config, "Scenario JSON")->required();
    replay->add_option("trace", trace, "NDJSON trace")->required();
    replay->add_option("--seed", seed, "Override the scenario seed");

    auto* scenarios = app.add_subcommand("scenarios", "Bundled scenario corpus");
    scenarios->require_subcommand(1);
    scenarios->add_option("--dir", dir, "Scenario directory");
    auto* list = scenarios->add_subcommand("list", "List scenarios");
    auto* run_all = scenarios->add_subcommand("run-all", "Run, audit and replay every scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kClean : kUsage;
    }

    try {
        if (*run) return cmd_run(config, seed, out, quiet);
        if (*audit) return cmd_audit(trace, as_json);
        if (*replay) return cmd_replay(config, trace, seed);
        if (*list) return cmd_list(dir);
        if (*run_all) return cmd_run_all(dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
