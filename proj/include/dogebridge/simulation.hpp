// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/agents.hpp>
#include <dogebridge/chain.hpp>
#include <dogebridge/clock.hpp>
#include <dogebridge/params.hpp>
#include <dogebridge/trace.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dogebridge {

struct AgentConfig {
    std::string name;
    std::vector<std::string> policies;
    std::vector<nlohmann::json> params; // one object per policy
    Eth eth;
    Doge doge;
    SimTime visibility_delay = 0;
    std::vector<std::pair<SimTime, SimTime>> offline; // [from, to)
};

struct EndCondition {
    SimTime sim_time = 6 * 3600;
    std::uint64_t max_events = 2'000'000;
};

/** A validated scenario. See docs/config.md for the JSON schema. */
struct ScenarioConfig {
    std::string name;
    std::string description;
    std::vector<std::string> tags;
    std::uint64_t seed = 1;
    ClockParams clock;
    SimTime phase_jitter = 0;
    ChainParams chain;
    unsigned target_bits = 248;
    ProtocolParams params;
    CostModel cost;
    RatePath rates;
    EndCondition end;
    std::vector<AgentConfig> agents;

    bool has_tag(const std::string& t) const;
};

Result<ScenarioConfig, ConfigError> load_scenario(const nlohmann::json& doc);
Result<ScenarioConfig, ConfigError> load_scenario_file(const std::string& path);

struct RunResult {
    std::vector<std::string> lines;
    Hash digest;
    nlohmann::json summary;
};

RunResult run_scenario(const ScenarioConfig& config);

struct ReplayResult {
    bool identical = false;
    /// 0-based line index of the first difference, when not identical.
    std::optional<std::size_t> divergence;
    std::string detail;
};

/** Re-runs the config and compares the produced trace line by line. */
ReplayResult replay_check(const ScenarioConfig& config, const std::vector<std::string>& lines);

} // namespace dogebridge
