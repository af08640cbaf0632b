// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/simulation.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dogebridge {

using json = nlohmann::json;

bool ScenarioConfig::has_tag(const std::string& t) const
{
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

namespace {

constexpr std::uint64_t kSchemaVersion = 1;

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void read_params(ParamReader& r, ProtocolParams& p)
{
    p.c = r.u64("c", p.c);
    p.d = r.u64("d", p.d);
    p.k = r.u64("k", p.k);
    p.registration_void_fee_rate = r.ratio("registration_void_fee_rate", p.registration_void_fee_rate);
    p.registration_window_doge_blocks = r.u64("registration_window_doge_blocks", p.registration_window_doge_blocks);
    p.nonmax_penalty_rate = r.ratio("nonmax_penalty_rate", p.nonmax_penalty_rate);
    p.unlock_timeout_eth_blocks = r.u64("unlock_timeout_eth_blocks", p.unlock_timeout_eth_blocks);
    p.unlock_relay_allowance_eth_blocks =
        r.u64("unlock_relay_allowance_eth_blocks", p.unlock_relay_allowance_eth_blocks);
    p.proof_timeout_base_seconds = r.u64("proof_timeout_base_seconds", p.proof_timeout_base_seconds);
    p.proof_timeout_per_block_seconds = r.u64("proof_timeout_per_block_seconds", p.proof_timeout_per_block_seconds);
    p.max_extension_len = r.u64("max_extension_len", p.max_extension_len);
    p.challenge_reward_rate = r.ratio("challenge_reward_rate", p.challenge_reward_rate);
    p.deep_backtrack_delay_1 = r.u64("deep_backtrack_delay_1", p.deep_backtrack_delay_1);
    p.deep_backtrack_delay_2 = r.u64("deep_backtrack_delay_2", p.deep_backtrack_delay_2);
    p.relayer_deposit_floor = r.eth("relayer_deposit_floor", p.relayer_deposit_floor);
    p.registration_dust = r.eth("registration_dust", p.registration_dust);
    p.relay_tax = r.wow("relay_tax", p.relay_tax);
    p.lock_bounty = r.wow("lock_bounty", p.lock_bounty);
}

void read_cost(ParamReader& r, CostModel& m)
{
    m.base_cost = r.i64("base_cost", m.base_cost);
    m.per_block_cost = r.i64("per_block_cost", m.per_block_cost);
    m.latency_per_block = r.u64("latency_per_block", m.latency_per_block);
    m.eth_per_cost_unit = r.i64("eth_per_cost_unit", m.eth_per_cost_unit);
    if (!m.valid()) r.error(r.path("base_cost"), "cost figures must be non-negative");
}

Status<ConfigError> read_rates(const json& doc, ScenarioConfig& cfg)
{
    std::vector<RatePoint> points;
    auto it = doc.find("rates");
    if (it == doc.end()) return fail(ConfigError{"$.rates", "required"});
    if (!it->is_array()) return fail(ConfigError{"$.rates", "expected an array of {t, rate}"});
    for (std::size_t i = 0; i < it->size(); ++i) {
        std::string path = at("$.rates", i);
        ParamReader r((*it)[i], path);
        auto t = r.opt_time("t");
        auto rate = r.opt_rate("rate");
        if (auto done = r.finish(); !done) return done;
        if (!rate) return fail(ConfigError{path + ".rate", "required"});
        points.push_back(RatePoint{t.value_or(0), *rate});
    }
    auto path = RatePath::make(std::move(points));
    if (!path) return fail(ConfigError{"$.rates", to_string(path.error())});
    if (path->points().front().t != 0) return fail(ConfigError{"$.rates[0].t", "the path must start at t = 0"});
    cfg.rates = std::move(path).value();
    return Unit{};
}

Status<ConfigError> read_agent(const json& j, const std::string& path, AgentConfig& a)
{
    ParamReader r(j, path);
    a.name = r.str("name", "");
    a.eth = r.eth("eth", Eth{});
    a.doge = r.doge("doge", Doge{});
    a.visibility_delay = r.opt_time("visibility_delay").value_or(0);
    const json* policy = r.raw("policy");
    const json* params = r.raw("params");
    const json* offline = r.raw("offline");
    if (auto done = r.finish(); !done) return done;
    if (a.name.empty()) return fail(ConfigError{path + ".name", "required"});

    if (!policy) return fail(ConfigError{path + ".policy", "required"});
    if (policy->is_string()) {
        a.policies = {policy->get<std::string>()};
        a.params = {params ? *params : json::object()};
    } else if (policy->is_array() && !policy->empty()) {
        for (const auto& p : *policy) {
            if (!p.is_string()) return fail(ConfigError{path + ".policy", "expected policy names"});
            a.policies.push_back(p.get<std::string>());
        }
        // composite policies take their parameters keyed by policy name
        for (const auto& id : a.policies) {
            json sub = json::object();
            if (params && params->is_object() && params->contains(id)) sub = (*params)[id];
            a.params.push_back(sub);
        }
        if (params) {
            if (!params->is_object()) return fail(ConfigError{path + ".params", "expected an object"});
            for (auto it = params->begin(); it != params->end(); ++it)
                if (std::find(a.policies.begin(), a.policies.end(), it.key()) == a.policies.end())
                    return fail(ConfigError{path + ".params." + it.key(), "not one of the agent's policies"});
        }
    } else {
        return fail(ConfigError{path + ".policy", "expected a policy name or a non-empty list of names"});
    }
    const auto& known = policy_ids();
    for (const auto& id : a.policies)
        if (std::find(known.begin(), known.end(), id) == known.end())
            return fail(ConfigError{path + ".policy", "unknown policy \"" + id + "\""});

    if (offline) {
        if (!offline->is_array()) return fail(ConfigError{path + ".offline", "expected [[from, to], ...]"});
        for (std::size_t i = 0; i < offline->size(); ++i) {
            const json& w = (*offline)[i];
            if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer() ||
                w[0].get<std::int64_t>() < 0 ||
                w[0].get<SimTime>() >= w[1].get<SimTime>())
                return fail(ConfigError{at(path + ".offline", i), "expected [from, to] with from < to"});
            a.offline.emplace_back(w[0].get<SimTime>(), w[1].get<SimTime>());
        }
    }
    return Unit{};
}

} // namespace

Result<ScenarioConfig, ConfigError> load_scenario(const json& doc)
{
    if (!doc.is_object()) return fail(ConfigError{"$", "expected a JSON object"});
    ScenarioConfig cfg;
    ParamReader top(doc, "$");
    std::uint64_t version = top.u64("version", 0);
    cfg.name = top.str("name", "");
    cfg.description = top.str("description", "");
    cfg.seed = top.u64("seed", 1);
    const json* tags = top.raw("tags");
    const json* clock = top.raw("clock");
    const json* chain = top.raw("chain");
    const json* params = top.raw("params");
    const json* cost = top.raw("cost");
    const json* end = top.raw("end");
    const json* agents = top.raw("agents");
    top.raw("rates");
    if (auto done = top.finish(); !done) return fail(done.error());
    if (version != kSchemaVersion) return fail(ConfigError{"$.version", "expected 1"});
    if (cfg.name.empty()) return fail(ConfigError{"$.name", "required"});

    if (tags) {
        if (!tags->is_array()) return fail(ConfigError{"$.tags", "expected an array of strings"});
        for (const auto& t : *tags) {
            if (!t.is_string()) return fail(ConfigError{"$.tags", "expected an array of strings"});
            cfg.tags.push_back(t.get<std::string>());
        }
    }

    static const json empty = json::object();
    {
        ParamReader r(clock ? *clock : empty, "$.clock");
        cfg.clock.eth_block_seconds = r.u64("eth_block_seconds", cfg.clock.eth_block_seconds);
        cfg.clock.doge_block_seconds = r.u64("doge_block_seconds", cfg.clock.doge_block_seconds);
        std::string ia = r.str("interarrival", "deterministic");
        cfg.phase_jitter = r.u64("phase_jitter", 0);
        if (auto done = r.finish(); !done) return fail(done.error());
        if (ia == "deterministic")
            cfg.clock.doge_interarrival = Interarrival::Deterministic;
        else if (ia == "exponential")
            cfg.clock.doge_interarrival = Interarrival::SeededExponential;
        else
            return fail(ConfigError{"$.clock.interarrival", "expected \"deterministic\" or \"exponential\""});
        if (!cfg.clock.valid()) return fail(ConfigError{"$.clock", "block intervals must be positive"});
    }
    {
        ParamReader r(chain ? *chain : empty, "$.chain");
        cfg.target_bits = static_cast<unsigned>(r.u64("target_bits", 248));
        std::string pow = r.str("pow", "sha256d");
        cfg.chain.pow.scrypt_n = static_cast<std::uint32_t>(r.u64("scrypt_n", 1024));
        if (auto done = r.finish(); !done) return fail(done.error());
        if (cfg.target_bits == 0 || cfg.target_bits > 256)
            return fail(ConfigError{"$.chain.target_bits", "must lie in 1..256"});
        cfg.chain.target = target_from_bits(cfg.target_bits);
        if (pow == "sha256d")
            cfg.chain.pow.algorithm = PowAlgorithm::Sha256d;
        else if (pow == "scrypt")
            cfg.chain.pow.algorithm = PowAlgorithm::Scrypt;
        else
            return fail(ConfigError{"$.chain.pow", "expected \"sha256d\" or \"scrypt\""});
        std::uint32_t n = cfg.chain.pow.scrypt_n;
        if (n < 2 || n > 1024 || (n & (n - 1)) != 0)
            return fail(ConfigError{"$.chain.scrypt_n", "must be a power of two in 2..1024"});
    }
    {
        ParamReader r(params ? *params : empty, "$.params");
        read_params(r, cfg.params);
        if (auto done = r.finish(); !done) return fail(done.error());
        if (auto v = validate(cfg.params); !v)
            return fail(ConfigError{"$.params." + v.error().field, v.error().reason});
    }
    {
        ParamReader r(cost ? *cost : empty, "$.cost");
        read_cost(r, cfg.cost);
        if (auto done = r.finish(); !done) return fail(done.error());
    }
    {
        ParamReader r(end ? *end : empty, "$.end");
        cfg.end.sim_time = r.u64("sim_time", cfg.end.sim_time);
        cfg.end.max_events = r.u64("max_events", cfg.end.max_events);
        if (auto done = r.finish(); !done) return fail(done.error());
    }
    if (auto rates = read_rates(doc, cfg); !rates) return fail(rates.error());

    if (!agents || !agents->is_array() || agents->empty())
        return fail(ConfigError{"$.agents", "expected a non-empty array"});
    std::set<std::string> names;
    for (std::size_t i = 0; i < agents->size(); ++i) {
        AgentConfig a;
        if (auto ok = read_agent((*agents)[i], at("$.agents", i), a); !ok) return fail(ok.error());
        if (!names.insert(a.name).second) return fail(ConfigError{at("$.agents", i) + ".name", "duplicate name"});
        cfg.agents.push_back(std::move(a));
    }

    // Build every policy once so parameter errors surface with their paths now.
    Eth required = required_relayer_deposit(cfg.params, cfg.cost);
    for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
        const AgentConfig& a = cfg.agents[i];
        PolicyContext ctx{AgentIdentity::of(a.name), cfg.params, cfg.cost, cfg.chain, required};
        for (std::size_t j = 0; j < a.policies.size(); ++j) {
            std::string path = at("$.agents", i) + ".params";
            if (a.policies.size() > 1) path += "." + a.policies[j];
            auto p = make_policy(a.policies[j], ctx, a.params[j], path);
            if (!p) return fail(p.error());
        }
    }
    return cfg;
}

Result<ScenarioConfig, ConfigError> load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) return fail(ConfigError{path, "cannot open file"});
    std::stringstream ss;
    ss << in.rdbuf();
    json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) return fail(ConfigError{path, "invalid JSON"});
    return load_scenario(doc);
}

} // namespace dogebridge
