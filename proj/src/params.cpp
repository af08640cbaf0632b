// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/params.hpp>

#include <algorithm>

namespace dogebridge {

namespace {

bool unit_interval(const Ratio& r) { return r.num > 0 && r.den > 0 && r.num <= r.den; }

} // namespace

Status<ParamsError> validate(const ProtocolParams& p)
{
    auto bad = [](const char* f, const char* r) { return fail(ParamsError{f, r}); };
    if (p.d == 0) return bad("d", "must be positive");
    if (p.k == 0 || p.k >= p.d) return bad("k", "requires 0 < k < d");
    if (p.c < 1) return bad("c", "must be at least 1");
    if (!unit_interval(p.registration_void_fee_rate)) return bad("registration_void_fee_rate", "must lie in (0,1]");
    if (!unit_interval(p.nonmax_penalty_rate)) return bad("nonmax_penalty_rate", "must lie in (0,1]");
    if (!unit_interval(p.challenge_reward_rate)) return bad("challenge_reward_rate", "must lie in (0,1]");
    if (p.max_extension_len < p.d) return bad("max_extension_len", "must be at least d");
    if (p.registration_window_doge_blocks == 0) return bad("registration_window_doge_blocks", "must be positive");
    if (p.unlock_timeout_eth_blocks == 0) return bad("unlock_timeout_eth_blocks", "must be positive");
    if (p.deep_backtrack_delay_1 == 0 || p.deep_backtrack_delay_2 < p.deep_backtrack_delay_1)
        return bad("deep_backtrack_delay_2", "requires 0 < delay_1 <= delay_2");
    if (p.relayer_deposit_floor.units < 0) return bad("relayer_deposit_floor", "must be non-negative");
    if (p.registration_dust.units < 0) return bad("registration_dust", "must be non-negative");
    if (p.relay_tax.units < 0) return bad("relay_tax", "must be non-negative");
    if (p.lock_bounty.units < 0) return bad("lock_bounty", "must be non-negative");
    return Unit{};
}

std::int64_t verification_cost(const CostModel& m, std::uint64_t num_blocks, std::uint64_t c)
{
    return m.base_cost + m.per_block_cost * static_cast<std::int64_t>(num_blocks + c);
}

Eth verification_cost_eth(const CostModel& m, std::uint64_t num_blocks, std::uint64_t c)
{
    return Eth{verification_cost(m, num_blocks, c) * m.eth_per_cost_unit};
}

Eth required_relayer_deposit(const ProtocolParams& p, const CostModel& m)
{
    return std::max(p.relayer_deposit_floor, verification_cost_eth(m, p.max_extension_len, p.c));
}

Eth registration_void_fee(const ProtocolParams& p, Eth collateral)
{
    return Eth{p.registration_void_fee_rate.floor_mul(collateral.units)};
}

Eth nonmax_penalty(const ProtocolParams& p, Eth deposit) { return Eth{p.nonmax_penalty_rate.floor_mul(deposit.units)}; }

Eth challenge_reward(const ProtocolParams& p, Eth cost) { return Eth{p.challenge_reward_rate.floor_mul(cost.units)}; }

std::uint64_t unlock_deadline_eth_blocks(const ProtocolParams& p, const ClockParams& clock)
{
    std::uint64_t allowance = p.unlock_relay_allowance_eth_blocks;
    if (allowance == 0)
        allowance = 2 * challenge_window_eth_blocks(p.d, p.k, clock) + doge_blocks_as_eth_blocks(p.c + p.d, clock);
    return p.unlock_timeout_eth_blocks + allowance;
}

SimTime proof_deadline_seconds(const ProtocolParams& p, std::uint64_t extension_len)
{
    return p.proof_timeout_base_seconds + p.proof_timeout_per_block_seconds * (extension_len + p.c);
}

} // namespace dogebridge
