// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/amount.hpp>
#include <dogebridge/clock.hpp>
#include <dogebridge/result.hpp>

#include <cstdint>
#include <string>

namespace dogebridge {

/** Abstract price of checking an extension proof. */
struct CostModel {
    std::int64_t base_cost = 100;
    std::int64_t per_block_cost = 1;
    std::uint64_t latency_per_block = 2; // seconds
    /// ETH smallest units charged per cost unit.
    std::int64_t eth_per_cost_unit = 10;

    bool valid() const { return base_cost >= 0 && per_block_cost >= 0 && eth_per_cost_unit >= 0; }
};

struct ProtocolParams {
    std::uint64_t c = 10;
    std::uint64_t d = 20;
    std::uint64_t k = 2;

    Ratio registration_void_fee_rate = Ratio::of(1, 100);
    std::uint64_t registration_window_doge_blocks = 20;
    Ratio nonmax_penalty_rate = Ratio::of(1, 10);
    std::uint64_t unlock_timeout_eth_blocks = 20;
    /// Extra Ethereum blocks for the payment to be mined, confirmed and
    /// relayed before the unlock timeout starts counting. 0 = derive.
    std::uint64_t unlock_relay_allowance_eth_blocks = 0;

    std::uint64_t proof_timeout_base_seconds = 600;
    std::uint64_t proof_timeout_per_block_seconds = 2;
    std::uint64_t max_extension_len = 10000;
    Ratio challenge_reward_rate = Ratio::of(1, 100);

    SimTime deep_backtrack_delay_1 = 24 * 3600;
    SimTime deep_backtrack_delay_2 = 72 * 3600;

    Eth relayer_deposit_floor = Eth{50'000}; // 0.05 ETH
    Eth registration_dust = Eth{10'000};
    Wow relay_tax = Wow{0};
    Wow lock_bounty = Wow{0};

    bool operator==(const ProtocolParams&) const = default;
};

struct ParamsError {
    std::string field;
    std::string reason;
};

Status<ParamsError> validate(const ProtocolParams& p);

/** base + per_block * (num_blocks + c), in cost units. */
std::int64_t verification_cost(const CostModel& m, std::uint64_t num_blocks, std::uint64_t c);
Eth verification_cost_eth(const CostModel& m, std::uint64_t num_blocks, std::uint64_t c);

/** max(deposit floor, ETH cost of verifying a maximal extension). */
Eth required_relayer_deposit(const ProtocolParams& p, const CostModel& m);

Eth registration_void_fee(const ProtocolParams& p, Eth collateral);
Eth nonmax_penalty(const ProtocolParams& p, Eth deposit);
Eth challenge_reward(const ProtocolParams& p, Eth cost);

std::uint64_t unlock_deadline_eth_blocks(const ProtocolParams& p, const ClockParams& clock);
SimTime proof_deadline_seconds(const ProtocolParams& p, std::uint64_t extension_len);

} // namespace dogebridge
