// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/clock.hpp>

#include <cmath>

namespace dogebridge {

std::uint64_t challenge_window_eth_blocks(std::uint64_t d, std::uint64_t k, const ClockParams& p)
{
    std::uint64_t span = (d - k) * p.doge_block_seconds;
    return (span + p.eth_block_seconds - 1) / p.eth_block_seconds;
}

std::uint64_t doge_blocks_as_eth_blocks(std::uint64_t n, const ClockParams& p)
{
    std::uint64_t span = n * p.doge_block_seconds;
    return (span + p.eth_block_seconds - 1) / p.eth_block_seconds;
}

std::uint64_t exponential_seconds(std::mt19937_64& rng, std::uint64_t mean)
{
    // 53 random bits -> u in [0, 1); inverse CDF of Exp(1/mean).
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double x = -static_cast<double>(mean) * std::log1p(-u);
    auto r = static_cast<std::uint64_t>(std::llround(x));
    return r < 1 ? 1 : r;
}

SimTime next_doge_block_time(SimTime prev, const ClockParams& p, std::mt19937_64& rng)
{
    if (p.doge_interarrival == Interarrival::Deterministic) return prev + p.doge_block_seconds;
    return prev + exponential_seconds(rng, p.doge_block_seconds);
}

} // namespace dogebridge
