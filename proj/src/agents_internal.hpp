// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/agents.hpp>

namespace dogebridge::detail {

using PolicyPtr = std::unique_ptr<Policy>;

PolicyPtr make_honest_relayer(const PolicyContext& ctx, ParamReader& r, bool lazy);
PolicyPtr make_orphan_attacker(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_high_range_attacker(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_dos_challenger(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_gap_exploiter(const PolicyContext& ctx, ParamReader& r);

PolicyPtr make_operator(const PolicyContext& ctx, ParamReader& r, bool rational);
PolicyPtr make_crosser(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_hodler(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_reporter(const PolicyContext& ctx, ParamReader& r);
PolicyPtr make_random_actor(const PolicyContext& ctx, ParamReader& r);

/** Headers mined on `parent` without transactions; the last `forged` ones fail PoW on purpose. */
std::vector<Block> mine_side_chain(const ChainView& view, const Hash& parent, std::size_t count, std::size_t forged,
                                   SimTime time, std::mt19937_64& rng);

} // namespace dogebridge::detail
