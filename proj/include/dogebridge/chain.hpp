// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/amount.hpp>
#include <dogebridge/hash.hpp>
#include <dogebridge/merkle.hpp>
#include <dogebridge/result.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dogebridge {

/**
 * Simulated Dogecoin-like chain.
 *
 * Byte layouts (all integers big-endian, fixed width):
 *
 *   Transaction : prefixed(sender 20B) prefixed(receiver 20B) i64 amount
 *                 u64 nonce prefixed(memo 20B)
 *   BlockHeader : parent 32B | tx_root 32B | u64 ordinal | u64 timestamp |
 *                 u64 nonce | target 32B                        (120 bytes)
 *
 * tx_id = SHA256(tx encoding); block id = SHA256d(header encoding).
 * See docs/encodings.md.
 */

using Target = Hash;

/** 2^bits, or the maximal target 2^256-1 when bits >= 256. */
Target target_from_bits(unsigned bits);
std::string target_to_string(const Target& t);

enum class PowAlgorithm { Sha256d, Scrypt };

/** Pluggable proof-of-work digest. Scrypt runs with r = 1, p = 1 and N <= 1024. */
struct PowFunction {
    PowAlgorithm algorithm = PowAlgorithm::Sha256d;
    std::uint32_t scrypt_n = 1024;

    Hash operator()(ByteSpan header_encoding) const;
    bool operator==(const PowFunction&) const = default;
};

struct Transaction {
    DogeAddress sender;
    DogeAddress receiver;
    Doge amount;
    std::uint64_t nonce = 0;
    /// OP_RETURN-style payload: the Ethereum address a crosser wants WOW minted to.
    EthAddress memo;

    Bytes encode() const;
    Hash id() const;
    bool operator==(const Transaction&) const = default;
};

struct BlockHeader {
    Hash parent;
    Hash tx_root;
    std::uint64_t ordinal = 0;
    std::uint64_t timestamp = 0;
    std::uint64_t nonce = 0;
    Target target;

    Bytes encode() const;
    static std::optional<BlockHeader> decode(ByteSpan data);
    Hash hash() const;
    bool operator==(const BlockHeader&) const = default;
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> txs;

    Hash hash() const { return header.hash(); }
};

Hash compute_tx_root(const std::vector<Transaction>& txs);
std::vector<Bytes> encode_txs(const std::vector<Transaction>& txs);

bool pow_check(const BlockHeader& header, const PowFunction& pow);

/** Expected hashes to find a block: floor(2^256 / (target + 1)). */
struct ChainWork {
    std::array<std::uint64_t, 8> limbs{}; // little-endian 64-bit limbs

    static ChainWork of_target(const Target& t);
    ChainWork operator+(const ChainWork& o) const;
    std::strong_ordering operator<=>(const ChainWork& o) const;
    bool operator==(const ChainWork& o) const = default;
    std::string hex() const;
};

struct ChainParams {
    Target target = target_from_bits(248);
    PowFunction pow;
};

enum class ChainError {
    UnknownParent,
    BadPoW,
    BadOrdinal,
    BadTxRoot,
    BadTarget,
    RangeUnavailable,
};

const char* to_string(ChainError e);

struct MinedHeader {
    std::uint64_t nonce;
    std::uint64_t attempts;
};

/** Searches nonces upward from nonce_start. Requires a non-zero target. */
MinedHeader search_nonce(BlockHeader header, const PowFunction& pow, std::uint64_t nonce_start);

enum class AddOutcome { Accepted, Duplicate };

/**
 * A node's view of the block tree. Owned by the simulation thread; copies
 * are independent snapshots.
 */
class ChainView {
public:
    struct Entry {
        Block block;
        ChainWork work;
        std::uint64_t arrival = 0;
        std::uint64_t arrival_seq = 0;
        std::uint32_t children = 0;
    };

    ChainView(ChainParams params, Block genesis, std::uint64_t arrival = 0);

    /// Mines a genesis block (ordinal 0, zero parent) holding the allocations.
    static Block make_genesis(const ChainParams& params, std::vector<Transaction> allocations,
                              std::uint64_t timestamp = 0);

    const ChainParams& params() const { return params_; }
    const Hash& genesis() const { return genesis_; }

    Result<Block, ChainError> mine_block(const Hash& parent, std::vector<Transaction> txs,
                                         std::uint64_t time, std::uint64_t nonce_start) const;
    Result<AddOutcome, ChainError> add_block(const Block& block, std::uint64_t arrival);

    const Hash& best_tip() const { return best_; }
    const std::set<Hash>& tips() const { return tips_; }
    bool contains(const Hash& h) const { return blocks_.count(h) != 0; }
    const Entry* find(const Hash& h) const;
    const Entry& at(const Hash& h) const;
    std::size_t size() const { return blocks_.size(); }
    const std::map<Hash, Entry>& entries() const { return blocks_; }

    /// Ancestor of tip (inclusive) with the given ordinal.
    std::optional<Hash> ancestor_at(const Hash& tip, std::uint64_t ordinal) const;
    Result<std::vector<BlockHeader>, ChainError> headers_range(const Hash& tip, std::uint64_t from,
                                                               std::uint64_t to) const;
    Result<std::vector<const Block*>, ChainError> blocks_range(const Hash& tip, std::uint64_t from,
                                                               std::uint64_t to) const;

    /// Net DOGE per address along the path genesis..tip.
    std::map<DogeAddress, std::int64_t> balances(const Hash& tip) const;

    /// Best tip among blocks that arrived at or before `cutoff`.
    Hash best_tip_visible(std::uint64_t cutoff) const;

    /// Fork-choice order: more work, then earlier arrival, then smaller hash.
    bool better(const Hash& a, const Hash& b) const;

private:
    void refresh_best_path();

    ChainParams params_;
    Hash genesis_;
    std::map<Hash, Entry> blocks_;
    std::set<Hash> tips_;
    Hash best_;
    std::vector<Hash> best_path_; // index = ordinal
    std::uint64_t next_seq_ = 0;
};

} // namespace dogebridge
