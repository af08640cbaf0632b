// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/hash.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dogebridge {

/**
 * Binary Merkle trees with domain-separated hashing:
 *   leaf node     = SHA256(0x00 || leaf bytes)
 *   internal node = SHA256(0x01 || left || right)
 * A node left without a partner on an odd-width level is promoted to the
 * next level unchanged (no duplication).
 */

class MerkleError : public std::runtime_error {
public:
    enum class Kind { EmptyTree, IndexOutOfRange };
    MerkleError(Kind kind, const char* what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct MerkleProof {
    std::uint64_t leaf_index = 0;
    std::uint64_t leaf_count = 1;
    /// Leaf-to-root. Levels where the path node is promoted contribute no sibling.
    std::vector<Hash> siblings;

    bool operator==(const MerkleProof&) const = default;
};

Hash merkle_leaf_hash(ByteSpan leaf);
Hash merkle_node_hash(const Hash& left, const Hash& right);

/// Throws MerkleError(EmptyTree) on an empty list.
Hash merkle_root(const std::vector<Bytes>& leaves);
Hash merkle_root_of_hashes(std::vector<Hash> level);

/// Throws MerkleError(IndexOutOfRange) unless index < leaves.size().
MerkleProof merkle_prove(const std::vector<Bytes>& leaves, std::uint64_t index);
MerkleProof merkle_prove_hashes(std::vector<Hash> level, std::uint64_t index);

/// Never throws; malformed proofs simply fail.
bool merkle_verify(const Hash& root, ByteSpan leaf, const MerkleProof& proof);
bool merkle_verify_hash(const Hash& root, const Hash& leaf_hash, const MerkleProof& proof);

/// Number of siblings a well-formed proof for (index, count) carries.
std::uint64_t merkle_path_length(std::uint64_t index, std::uint64_t count);

/// Root committed for an empty transaction list.
Hash empty_tx_root();

} // namespace dogebridge
