// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/merkle.hpp>

namespace dogebridge {

Hash merkle_leaf_hash(ByteSpan leaf)
{
    Bytes buf;
    buf.reserve(leaf.size() + 1);
    buf.push_back(0x00);
    buf.insert(buf.end(), leaf.begin(), leaf.end());
    return sha256(buf);
}

Hash merkle_node_hash(const Hash& left, const Hash& right)
{
    std::array<std::uint8_t, 65> buf;
    buf[0] = 0x01;
    std::copy(left.bytes.begin(), left.bytes.end(), buf.begin() + 1);
    std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + 33);
    return sha256(buf);
}

Hash empty_tx_root()
{
    static const Hash root = [] {
        const std::uint8_t tag = 0x02;
        return sha256({&tag, 1});
    }();
    return root;
}

namespace {

std::vector<Hash> next_level(const std::vector<Hash>& level)
{
    std::vector<Hash> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
        up.push_back(merkle_node_hash(level[i], level[i + 1]));
    if (level.size() % 2 == 1) up.push_back(level.back());
    return up;
}

std::vector<Hash> hash_leaves(const std::vector<Bytes>& leaves)
{
    std::vector<Hash> level;
    level.reserve(leaves.size());
    for (const auto& leaf : leaves) level.push_back(merkle_leaf_hash(leaf));
    return level;
}

} // namespace

Hash merkle_root_of_hashes(std::vector<Hash> level)
{
    if (level.empty()) throw MerkleError(MerkleError::Kind::EmptyTree, "merkle tree needs at least one leaf");
    while (level.size() > 1) level = next_level(level);
    return level.front();
}

Hash merkle_root(const std::vector<Bytes>& leaves)
{
    if (leaves.empty()) throw MerkleError(MerkleError::Kind::EmptyTree, "merkle tree needs at least one leaf");
    return merkle_root_of_hashes(hash_leaves(leaves));
}

MerkleProof merkle_prove_hashes(std::vector<Hash> level, std::uint64_t index)
{
    if (index >= level.size()) throw MerkleError(MerkleError::Kind::IndexOutOfRange, "merkle leaf index out of range");
    MerkleProof proof;
    proof.leaf_index = index;
    proof.leaf_count = level.size();
    std::uint64_t pos = index;
    while (level.size() > 1) {
        bool promoted = pos + 1 == level.size() && level.size() % 2 == 1;
        if (!promoted) proof.siblings.push_back(level[pos ^ 1]);
        level = next_level(level);
        pos /= 2;
    }
    return proof;
}

MerkleProof merkle_prove(const std::vector<Bytes>& leaves, std::uint64_t index)
{
    if (index >= leaves.size()) throw MerkleError(MerkleError::Kind::IndexOutOfRange, "merkle leaf index out of range");
    return merkle_prove_hashes(hash_leaves(leaves), index);
}

std::uint64_t merkle_path_length(std::uint64_t index, std::uint64_t count)
{
    std::uint64_t n = 0;
    while (count > 1) {
        if (!(index + 1 == count && count % 2 == 1)) ++n;
        index /= 2;
        count = (count + 1) / 2;
    }
    return n;
}

bool merkle_verify_hash(const Hash& root, const Hash& leaf_hash, const MerkleProof& proof)
{
    if (proof.leaf_count == 0 || proof.leaf_index >= proof.leaf_count) return false;
    Hash acc = leaf_hash;
    std::uint64_t pos = proof.leaf_index;
    std::uint64_t width = proof.leaf_count;
    std::size_t used = 0;
    while (width > 1) {
        bool promoted = pos + 1 == width && width % 2 == 1;
        if (!promoted) {
            if (used >= proof.siblings.size()) return false;
            const Hash& sib = proof.siblings[used++];
            acc = (pos % 2 == 0) ? merkle_node_hash(acc, sib) : merkle_node_hash(sib, acc);
        }
        pos /= 2;
        width = (width + 1) / 2;
    }
    return used == proof.siblings.size() && acc == root;
}

bool merkle_verify(const Hash& root, ByteSpan leaf, const MerkleProof& proof)
{
    return merkle_verify_hash(root, merkle_leaf_hash(leaf), proof);
}

} // namespace dogebridge
