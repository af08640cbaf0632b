// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/chain.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace dogebridge {

namespace mp = boost::multiprecision;

namespace {

mp::uint512_t to_big(const Hash& h)
{
    mp::uint512_t v = 0;
    for (auto b : h.bytes) v = (v << 8) | b;
    return v;
}

} // namespace

Target target_from_bits(unsigned bits)
{
    Target t;
    if (bits >= 256) {
        t.bytes.fill(0xff);
        return t;
    }
    // Byte 0 is most significant.
    t.bytes[31 - bits / 8] = static_cast<std::uint8_t>(1u << (bits % 8));
    return t;
}

std::string target_to_string(const Target& t) { return t.hex(); }

Hash PowFunction::operator()(ByteSpan header_encoding) const
{
    if (algorithm == PowAlgorithm::Sha256d) return sha256d(header_encoding);
    if (scrypt_n < 2 || scrypt_n > 1024 || (scrypt_n & (scrypt_n - 1)) != 0)
        throw std::invalid_argument("scrypt N must be a power of two in [2, 1024]");
    Hash out;
    int rc = EVP_PBE_scrypt(reinterpret_cast<const char*>(header_encoding.data()), header_encoding.size(),
                            header_encoding.data(), header_encoding.size(), scrypt_n, 1, 1, 0, out.bytes.data(),
                            out.bytes.size());
    if (rc != 1) throw std::runtime_error("scrypt evaluation failed");
    return out;
}

Bytes Transaction::encode() const
{
    ByteWriter w;
    w.prefixed(sender.bytes);
    w.prefixed(receiver.bytes);
    w.i64(amount.units);
    w.u64(nonce);
    w.prefixed(memo.bytes);
    return w.take();
}

Hash Transaction::id() const { return sha256(encode()); }

Bytes BlockHeader::encode() const
{
    ByteWriter w;
    w.hash(parent);
    w.hash(tx_root);
    w.u64(ordinal);
    w.u64(timestamp);
    w.u64(nonce);
    w.hash(target);
    return w.take();
}

std::optional<BlockHeader> BlockHeader::decode(ByteSpan data)
{
    if (data.size() != 120) return std::nullopt;
    auto hash_at = [&](std::size_t off) {
        Hash h;
        std::copy_n(data.begin() + off, 32, h.bytes.begin());
        return h;
    };
    auto u64_at = [&](std::size_t off) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | data[off + i];
        return v;
    };
    BlockHeader h;
    h.parent = hash_at(0);
    h.tx_root = hash_at(32);
    h.ordinal = u64_at(64);
    h.timestamp = u64_at(72);
    h.nonce = u64_at(80);
    h.target = hash_at(88);
    return h;
}

Hash BlockHeader::hash() const { return sha256d(encode()); }

std::vector<Bytes> encode_txs(const std::vector<Transaction>& txs)
{
    std::vector<Bytes> out;
    out.reserve(txs.size());
    for (const auto& tx : txs) out.push_back(tx.encode());
    return out;
}

Hash compute_tx_root(const std::vector<Transaction>& txs)
{
    if (txs.empty()) return empty_tx_root();
    return merkle_root(encode_txs(txs));
}

bool pow_check(const BlockHeader& header, const PowFunction& pow)
{
    return pow(header.encode()) < header.target;
}

ChainWork ChainWork::of_target(const Target& t)
{
    mp::uint512_t one = 1;
    mp::uint512_t work = (one << 256) / (to_big(t) + 1);
    ChainWork cw;
    for (auto& limb : cw.limbs) {
        limb = static_cast<std::uint64_t>(work & 0xffffffffffffffffULL);
        work >>= 64;
    }
    return cw;
}

ChainWork ChainWork::operator+(const ChainWork& o) const
{
    ChainWork r;
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < limbs.size(); ++i) {
        unsigned __int128 s = static_cast<unsigned __int128>(limbs[i]) + o.limbs[i] + carry;
        r.limbs[i] = static_cast<std::uint64_t>(s);
        carry = s >> 64;
    }
    return r;
}

std::strong_ordering ChainWork::operator<=>(const ChainWork& o) const
{
    for (std::size_t i = limbs.size(); i-- > 0;) {
        if (limbs[i] != o.limbs[i]) return limbs[i] <=> o.limbs[i];
    }
    return std::strong_ordering::equal;
}

std::string ChainWork::hex() const
{
    ByteWriter w;
    for (std::size_t i = limbs.size(); i-- > 0;) w.u64(limbs[i]);
    std::string s = to_hex(w.bytes());
    auto nz = s.find_first_not_of('0');
    return nz == std::string::npos ? "0" : s.substr(nz);
}

const char* to_string(ChainError e)
{
    switch (e) {
    case ChainError::UnknownParent: return "UnknownParent";
    case ChainError::BadPoW: return "BadPoW";
    case ChainError::BadOrdinal: return "BadOrdinal";
    case ChainError::BadTxRoot: return "BadTxRoot";
    case ChainError::BadTarget: return "BadTarget";
    case ChainError::RangeUnavailable: return "RangeUnavailable";
    }
    return "?";
}

MinedHeader search_nonce(BlockHeader header, const PowFunction& pow, std::uint64_t nonce_start)
{
    if (header.target.is_zero()) throw std::invalid_argument("cannot mine against a zero target");
    std::uint64_t attempts = 0;
    header.nonce = nonce_start;
    while (true) {
        ++attempts;
        if (pow_check(header, pow)) return {header.nonce, attempts};
        ++header.nonce;
    }
}

// ---------------------------------------------------------------------------

Block ChainView::make_genesis(const ChainParams& params, std::vector<Transaction> allocations,
                              std::uint64_t timestamp)
{
    Block g;
    g.txs = std::move(allocations);
    g.header.tx_root = compute_tx_root(g.txs);
    g.header.ordinal = 0;
    g.header.timestamp = timestamp;
    g.header.target = params.target;
    g.header.nonce = search_nonce(g.header, params.pow, 0).nonce;
    return g;
}

ChainView::ChainView(ChainParams params, Block genesis, std::uint64_t arrival) : params_(std::move(params))
{
    if (genesis.header.ordinal != 0 || !genesis.header.parent.is_zero())
        throw std::invalid_argument("genesis must have ordinal 0 and a zero parent");
    genesis_ = genesis.hash();
    Entry e;
    e.work = ChainWork::of_target(genesis.header.target);
    e.arrival = arrival;
    e.arrival_seq = next_seq_++;
    e.block = std::move(genesis);
    blocks_.emplace(genesis_, std::move(e));
    tips_.insert(genesis_);
    best_ = genesis_;
    best_path_ = {genesis_};
}

const ChainView::Entry* ChainView::find(const Hash& h) const
{
    auto it = blocks_.find(h);
    return it == blocks_.end() ? nullptr : &it->second;
}

const ChainView::Entry& ChainView::at(const Hash& h) const
{
    auto it = blocks_.find(h);
    if (it == blocks_.end()) throw std::out_of_range("unknown block " + h.hex());
    return it->second;
}

Result<Block, ChainError> ChainView::mine_block(const Hash& parent, std::vector<Transaction> txs,
                                                std::uint64_t time, std::uint64_t nonce_start) const
{
    const Entry* p = find(parent);
    if (!p) return fail(ChainError::UnknownParent);
    Block b;
    b.txs = std::move(txs);
    b.header.parent = parent;
    b.header.tx_root = compute_tx_root(b.txs);
    b.header.ordinal = p->block.header.ordinal + 1;
    b.header.timestamp = time;
    b.header.target = params_.target;
    b.header.nonce = search_nonce(b.header, params_.pow, nonce_start).nonce;
    return b;
}

bool ChainView::better(const Hash& a, const Hash& b) const
{
    const Entry& ea = at(a);
    const Entry& eb = at(b);
    if (ea.work != eb.work) return ea.work > eb.work;
    if (ea.arrival != eb.arrival) return ea.arrival < eb.arrival;
    return a < b;
}

Result<AddOutcome, ChainError> ChainView::add_block(const Block& block, std::uint64_t arrival)
{
    Hash id = block.hash();
    if (contains(id)) return AddOutcome::Duplicate;
    auto pit = blocks_.find(block.header.parent);
    if (pit == blocks_.end()) return fail(ChainError::UnknownParent);
    if (block.header.target != params_.target) return fail(ChainError::BadTarget);
    if (!pow_check(block.header, params_.pow)) return fail(ChainError::BadPoW);
    if (block.header.ordinal != pit->second.block.header.ordinal + 1) return fail(ChainError::BadOrdinal);
    if (block.header.tx_root != compute_tx_root(block.txs)) return fail(ChainError::BadTxRoot);

    Entry e;
    e.block = block;
    e.work = pit->second.work + ChainWork::of_target(block.header.target);
    e.arrival = arrival;
    e.arrival_seq = next_seq_++;
    pit->second.children += 1;
    tips_.erase(block.header.parent);
    tips_.insert(id);
    blocks_.emplace(id, std::move(e));

    if (better(id, best_)) {
        best_ = id;
        refresh_best_path();
    }
    return AddOutcome::Accepted;
}

void ChainView::refresh_best_path()
{
    const Entry& tip = at(best_);
    std::uint64_t height = tip.block.header.ordinal;
    best_path_.resize(height + 1);
    Hash cur = best_;
    for (std::uint64_t o = height + 1; o-- > 0;) {
        if (best_path_[o] == cur && o != height) break;
        best_path_[o] = cur;
        cur = at(cur).block.header.parent;
    }
}

std::optional<Hash> ChainView::ancestor_at(const Hash& tip, std::uint64_t ordinal) const
{
    const Entry* e = find(tip);
    if (!e || e->block.header.ordinal < ordinal) return std::nullopt;
    if (tip == best_) return best_path_[ordinal];
    Hash cur = tip;
    while (true) {
        const Entry& ce = at(cur);
        std::uint64_t o = ce.block.header.ordinal;
        if (o == ordinal) return cur;
        // Rejoin the cached best path once the walk reaches it.
        if (o < best_path_.size() && best_path_[o] == cur) return best_path_[ordinal];
        cur = ce.block.header.parent;
    }
}

Result<std::vector<const Block*>, ChainError> ChainView::blocks_range(const Hash& tip, std::uint64_t from,
                                                                      std::uint64_t to) const
{
    const Entry* e = find(tip);
    if (!e || from > to || to > e->block.header.ordinal) return fail(ChainError::RangeUnavailable);
    auto top = ancestor_at(tip, to);
    if (!top) return fail(ChainError::RangeUnavailable);
    std::vector<const Block*> out(to - from + 1);
    Hash cur = *top;
    for (std::uint64_t i = out.size(); i-- > 0;) {
        const Entry& ce = at(cur);
        out[i] = &ce.block;
        cur = ce.block.header.parent;
    }
    return out;
}

Result<std::vector<BlockHeader>, ChainError> ChainView::headers_range(const Hash& tip, std::uint64_t from,
                                                                      std::uint64_t to) const
{
    auto blocks = blocks_range(tip, from, to);
    if (!blocks) return fail(blocks.error());
    std::vector<BlockHeader> out;
    out.reserve(blocks->size());
    for (const Block* b : *blocks) out.push_back(b->header);
    return out;
}

std::map<DogeAddress, std::int64_t> ChainView::balances(const Hash& tip) const
{
    std::map<DogeAddress, std::int64_t> bal;
    Hash cur = tip;
    while (true) {
        const Entry& e = at(cur);
        for (const auto& tx : e.block.txs) {
            if (!tx.sender.is_zero()) bal[tx.sender] -= tx.amount.units;
            bal[tx.receiver] += tx.amount.units;
        }
        if (e.block.header.ordinal == 0) break;
        cur = e.block.header.parent;
    }
    return bal;
}

Hash ChainView::best_tip_visible(std::uint64_t cutoff) const
{
    if (at(best_).arrival <= cutoff) return best_;
    Hash best = genesis_;
    for (const auto& [h, e] : blocks_) {
        if (e.arrival > cutoff) continue;
        if (better(h, best)) best = h;
    }
    return best;
}

} // namespace dogebridge
