// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/chain.hpp>

#include <doctest.h>

#include <random>

using namespace dogebridge;

namespace {

ChainParams easy(unsigned bits = 250)
{
    ChainParams p;
    p.target = target_from_bits(bits);
    return p;
}

Transaction pay(const char* from, const char* to, std::int64_t units, std::uint64_t nonce = 0)
{
    Transaction tx;
    tx.sender = derive_address<DogeTagAddr>("doge", from);
    tx.receiver = derive_address<DogeTagAddr>("doge", to);
    tx.amount = Doge{units};
    tx.nonce = nonce;
    return tx;
}

} // namespace

TEST_CASE("header encoding is 120 bytes and roundtrips")
{
    BlockHeader h;
    h.parent.bytes.fill(0xab);
    h.tx_root.bytes[5] = 9;
    h.ordinal = 0x0102030405060708ULL;
    h.timestamp = 62;
    h.nonce = 77;
    h.target = target_from_bits(248);
    Bytes enc = h.encode();
    REQUIRE(enc.size() == 120);
    CHECK(enc[64] == 0x01);
    CHECK(enc[71] == 0x08);
    auto back = BlockHeader::decode(enc);
    REQUIRE(back);
    CHECK(*back == h);
    enc.push_back(0);
    CHECK_FALSE(BlockHeader::decode(enc));
    enc.resize(119);
    CHECK_FALSE(BlockHeader::decode(enc));
}

TEST_CASE("target from bits")
{
    Target t = target_from_bits(250);
    CHECK(t.bytes[0] == 0x04);
    for (int i = 1; i < 32; ++i) CHECK(t.bytes[i] == 0);
    CHECK(target_from_bits(0).bytes[31] == 1);
    CHECK(target_from_bits(256).bytes[0] == 0xff);
}

TEST_CASE("chain work of a target")
{
    // floor(2^256 / (2^250 + 1)) = 63
    ChainWork w = ChainWork::of_target(target_from_bits(250));
    CHECK(w.limbs[0] == 63);
    for (int i = 1; i < 8; ++i) CHECK(w.limbs[i] == 0);
    CHECK(ChainWork::of_target(target_from_bits(256)).limbs[0] == 1);
    CHECK((w + w).limbs[0] == 126);
    CHECK(w < w + w);
}

TEST_CASE("mining expected attempts at target 2^250 within 20% of 64")
{
    std::mt19937_64 rng(11);
    PowFunction pow;
    const int runs = 2000;
    double total = 0;
    for (int i = 0; i < runs; ++i) {
        BlockHeader h;
        for (auto& b : h.tx_root.bytes) b = static_cast<std::uint8_t>(rng());
        h.ordinal = static_cast<std::uint64_t>(i);
        h.target = target_from_bits(250);
        auto m = search_nonce(h, pow, 0);
        h.nonce = m.nonce;
        REQUIRE(pow_check(h, pow));
        total += static_cast<double>(m.attempts);
    }
    double mean = total / runs;
    MESSAGE("mean attempts " << mean);
    CHECK(mean > 64 * 0.8);
    CHECK(mean < 64 * 1.2);
}

TEST_CASE("scrypt proof of work mines and differs from sha256d")
{
    PowFunction sc{PowAlgorithm::Scrypt, 64};
    PowFunction sd;
    Bytes data(120, 3);
    CHECK(sc(data) != sd(data));
    CHECK(sc(data) == sc(data));
    ChainParams p = easy(252);
    p.pow = sc;
    Block g = ChainView::make_genesis(p, {});
    CHECK(pow_check(g.header, sc));
}

TEST_CASE("add_block validation")
{
    ChainParams p = easy();
    Block g = ChainView::make_genesis(p, {pay("", "alice", 500)});
    ChainView view(p, g);
    auto b1 = view.mine_block(g.hash(), {pay("alice", "bob", 100)}, 62, 0);
    REQUIRE(b1);

    SUBCASE("accept then duplicate")
    {
        CHECK(*view.add_block(*b1, 62) == AddOutcome::Accepted);
        CHECK(*view.add_block(*b1, 63) == AddOutcome::Duplicate);
        CHECK(view.best_tip() == b1->hash());
        auto bal = view.balances(b1->hash());
        CHECK(bal[pay("alice", "bob", 0).sender] == 400);
        CHECK(bal[pay("alice", "bob", 0).receiver] == 100);
    }
    SUBCASE("unknown parent")
    {
        Block b = *b1;
        b.header.parent.bytes[0] ^= 1;
        CHECK(view.add_block(b, 62).error() == ChainError::UnknownParent);
    }
    SUBCASE("bad tx root")
    {
        Block b = *b1;
        b.txs.push_back(pay("alice", "carol", 1));
        CHECK(view.add_block(b, 62).error() == ChainError::BadTxRoot);
    }
    SUBCASE("bad target")
    {
        Block b = *b1;
        b.header.target = target_from_bits(251);
        b.header.nonce = search_nonce(b.header, p.pow, 0).nonce;
        CHECK(view.add_block(b, 62).error() == ChainError::BadTarget);
    }
    SUBCASE("bad ordinal")
    {
        Block b = *b1;
        b.header.ordinal = 5;
        b.header.nonce = search_nonce(b.header, p.pow, 0).nonce;
        CHECK(view.add_block(b, 62).error() == ChainError::BadOrdinal);
    }
    SUBCASE("bad pow")
    {
        Block b = *b1;
        do {
            ++b.header.nonce;
        } while (pow_check(b.header, p.pow));
        CHECK(view.add_block(b, 62).error() == ChainError::BadPoW);
    }
}

TEST_CASE("fork choice prefers work, then arrival")
{
    ChainParams p = easy();
    Block g = ChainView::make_genesis(p, {});
    ChainView view(p, g);
    auto a1 = *view.mine_block(g.hash(), {}, 62, 0);
    auto b1 = *view.mine_block(g.hash(), {}, 63, 0);
    REQUIRE(a1.hash() != b1.hash());
    REQUIRE(view.add_block(a1, 62));
    REQUIRE(view.add_block(b1, 63));
    CHECK(view.best_tip() == a1.hash());
    CHECK(view.tips().size() == 2);

    auto b2 = *view.mine_block(b1.hash(), {}, 124, 0);
    REQUIRE(view.add_block(b2, 124));
    CHECK(view.best_tip() == b2.hash());
    CHECK(view.best_tip_visible(100) == a1.hash());
    CHECK(*view.ancestor_at(b2.hash(), 1) == b1.hash());
    auto hs = view.headers_range(b2.hash(), 1, 2);
    REQUIRE(hs);
    CHECK(hs->size() == 2);
    CHECK(view.headers_range(b2.hash(), 1, 3).error() == ChainError::RangeUnavailable);
}
