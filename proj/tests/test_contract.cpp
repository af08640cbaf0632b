// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/agents.hpp>
#include <dogebridge/contract.hpp>
#include <dogebridge/proof.hpp>

#include <doctest.h>

#include <map>
#include <optional>

using namespace dogebridge;

namespace {

constexpr std::int64_t kEth = kCoin;

struct Peg {
    ProtocolParams p;
    CostModel cost;
    ClockParams clock;
    ChainParams chain;
    std::optional<ChainView> view;
    std::optional<BridgeContract> k;
    SimTime now = 0;
    std::uint64_t nonce = 1;
    std::map<EthAddress, std::int64_t> paid;

    AgentIdentity op = AgentIdentity::of("op");
    AgentIdentity alice = AgentIdentity::of("alice");
    AgentIdentity hodler = AgentIdentity::of("hodler");
    AgentIdentity relay = AgentIdentity::of("relay");
    AgentIdentity rival = AgentIdentity::of("rival");
    DogeAddress head = head_address("op", 0);
    Rate y = *Rate::make(100, 1);

    explicit Peg(ProtocolParams params = {}) : p(params)
    {
        chain.target = target_from_bits(250);
        Transaction alloc;
        alloc.receiver = alice.doge;
        alloc.amount = Doge::coins(5000);
        view.emplace(chain, ChainView::make_genesis(chain, {alloc}));
        auto g = BridgeContract::genesis(p, cost, clock, chain);
        REQUIRE(g);
        k.emplace(std::move(g).value());
        REQUIRE(k->become_relayer(relay.eth, k->required_deposit(), now));
        REQUIRE(k->become_relayer(rival.eth, k->required_deposit(), now));
    }

    Hash tip() const { return view->best_tip(); }
    std::uint64_t height() const { return view->at(tip()).block.header.ordinal; }

    Transaction send(const DogeAddress& from, const DogeAddress& to, std::int64_t coins,
                     EthAddress memo = {})
    {
        Transaction tx;
        tx.sender = from;
        tx.receiver = to;
        tx.amount = Doge::coins(coins);
        tx.nonce = nonce++;
        tx.memo = memo;
        return tx;
    }

    void mine(std::vector<Transaction> txs = {})
    {
        auto b = view->mine_block(tip(), std::move(txs), (height() + 1) * 62, 0);
        REQUIRE(b);
        REQUIRE(view->add_block(*b, now));
    }
    void mine_n(int n)
    {
        for (int i = 0; i < n; ++i) mine();
    }

    void advance_eth(std::uint64_t blocks)
    {
        now += blocks * clock.eth_block_seconds;
        k->on_tick(now);
        for (const auto& pay : k->drain_outbox()) paid[pay.to] += pay.amount.units;
        k->drain_events();
    }
    void drain()
    {
        for (const auto& pay : k->drain_outbox()) paid[pay.to] += pay.amount.units;
        k->drain_events();
    }

    std::pair<Hash, Hash> roots(std::uint64_t range)
    {
        auto r = extension_roots(*view, tip(), k->current_date(), range, p.c);
        REQUIRE(r);
        return *r;
    }

    void relay_to(std::uint64_t range)
    {
        auto [c, w] = roots(range);
        REQUIRE(k->submit_extension(relay.eth, range, c, w, now));
        advance_eth(k->challenge_window());
        REQUIRE(k->current_date() == range);
    }

    TxReport report(std::uint64_t ordinal, std::size_t index = 0)
    {
        auto r = build_tx_report(*k, *view, tip(), ordinal, index);
        REQUIRE(r);
        return *r;
    }

    Eth deposit_of(const AgentIdentity& who) const { return k->relayers().at(who.eth).deposit; }

    /// Opens a 10 ETH bridge at y = 100, locks `coins` DOGE from alice and reports it.
    void lock(std::int64_t coins, CrossingFee fee = {})
    {
        REQUIRE(k->open_bridge(op.eth, Eth::coins(10), y, head, fee, std::nullopt, Eth{0}, now));
        mine({send(alice.doge, head, coins, hodler.eth)});
        mine_n(static_cast<int>(p.c));
        relay_to(1);
        REQUIRE(k->report_lock(relay.eth, report(1), now).applied);
        drain();
    }
};

} // namespace

TEST_CASE("relayer deposit requirement")
{
    Peg t;
    CHECK(t.k->required_deposit() == Eth{101'100});
    auto low = AgentIdentity::of("low");
    CHECK(t.k->become_relayer(low.eth, Eth{101'099}, 0).error() == ContractError::InsufficientDeposit);
    CHECK_FALSE(t.k->is_relayer(low.eth));

    // bridge collateral does not count as a relayer deposit
    REQUIRE(t.k->open_bridge(t.op.eth, Eth::coins(100), t.y, t.head, {}, std::nullopt, Eth{0}, 0));
    t.mine_n(12);
    auto [c, w] = t.roots(1);
    CHECK(t.k->submit_extension(t.op.eth, 1, c, w, 0).error() == ContractError::NotARelayer);
    CHECK(t.k->submit_extension(t.relay.eth, 1, c, w, 0));
    CHECK(t.k->submit_extension(t.relay.eth, 2, c, w, 0).error() == ContractError::NotListening);
}

TEST_CASE("lock mints once and refunds the registration")
{
    Peg t;
    REQUIRE(t.k->open_bridge(t.op.eth, Eth::coins(10), t.y, t.head, {}, std::nullopt, Eth{0}, 0));
    auto crosser = AgentIdentity::of("crosser");
    CHECK(t.k->register_crossing(crosser.eth, t.head, t.alice.doge, t.hodler.eth, Eth{99'999}, 0).error() ==
          ContractError::InsufficientDeposit);
    REQUIRE(t.k->register_crossing(crosser.eth, t.head, t.alice.doge, t.hodler.eth, Eth{110'000}, 0));
    CHECK(t.k->register_crossing(crosser.eth, t.head, t.alice.doge, t.hodler.eth, Eth{110'000}, 0).error() ==
          ContractError::AlreadyRegistered);

    t.mine({t.send(t.alice.doge, t.head, 1000)});
    t.mine_n(10);
    t.relay_to(1);
    TxReport r = t.report(1);
    CHECK(t.k->report_lock(t.relay.eth, r, t.now).applied);
    t.drain();
    CHECK(t.k->wow_balance(t.hodler.eth, t.y) == Wow::coins(1000));
    CHECK(t.k->wow_supply(t.y) == Wow::coins(1000));
    CHECK(t.paid[crosser.eth] == 110'000);
    CHECK(t.k->registrations().empty());

    auto again = t.k->report_lock(t.relay.eth, r, t.now);
    CHECK_FALSE(again.applied);
    CHECK(again.reason == "TxUsed");
    CHECK(t.k->wow_supply(t.y) == Wow::coins(1000));
}

TEST_CASE("registered head rejects a different sender")
{
    Peg t;
    REQUIRE(t.k->open_bridge(t.op.eth, Eth::coins(10), t.y, t.head, {}, std::nullopt, Eth{0}, 0));
    auto other = AgentIdentity::of("other");
    REQUIRE(t.k->register_crossing(other.eth, t.head, other.doge, other.eth, Eth{110'000}, 0));
    t.mine({t.send(t.alice.doge, t.head, 1000, t.hodler.eth)});
    t.mine_n(10);
    t.relay_to(1);
    CHECK(t.k->report_lock(t.relay.eth, t.report(1), t.now).reason == "SenderNotRegistered");
}

TEST_CASE("partial lock refunds the unused collateral")
{
    // 600 DOGE on a 1000 DOGE bridge at y = 100: 6 ETH kept, 4 ETH back
    Peg t;
    t.lock(600);
    const Bridge* b = t.k->bridge(1);
    CHECK(b->collateral == Eth::coins(6));
    CHECK(b->state == BridgeState::Queued);
    CHECK(t.paid[t.op.eth] == 4 * kEth);
    CHECK(t.k->wow_supply(t.y) == Wow::coins(600));
    CHECK(t.k->queue(t.y).size() == 1);
}

TEST_CASE("crossing fee, relay tax and lock bounty split the mint")
{
    // 1000 locked, fee 5, tax 2, bounty 1: crosser gets 992
    ProtocolParams p;
    p.relay_tax = Wow::coins(2);
    p.lock_bounty = Wow::coins(1);
    Peg t(p);
    auto reporter = AgentIdentity::of("reporter");
    REQUIRE(t.k->open_bridge(t.op.eth, Eth::coins(10), t.y, t.head, CrossingFee{Wow::coins(5)}, std::nullopt,
                             Eth{0}, 0));
    t.mine({t.send(t.alice.doge, t.head, 1000, t.hodler.eth)});
    t.mine_n(10);
    t.relay_to(1);
    REQUIRE(t.k->report_lock(reporter.eth, t.report(1), t.now).applied);
    CHECK(t.k->wow_balance(t.hodler.eth, t.y) == Wow::coins(992));
    CHECK(t.k->wow_balance(t.op.eth, t.y) == Wow::coins(5));
    CHECK(t.k->wow_balance(t.relay.eth, t.y) == Wow::coins(2));
    CHECK(t.k->wow_balance(reporter.eth, t.y) == Wow::coins(1));
    CHECK(t.k->wow_supply(t.y) == Wow::coins(1000));
}

TEST_CASE("expired registration keeps the void fee")
{
    // 0.5 ETH deposit on a 10 ETH bridge: 0.1 retained, 0.4 refunded
    Peg t;
    auto crosser = AgentIdentity::of("crosser");
    REQUIRE(t.k->open_bridge(t.op.eth, Eth::coins(10), t.y, t.head, {}, std::nullopt, Eth{0}, 0));
    REQUIRE(t.k->register_crossing(crosser.eth, t.head, t.alice.doge, crosser.eth, Eth{500'000}, 0));
    t.mine_n(32);
    t.relay_to(21);
    CHECK(t.k->registrations().size() == 1);
    t.relay_to(22);
    CHECK(t.k->registrations().empty());
    CHECK(t.paid[crosser.eth] == 400'000);
    CHECK(t.k->retained() == Eth{100'000});
}

TEST_CASE("range challenges")
{
    Peg t;
    t.mine_n(140);
    auto [c, w] = t.roots(100);
    REQUIRE(t.k->submit_extension(t.relay.eth, 100, c, w, t.now));

    SUBCASE("less than d ahead is ignored")
    {
        auto [c2, w2] = t.roots(115);
        CHECK(*t.k->challenge_range(t.rival.eth, 115, c2, w2, t.now) == RangeChallengeOutcome::Ignored);
        CHECK(t.deposit_of(t.relay) == Eth{101'100});
    }
    SUBCASE("d or more ahead replaces and charges 10%")
    {
        auto [c2, w2] = t.roots(125);
        CHECK(*t.k->challenge_range(t.rival.eth, 125, c2, w2, t.now) == RangeChallengeOutcome::Replaced);
        CHECK(t.deposit_of(t.relay) == Eth{101'100 - 10'110});
        CHECK(t.k->active()->sub.relayer == t.rival.eth);
        t.advance_eth(t.k->challenge_window());
        CHECK(t.k->current_date() == 125);
        CHECK(t.k->retained() == Eth{10'110});
    }
    SUBCASE("window elapsed")
    {
        t.advance_eth(t.k->challenge_window() - 1);
        t.now += 14;
        auto [c2, w2] = t.roots(125);
        CHECK(t.k->challenge_range(t.rival.eth, 125, c2, w2, t.now).error() == ContractError::WindowElapsed);
    }
}

TEST_CASE("commitment challenge outcomes")
{
    Peg t;
    t.mine_n(30);
    // extension of 19 blocks: (100 + 19 + 10) * 10 = 1290, reward 12
    const std::int64_t cost = 1290, reward = 12;
    auto [c, w] = t.roots(19);

    auto proof_for = [&](ThreadId id) {
        auto pr = prove_extension(*t.view, t.tip(), t.k->threads().at(id).base, 19, t.p.c);
        REQUIRE(pr);
        return *pr;
    };

    SUBCASE("orphan commitment is rejected and the relayer pays")
    {
        Hash bogus = c;
        bogus.bytes[0] ^= 1;
        REQUIRE(t.k->submit_extension(t.relay.eth, 19, bogus, w, t.now));
        auto id = t.k->challenge_commitment(t.rival.eth, 1, t.now);
        REQUIRE(id);
        REQUIRE(t.k->supply_proof(t.relay.eth, *id, proof_for(*id), t.now));
        CHECK_FALSE(t.k->threads().at(*id).verdict->accepted);
        CHECK(t.k->threads().at(*id).verdict->reason == RejectReason::CommitmentMismatch);
        t.advance_eth(20);
        CHECK(t.k->threads().at(*id).resolved);
        CHECK(t.deposit_of(t.relay) == Eth{101'100 - cost - reward});
        CHECK(t.deposit_of(t.rival) == Eth{101'100 + reward});
        CHECK(t.k->history().empty());
        CHECK(t.k->totals().oracle_fees == Eth{cost});
    }
    SUBCASE("honest commitment survives and the challenger pays")
    {
        REQUIRE(t.k->submit_extension(t.relay.eth, 19, c, w, t.now));
        auto id = t.k->challenge_commitment(t.rival.eth, 1, t.now);
        REQUIRE(id);
        CHECK(t.k->challenge_commitment(t.rival.eth, 1, t.now).error() == ContractError::SecondChallenge);
        REQUIRE(t.k->supply_proof(t.relay.eth, *id, proof_for(*id), t.now));
        CHECK(t.k->threads().at(*id).verdict->accepted);
        t.advance_eth(20);
        CHECK(t.deposit_of(t.rival) == Eth{101'100 - cost - reward});
        CHECK(t.deposit_of(t.relay) == Eth{101'100 + reward});
    }
    SUBCASE("missing proof destroys the relayer deposit")
    {
        REQUIRE(t.k->submit_extension(t.relay.eth, 19, c, w, t.now));
        auto id = t.k->challenge_commitment(t.rival.eth, 1, t.now);
        REQUIRE(id);
        t.advance_eth(100);
        CHECK(t.k->threads().at(*id).resolved);
        CHECK(t.deposit_of(t.relay) == Eth{0});
        CHECK(t.k->totals().destroyed == Eth{101'100});
        CHECK(t.deposit_of(t.rival) == Eth{101'100});
    }
}

TEST_CASE("burn settled by an unlock report")
{
    Peg t;
    t.lock(1000);
    REQUIRE(t.k->wow_balance(t.hodler.eth, t.y) == Wow::coins(1000));
    CHECK(t.k->burn_wow(t.hodler.eth, t.y, Wow{1'000 * kCoin + 1}, t.hodler.doge, t.now).error() ==
          ContractError::InsufficientBalance);
    CHECK(t.k->burn_wow(t.hodler.eth, t.y, Wow{150}, t.hodler.doge, t.now).error() == ContractError::InexactAmount);
    auto id = t.k->burn_wow(t.hodler.eth, t.y, Wow::coins(1000), t.hodler.doge, t.now);
    REQUIRE(id);
    CHECK(t.k->wow_supply(t.y) == Wow{0});
    CHECK(t.k->bridge(1)->collateral == Eth{0});

    t.mine({t.send(t.head, t.hodler.doge, 1000)});
    t.mine_n(10);
    t.relay_to(12);
    REQUIRE(t.k->report_unlock(t.relay.eth, *id, t.report(12), t.now).applied);
    t.drain();
    const Burn& burn = t.k->burns().at(*id);
    CHECK(burn.complete);
    CHECK(burn.d_recv == Doge::coins(1000));
    CHECK(burn.eth_recv == Eth{0});
    CHECK(t.paid[t.op.eth] == 10 * kEth);
    CHECK(t.k->bridge(1)->state == BridgeState::Closed);
}

TEST_CASE("unlock timeout pays the escrow to the hodler")
{
    Peg t;
    t.lock(1000);
    auto id = t.k->burn_wow(t.hodler.eth, t.y, Wow::coins(400), t.hodler.doge, t.now);
    REQUIRE(id);
    CHECK(t.k->burns().at(*id).deadline_eth == t.k->eth_now(t.now) + 313);
    CHECK(t.k->unlock_timeout(*id, t.now).error() == ContractError::NotElapsed);
    t.advance_eth(313);
    const Burn& burn = t.k->burns().at(*id);
    CHECK(burn.complete);
    CHECK(burn.d_recv == Doge{0});
    // (w - d_recv) / y = 400 / 100
    CHECK(burn.eth_recv == Eth::coins(4));
    CHECK(t.paid[t.hodler.eth] == 4 * kEth);
    CHECK(t.k->unlock_timeout(*id, t.now).error() == ContractError::AlreadySettled);
}

TEST_CASE("missing DOGE pays n/y and closes the bridge")
{
    Peg t;
    t.lock(1000);
    auto thief = AgentIdentity::of("thief");
    t.mine({t.send(t.head, thief.doge, 1000)});
    t.mine_n(10);
    t.relay_to(12);
    auto r = t.k->report_missing_doge(t.hodler.eth, t.y, Wow::coins(1000), t.report(12), t.now);
    REQUIRE(r);
    CHECK(r->applied);
    t.drain();
    CHECK(t.paid[t.hodler.eth] == 10 * kEth);
    CHECK(t.k->bridge(1)->state == BridgeState::Closed);
    CHECK(t.k->wow_supply(t.y) == Wow{0});
    CHECK(t.k->queue(t.y).empty());
}

TEST_CASE("backtrack replay keeps transactions used")
{
    Peg t;
    t.lock(1000);
    TxReport first = t.report(1);
    auto roots = extension_roots(*t.view, t.tip(), 0, 1, t.p.c);
    REQUIRE(roots);
    auto [c, w] = *roots;
    t.k->on_tick(t.now);
    REQUIRE(t.k->backtrack(t.relay.eth, 0, 1, c, w, t.now));
    t.advance_eth(t.k->challenge_window());
    REQUIRE(t.k->history().size() == 1);
    CHECK(t.k->history()[0].accept_seq == 2);
    auto again = t.k->report_lock(t.relay.eth, first, t.now);
    CHECK_FALSE(again.applied);
    CHECK(again.reason == "TxUsed");
    CHECK(t.k->wow_supply(t.y) == Wow::coins(1000));
    CHECK(t.k->backtrack(t.relay.eth, 3, 5, c, w, t.now).error() == ContractError::BadIndex);
}

TEST_CASE("deep backtracking is gated by delays")
{
    Peg t;
    t.mine_n(30);
    t.relay_to(5);
    auto [c, w] = t.roots(15);
    SimTime base = t.k->last_progress();

    t.now = base + 50 * 3600;
    CHECK(t.k->deep_backtrack_chunk(t.relay.eth, 0, 15, c, w, t.now).error() == ContractError::NotStuck);
    t.now = base + 72 * 3600;
    CHECK(t.k->deep_backtrack_chunk(t.relay.eth, 0, 15, c, w, t.now));
}

TEST_CASE("deep proposal finalizes after the first delay unless objected")
{
    Peg t;
    t.mine_n(30);
    t.relay_to(5);
    auto [c, w] = t.roots(15);
    REQUIRE(t.k->propose_deep(t.rival.eth, 0, 15, c, w, t.now));
    CHECK(t.k->propose_deep(t.rival.eth, 0, 15, c, w, t.now).error() == ContractError::DeepPending);

    SUBCASE("objection cancels")
    {
        REQUIRE(t.k->object_deep(t.relay.eth, t.now));
        CHECK_FALSE(t.k->deep_proposal());
    }
    SUBCASE("finalizes after 24 hours")
    {
        t.now += 24 * 3600;
        t.k->on_tick(t.now);
        CHECK_FALSE(t.k->deep_proposal());
        REQUIRE(t.k->history().size() == 1);
        CHECK(t.k->current_date() == 15);
    }
}
