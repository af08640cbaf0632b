// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/amount.hpp>
#include <dogebridge/clock.hpp>
#include <dogebridge/params.hpp>

#include <doctest.h>

#include <string>

using namespace dogebridge;

TEST_CASE("registration void fee: 1% of collateral")
{
    // capacity 1000 DOGE at y = 100 is backed by 10 ETH; 1% is 0.1 ETH
    ProtocolParams p;
    Rate y = *Rate::make(100, 1);
    Eth collateral = Eth::coins(10);
    CHECK(y.capacity_for(collateral)->units == 1000 * kCoin);
    CHECK(registration_void_fee(p, collateral) == Eth{100'000});
    // deposit 0.5 with one expiry: 0.1 retained, 0.4 back
    Eth deposit{500'000};
    CHECK(deposit - registration_void_fee(p, collateral) == Eth{400'000});
}

TEST_CASE("non-maximal penalty: 10% of deposit")
{
    ProtocolParams p;
    CHECK(nonmax_penalty(p, Eth{101'100}) == Eth{10'110});
    CHECK(nonmax_penalty(p, Eth::coins(1)) == Eth{100'000});
    CHECK(nonmax_penalty(p, Eth{9}) == Eth{0});
}

TEST_CASE("challenge reward: 1% of verification cost")
{
    ProtocolParams p;
    CHECK(challenge_reward(p, Eth{1'280}) == Eth{12});
    CHECK(challenge_reward(p, Eth{101'100}) == Eth{1'011});
    CHECK(challenge_reward(p, Eth{99}) == Eth{0});
}

TEST_CASE("verification cost and relayer deposit")
{
    ProtocolParams p;
    CostModel m;
    // 100 + (10000 + 10) = 10110 units
    CHECK(verification_cost(m, 10'000, 10) == 10'110);
    CHECK(verification_cost_eth(m, 10'000, 10) == Eth{101'100});
    CHECK(verification_cost(m, 18, 10) == 128);
    CHECK(required_relayer_deposit(p, m) == Eth{101'100});
    CHECK(required_relayer_deposit(p, m) > p.relayer_deposit_floor);

    // short extensions fall back to the 0.05 ETH floor
    ProtocolParams shortp = p;
    shortp.max_extension_len = 100;
    CHECK(verification_cost_eth(m, 100, 10) == Eth{2'100});
    CHECK(required_relayer_deposit(shortp, m) == Eth{50'000});
}

TEST_CASE("timing parameters")
{
    ProtocolParams p;
    ClockParams c;
    // ceil(18 * 62 / 14)
    CHECK(challenge_window_eth_blocks(p.d, p.k, c) == 80);
    // 20 + 2*80 + ceil(30 * 62 / 14)
    CHECK(unlock_deadline_eth_blocks(p, c) == 313);
    ProtocolParams fixed = p;
    fixed.unlock_relay_allowance_eth_blocks = 5;
    CHECK(unlock_deadline_eth_blocks(fixed, c) == 25);
    CHECK(proof_deadline_seconds(p, 18) == 600 + 2 * 28);
    CHECK(ethereum_time(1000, c) == 71);
    CHECK(eth_block_start(71, c) == 994);
}

TEST_CASE("parameter validation")
{
    ProtocolParams p;
    CHECK(validate(p));
    auto field = [](ProtocolParams q) { return validate(q).error().field; };
    ProtocolParams q = p;
    q.k = q.d;
    CHECK(field(q) == "k");
    q = p;
    q.nonmax_penalty_rate = Ratio::of(0, 1);
    CHECK(field(q) == "nonmax_penalty_rate");
    q = p;
    q.max_extension_len = 5;
    CHECK(field(q) == "max_extension_len");
    q = p;
    q.deep_backtrack_delay_2 = 1;
    CHECK(field(q) == "deep_backtrack_delay_2");
}

TEST_CASE("rates and amounts")
{
    Rate y = *Rate::parse("10/4");
    CHECK_FALSE(Rate::parse("2.5"));
    CHECK(y.num() == 5);
    CHECK(y.den() == 2);
    CHECK(y.eth_for(5)->units == 2);
    CHECK_FALSE(y.eth_for(3));
    CHECK(y.round_down_exact(9) == 5);
    CHECK_FALSE(Rate::make(0, 1));
    CHECK_FALSE(Rate::make(1, 0));
    CHECK(*Rate::make(50, 1) < *Rate::make(100, 1));
    CHECK(*parse_coin_amount("0.05") == 50'000);
    CHECK(*parse_coin_amount("-3.25") == -3'250'000);
    CHECK_FALSE(parse_coin_amount("1.0000001"));
    CHECK(format_coin_amount(50'000) == "0.05");
    CHECK(Ratio::of(1, 3).floor_mul(10) == 3);
}

TEST_CASE("event queue orders by time then insertion")
{
    EventQueue<std::string> q;
    q.schedule(10, "b");
    q.schedule(5, "a");
    q.schedule(10, "c");
    std::string order;
    q.run_until(10, [&](auto& it) { order += it.event; });
    CHECK(order == "abc");
    CHECK(q.now() == 10);
    CHECK_THROWS_AS(q.schedule(9, "late"), PastEvent);
}

TEST_CASE("exponential draws are seeded and average near the mean")
{
    std::mt19937_64 a(5), b(5);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        auto x = exponential_seconds(a, 62);
        CHECK(x == exponential_seconds(b, 62));
        sum += static_cast<double>(x);
    }
    CHECK(sum / 20000 == doctest::Approx(62).epsilon(0.05));
}
