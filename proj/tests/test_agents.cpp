// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/agents.hpp>

#include <doctest.h>

using namespace dogebridge;

namespace {

Rate r(std::int64_t n, std::int64_t d = 1) { return *Rate::make(n, d); }

} // namespace

TEST_CASE("rational operator absconds only when the locked DOGE outvalues the collateral")
{
    // 1000 DOGE at 50 DOGE/ETH is 20 ETH > 10 ETH collateral
    CHECK(should_abscond(Doge::coins(1000), Eth::coins(10), r(50)));
    // at 200 DOGE/ETH it is 5 ETH < 10
    CHECK_FALSE(should_abscond(Doge::coins(1000), Eth::coins(10), r(200)));
    // break-even does not abscond
    CHECK_FALSE(should_abscond(Doge::coins(1000), Eth::coins(10), r(100)));
    CHECK(should_abscond(Doge::coins(1000), Eth::coins(10), r(199, 2)));
}

TEST_CASE("hodler and crosser comfort thresholds")
{
    Ratio tenth = Ratio::of(1, 10);
    // burns once the rate drops below (1 + 1/10) * y
    CHECK_FALSE(hodler_should_burn(r(120), r(100), tenth));
    CHECK_FALSE(hodler_should_burn(r(110), r(100), tenth));
    CHECK(hodler_should_burn(r(109), r(100), tenth));
    CHECK(hodler_should_burn(r(80), r(100), tenth));
    CHECK(crosser_comfortable(r(150), r(100), Ratio::of(1, 4)));
}

TEST_CASE("rate path lookups")
{
    auto flat = RatePath::make({{0, r(100)}});
    REQUIRE(flat);
    CHECK(*flat->rate_at(0) == r(100));
    CHECK(*flat->rate_at(1'000'000) == r(100));

    auto step = RatePath::make({{0, r(100)}, {500, r(40)}});
    REQUIRE(step);
    CHECK(*step->rate_at(499) == r(100));
    CHECK(*step->rate_at(500) == r(40));
    CHECK(step->minimum() == r(40));

    CHECK(RatePath::make({}).error() == RateError::EmptyPath);
    CHECK(RatePath::make({{0, r(1)}, {10, r(2)}, {5, r(3)}}).error() == RateError::Unsorted);
    auto late = RatePath::make({{5, r(1)}});
    REQUIRE(late);
    CHECK(late->rate_at(4).error() == RateError::BeforeStart);
}

TEST_CASE("agent identities are stable and distinct")
{
    auto a = AgentIdentity::of("alice");
    CHECK(a.eth == AgentIdentity::of("alice").eth);
    CHECK(a.doge != AgentIdentity::of("bob").doge);
    CHECK(head_address("op", 0) != head_address("op", 1));
    CHECK(head_address("op", 0) != AgentIdentity::of("op").doge);
}

TEST_CASE("every policy builds with default parameters where possible")
{
    PolicyContext ctx;
    ctx.self = AgentIdentity::of("x");
    int built = 0;
    for (const auto& id : policy_ids()) {
        auto p = make_policy(id, ctx, nlohmann::json::object(), "$.p");
        if (p) ++built;
        else CHECK(p.error().path.rfind("$.p", 0) == 0);
    }
    CHECK(policy_ids().size() == 12);
    CHECK(built > 0);
    auto bad = make_policy("no_such_policy", ctx, nlohmann::json::object(), "$.p");
    CHECK_FALSE(bad);
    auto unknown_field = make_policy(policy_ids().front(), ctx, {{"bogus_field", 1}}, "$.p");
    REQUIRE_FALSE(unknown_field);
    CHECK(unknown_field.error().path == "$.p.bogus_field");
}
