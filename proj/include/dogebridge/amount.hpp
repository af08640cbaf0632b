// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dogebridge {

/** Smallest units per whole coin, shared by ETH, DOGE and WOW. */
inline constexpr std::int64_t kCoin = 1'000'000;

/**
 * Integer quantity of one currency. The tag keeps ETH, DOGE and WOW from
 * being mixed without an explicit conversion through a Rate.
 */
template <typename Tag>
struct Amount {
    std::int64_t units = 0;

    constexpr Amount() = default;
    constexpr explicit Amount(std::int64_t u) : units(u) {}

    static constexpr Amount coins(std::int64_t whole) { return Amount{whole * kCoin}; }
    static constexpr Amount zero() { return Amount{0}; }

    constexpr auto operator<=>(const Amount&) const = default;
    constexpr Amount operator+(Amount o) const { return Amount{units + o.units}; }
    constexpr Amount operator-(Amount o) const { return Amount{units - o.units}; }
    constexpr Amount& operator+=(Amount o) { units += o.units; return *this; }
    constexpr Amount& operator-=(Amount o) { units -= o.units; return *this; }
    constexpr bool is_zero() const { return units == 0; }
    constexpr bool positive() const { return units > 0; }
};

struct EthTag {};
struct DogeTag {};
struct WowTag {};

using Eth = Amount<EthTag>;
using Doge = Amount<DogeTag>;
using Wow = Amount<WowTag>;

/** Non-negative rational, used for fee and penalty rates. */
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Ratio of(std::int64_t n, std::int64_t d);
    bool operator==(const Ratio&) const = default;

    /** floor(value * num / den), computed in 128-bit. */
    std::int64_t floor_mul(std::int64_t value) const;
    std::string to_string() const;
};

/**
 * Exchange-rate parameter y of a WOW[y] token: y DOGE per 1 ETH.
 * Always stored reduced with a positive numerator and denominator.
 */
class Rate {
public:
    Rate() = default;
    static std::optional<Rate> make(std::int64_t num, std::int64_t den);
    static std::optional<Rate> parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    /** DOGE that `collateral` backs, when the product is an integer. */
    std::optional<Doge> capacity_for(Eth collateral) const;
    /** ETH equivalent of `wow` WOW[y], when exact. */
    std::optional<Eth> eth_for(std::int64_t wow_units) const;
    /** Largest amount <= units whose ETH equivalent is exact. */
    std::int64_t round_down_exact(std::int64_t units) const;

    std::string to_string() const;

    bool operator==(const Rate&) const = default;
    std::strong_ordering operator<=>(const Rate& o) const;

private:
    Rate(std::int64_t n, std::int64_t d) : num_(n), den_(d) {}
    std::int64_t num_ = 1;
    std::int64_t den_ = 1;
};

/** Parses "12", "0.5" or "-3.25" coins into smallest units. */
std::optional<std::int64_t> parse_coin_amount(std::string_view text);
std::string format_coin_amount(std::int64_t units);

} // namespace dogebridge
