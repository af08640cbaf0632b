// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/amount.hpp>
#include <dogebridge/hash.hpp>

#include <openssl/sha.h>

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace dogebridge {

bool Hash::is_zero() const
{
    for (auto b : bytes)
        if (b != 0) return false;
    return true;
}

std::string Hash::hex() const { return to_hex(bytes); }

std::optional<Hash> Hash::from_hex(std::string_view text)
{
    auto raw = dogebridge::from_hex(text);
    if (!raw || raw->size() != 32) return std::nullopt;
    Hash h;
    std::copy(raw->begin(), raw->end(), h.bytes.begin());
    return h;
}

Hash sha256(ByteSpan data)
{
    Hash h;
    SHA256(data.data(), data.size(), h.bytes.data());
    return h;
}

Hash sha256d(ByteSpan data)
{
    Hash once = sha256(data);
    return sha256(once.bytes);
}

std::string to_hex(ByteSpan data)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (auto b : data) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xf]);
    }
    return s;
}

std::optional<Bytes> from_hex(std::string_view text)
{
    if (text.size() % 2 != 0) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        int hi = nibble(text[i]);
        int lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

void ByteWriter::u32(std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::prefixed(ByteSpan data)
{
    if (data.size() > 0xff) throw std::length_error("prefixed field longer than 255 bytes");
    u8(static_cast<std::uint8_t>(data.size()));
    raw(data);
}

void ByteWriter::str(std::string_view s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    raw({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

// ---------------------------------------------------------------------------
// amounts

Ratio Ratio::of(std::int64_t n, std::int64_t d)
{
    if (d <= 0 || n < 0) throw std::invalid_argument("ratio must be non-negative with positive denominator");
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    return Ratio{n / g, d / g};
}

std::int64_t Ratio::floor_mul(std::int64_t value) const
{
    __int128 p = static_cast<__int128>(value) * num;
    __int128 q = p / den;
    if (p < 0 && q * den != p) --q;
    return static_cast<std::int64_t>(q);
}

std::string Ratio::to_string() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::optional<Rate> Rate::make(std::int64_t num, std::int64_t den)
{
    if (num <= 0 || den <= 0) return std::nullopt;
    std::int64_t g = std::gcd(num, den);
    return Rate(num / g, den / g);
}

std::optional<Rate> Rate::parse(std::string_view text)
{
    auto slash = text.find('/');
    std::int64_t n = 0;
    std::int64_t d = 1;
    auto parse_int = [](std::string_view s, std::int64_t& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    if (slash == std::string_view::npos) {
        if (!parse_int(text, n)) return std::nullopt;
    } else {
        if (!parse_int(text.substr(0, slash), n) || !parse_int(text.substr(slash + 1), d)) return std::nullopt;
    }
    return make(n, d);
}

std::optional<Doge> Rate::capacity_for(Eth collateral) const
{
    __int128 p = static_cast<__int128>(collateral.units) * num_;
    if (p % den_ != 0) return std::nullopt;
    return Doge{static_cast<std::int64_t>(p / den_)};
}

std::optional<Eth> Rate::eth_for(std::int64_t wow_units) const
{
    __int128 p = static_cast<__int128>(wow_units) * den_;
    if (p % num_ != 0) return std::nullopt;
    return Eth{static_cast<std::int64_t>(p / num_)};
}

std::int64_t Rate::round_down_exact(std::int64_t units) const
{
    // units * den / num is integral iff num divides units (gcd(num, den) = 1).
    if (units <= 0) return 0;
    return units - units % num_;
}

std::string Rate::to_string() const
{
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering Rate::operator<=>(const Rate& o) const
{
    __int128 lhs = static_cast<__int128>(num_) * o.den_;
    __int128 rhs = static_cast<__int128>(o.num_) * den_;
    return lhs <=> rhs;
}

std::optional<std::int64_t> parse_coin_amount(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > 6) return std::nullopt;
    std::int64_t w = 0;
    if (!whole.empty()) {
        auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
        if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;
    }
    std::int64_t f = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        f *= 10;
        if (i < frac.size()) {
            char c = frac[i];
            if (c < '0' || c > '9') return std::nullopt;
            f += c - '0';
        }
    }
    std::int64_t units = w * kCoin + f;
    return negative ? -units : units;
}

std::string format_coin_amount(std::int64_t units)
{
    std::string sign = units < 0 ? "-" : "";
    std::uint64_t mag = units < 0 ? static_cast<std::uint64_t>(-(units + 1)) + 1 : static_cast<std::uint64_t>(units);
    std::string out = sign + std::to_string(mag / kCoin);
    std::uint64_t frac = mag % kCoin;
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(0, 6 - f.size(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

} // namespace dogebridge
