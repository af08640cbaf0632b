// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dogebridge {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

/** 32-byte digest. Ordering is lexicographic over bytes, i.e. big-endian numeric. */
struct Hash {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Hash&) const = default;
    bool is_zero() const;
    std::string hex() const;
    static std::optional<Hash> from_hex(std::string_view text);
};

/** Opaque 20-byte account identifier; the tag separates the two chains. */
template <typename Tag>
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;
    bool is_zero() const
    {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
};

struct DogeTagAddr {};
struct EthTagAddr {};
using DogeAddress = Address<DogeTagAddr>;
using EthAddress = Address<EthTagAddr>;

Hash sha256(ByteSpan data);
Hash sha256d(ByteSpan data);

std::string to_hex(ByteSpan data);
std::optional<Bytes> from_hex(std::string_view text);

template <typename Tag>
std::string address_hex(const Address<Tag>& a) { return to_hex(a.bytes); }

template <typename Tag>
std::optional<Address<Tag>> address_from_hex(std::string_view text)
{
    auto raw = from_hex(text);
    if (!raw || raw->size() != 20) return std::nullopt;
    Address<Tag> a;
    std::copy(raw->begin(), raw->end(), a.bytes.begin());
    return a;
}

/** Derives a stable address from a label, e.g. an agent name. */
template <typename Tag>
Address<Tag> derive_address(std::string_view domain, std::string_view label)
{
    std::string pre(domain);
    pre.push_back(':');
    pre.append(label);
    Hash h = sha256({reinterpret_cast<const std::uint8_t*>(pre.data()), pre.size()});
    Address<Tag> a;
    std::copy_n(h.bytes.begin(), 20, a.bytes.begin());
    return a;
}

/** Canonical big-endian serializer used for every hashed encoding. */
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void raw(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }
    void hash(const Hash& h) { raw(h.bytes); }
    /** Length-prefixed (u8) byte string; used for addresses. */
    void prefixed(ByteSpan data);
    void str(std::string_view s);

    const Bytes& bytes() const { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

} // namespace dogebridge
