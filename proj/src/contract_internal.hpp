// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/contract.hpp>

namespace dogebridge::detail {

using json = nlohmann::json;

inline std::string hexa(const EthAddress& a) { return address_hex(a); }
inline std::string hexa(const DogeAddress& a) { return address_hex(a); }

inline json delta(const char* kind, std::int64_t d) { return json{{"k", kind}, {"d", d}}; }

inline json delta_y(const char* kind, const Rate& y, std::int64_t d)
{
    return json{{"k", kind}, {"y", y.to_string()}, {"d", d}};
}

inline json queue_delta(const char* kind, const Rate& y, BridgeId id)
{
    return json{{"k", kind}, {"y", y.to_string()}, {"bridge", id}};
}

} // namespace dogebridge::detail
