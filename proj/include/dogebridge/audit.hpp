// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/result.hpp>
#include <dogebridge/trace.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dogebridge {

struct Violation {
    std::uint64_t seq = 0;
    std::string check;
    std::string detail;
};

struct AuditReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    nlohmann::json stats = nlohmann::json::object();

    bool clean() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

/**
 * Replays the ledger deltas of every contract event against a shadow
 * ledger and re-checks, per event: the WOW backing identity, conservation
 * of ETH, snapshot agreement, relay mode transitions, used-transaction
 * monotonicity, FIFO queue order and event ordering. Completed burns are
 * checked for exact settlement. Scenario tags enable the quiescent supply
 * check ("invariant3") and the end-of-run history check ("relay_safety").
 */
AuditReport audit_events(const std::vector<nlohmann::json>& events);

Result<AuditReport, ParseError> audit_trace(const std::vector<std::string>& lines);

} // namespace dogebridge
