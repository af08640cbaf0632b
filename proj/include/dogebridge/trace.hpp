// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/clock.hpp>
#include <dogebridge/hash.hpp>
#include <dogebridge/result.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dogebridge {

/**
 * Newline-delimited JSON trace. Each line is an object with the keys
 * actor, eth, kind, payload, seq, state_digest and t, serialized with
 * sorted keys and no whitespace so that the text is canonical.
 */
class TraceWriter {
public:
    void write(SimTime t, std::uint64_t eth, const std::string& kind, const std::string& actor,
               nlohmann::json payload, const Hash& state_digest);

    const std::vector<std::string>& lines() const { return lines_; }
    std::vector<std::string> take() { return std::move(lines_); }
    std::uint64_t next_seq() const { return seq_; }

private:
    std::vector<std::string> lines_;
    std::uint64_t seq_ = 0;
};

/** SHA-256 over the lines, each terminated by '\n'. */
Hash trace_digest(const std::vector<std::string>& lines);

std::string join_trace(const std::vector<std::string>& lines);
std::vector<std::string> split_trace(std::string_view text);

struct ParseError {
    std::size_t line = 0; // 1-based
    std::string message;
};

/** Parses and shape-checks every line. */
Result<std::vector<nlohmann::json>, ParseError> parse_trace(const std::vector<std::string>& lines);

} // namespace dogebridge
