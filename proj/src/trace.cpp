// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/trace.hpp>

namespace dogebridge {

using json = nlohmann::json;

void TraceWriter::write(SimTime t, std::uint64_t eth, const std::string& kind, const std::string& actor,
                        json payload, const Hash& state_digest)
{
    json line = {{"seq", seq_++},
                 {"t", t},
                 {"eth", eth},
                 {"kind", kind},
                 {"actor", actor},
                 {"payload", std::move(payload)},
                 {"state_digest", state_digest.hex()}};
    lines_.push_back(line.dump());
}

Hash trace_digest(const std::vector<std::string>& lines)
{
    std::string all = join_trace(lines);
    return sha256({reinterpret_cast<const std::uint8_t*>(all.data()), all.size()});
}

std::string join_trace(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out.push_back('\n');
    }
    return out;
}

std::vector<std::string> split_trace(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.emplace_back(line);
        pos = nl + 1;
    }
    return out;
}

Result<std::vector<json>, ParseError> parse_trace(const std::vector<std::string>& lines)
{
    std::vector<json> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        json j = json::parse(lines[i], nullptr, false);
        if (j.is_discarded()) return fail(ParseError{i + 1, "invalid JSON"});
        if (!j.is_object()) return fail(ParseError{i + 1, "expected an object"});
        for (const char* key : {"seq", "t", "eth"})
            if (!j.contains(key) || !j[key].is_number_unsigned())
                return fail(ParseError{i + 1, std::string("missing or non-integer '") + key + "'"});
        for (const char* key : {"kind", "actor", "state_digest"})
            if (!j.contains(key) || !j[key].is_string())
                return fail(ParseError{i + 1, std::string("missing or non-string '") + key + "'"});
        if (!j.contains("payload") || !j["payload"].is_object())
            return fail(ParseError{i + 1, "missing payload object"});
        out.push_back(std::move(j));
    }
    return out;
}

} // namespace dogebridge
