// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/audit.hpp>
#include <dogebridge/chain.hpp>
#include <dogebridge/proof.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace dogebridge {

using json = nlohmann::json;

json AuditReport::to_json() const
{
    json v = json::array();
    for (const auto& x : violations) v.push_back({{"seq", x.seq}, {"check", x.check}, {"detail", x.detail}});
    return {{"violations", v}, {"warnings", warnings}, {"stats", stats}};
}

namespace {

const std::set<std::string> kHarnessKinds = {"scenario_start", "scenario_end", "doge_block", "doge_tx",
                                             "action_rejected", "policy_bug", "quiescent", "rate"};

using I128 = __int128;

std::string i128_str(I128 v)
{
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string s;
    while (v != 0) {
        int d = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
        v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

std::int64_t geti(const json& j, const char* key)
{
    auto it = j.find(key);
    return it != j.end() && it->is_number_integer() ? it->get<std::int64_t>() : 0;
}

struct HeaderNode {
    BlockHeader header;
    ChainWork work;
    std::uint64_t arrival = 0;
};

class Auditor {
public:
    AuditReport run(const std::vector<json>& events)
    {
        if (events.empty()) {
            report_.warnings.push_back("EmptyTrace");
            finish_stats();
            return report_;
        }
        for (const auto& ev : events) step(ev);
        finish_stats();
        return report_;
    }

private:
    void flag(const char* check, std::string detail)
    {
        report_.violations.push_back(Violation{seq_, check, std::move(detail)});
    }

    static std::optional<Rate> rate_of(const std::string& y) { return Rate::parse(y); }

    void step(const json& ev)
    {
        seq_ = ev.at("seq").get<std::uint64_t>();
        std::uint64_t t = ev.at("t").get<std::uint64_t>();
        if (have_prev_ && seq_ <= prev_seq_) flag("ordering", "seq not strictly increasing");
        if (have_prev_ && t < prev_t_) flag("ordering", "time went backwards");
        have_prev_ = true;
        prev_seq_ = seq_;
        prev_t_ = t;
        ++events_;

        const std::string& kind = ev.at("kind").get_ref<const std::string&>();
        const json& p = ev.at("payload");
        kinds_[kind] += 1;
        if (kHarnessKinds.count(kind)) {
            harness_event(kind, p, t);
            return;
        }
        contract_event(kind, p);
    }

    // -----------------------------------------------------------------------

    void harness_event(const std::string& kind, const json& p, std::uint64_t t)
    {
        if (kind == "scenario_start") {
            for (const auto& tag : p.value("tags", json::array())) tags_.insert(tag.get<std::string>());
            if (p.contains("genesis")) add_header(p["genesis"].value("header", ""), p["genesis"].value("hash", ""), t);
        } else if (kind == "doge_block") {
            add_header(p.value("header", ""), p.value("hash", ""), t);
        } else if (kind == "policy_bug") {
            flag("policy_bug", p.value("action", "?") + ": " + p.value("error", "?"));
        } else if (kind == "quiescent") {
            ++quiescent_points_;
            if (!tags_.count("invariant3")) return;
            for (auto it = p.at("locked").begin(); it != p.at("locked").end(); ++it) {
                std::int64_t locked = it.value().get<std::int64_t>();
                std::int64_t supply = supply_[it.key()];
                if (locked != supply)
                    flag("invariant3", "y=" + it.key() + " locked " + std::to_string(locked) + " != supply " +
                                           std::to_string(supply));
            }
        } else if (kind == "scenario_end") {
            saw_end_ = true;
            if (tags_.count("relay_safety")) relay_safety(p);
        }
    }

    void add_header(const std::string& hex, const std::string& claimed, std::uint64_t t)
    {
        auto raw = from_hex(hex);
        if (!raw) return flag("chain", "undecodable header");
        auto h = BlockHeader::decode(*raw);
        if (!h) return flag("chain", "undecodable header");
        Hash id = h->hash();
        if (id.hex() != claimed) return flag("chain", "header hash mismatch");
        HeaderNode node{*h, ChainWork::of_target(h->target), t};
        if (h->ordinal > 0) {
            auto parent = headers_.find(h->parent);
            if (parent == headers_.end()) return flag("chain", "block with unknown parent");
            node.work = parent->second.work + node.work;
        }
        headers_.emplace(id, node);
        if (!best_ || better(id, *best_)) best_ = id;
    }

    bool better(const Hash& a, const Hash& b) const
    {
        const auto& na = headers_.at(a);
        const auto& nb = headers_.at(b);
        if (na.work != nb.work) return na.work > nb.work;
        if (na.arrival != nb.arrival) return na.arrival < nb.arrival;
        return a < b;
    }

    void relay_safety(const json& summary)
    {
        if (!best_) return flag("relay_safety", "no chain recorded");
        std::vector<BlockHeader> path;
        for (Hash cur = *best_;;) {
            const auto& n = headers_.at(cur);
            path.push_back(n.header);
            if (n.header.ordinal == 0) break;
            cur = n.header.parent;
        }
        std::reverse(path.begin(), path.end()); // index = ordinal
        for (const auto& e : summary.value("history", json::array())) {
            std::uint64_t from = e.at("prior_date").get<std::uint64_t>() + 1;
            std::uint64_t to = e.at("range").get<std::uint64_t>();
            std::string idx = std::to_string(e.at("index").get<std::uint64_t>());
            if (to >= path.size() || from > to) {
                flag("relay_safety", "entry " + idx + " extends past the best chain");
                continue;
            }
            std::vector<BlockHeader> seg(path.begin() + static_cast<std::ptrdiff_t>(from),
                                         path.begin() + static_cast<std::ptrdiff_t>(to) + 1);
            if (header_commitment(seg).hex() != e.at("commitment").get<std::string>())
                flag("relay_safety", "entry " + idx + " does not commit to the best chain");
            ++entries_checked_;
        }
    }

    // -----------------------------------------------------------------------

    void contract_event(const std::string& kind, const json& p)
    {
        ++contract_events_;
        if (kind == "burn") check_fifo(p);
        for (const auto& d : p.value("deltas", json::array())) apply(d);

        if (kind == "burn_complete" || kind == "missing_doge_paid") check_settlement(p);

        if (!p.contains("snapshot")) return flag("snapshot", "contract event without snapshot");
        const json& s = p.at("snapshot");
        check_mode(kind, s.value("mode", ""));
        check_snapshot(s);
        check_backing();
    }

    void apply(const json& d)
    {
        const std::string k = d.value("k", "");
        std::int64_t v = geti(d, "d");
        std::string y = d.value("y", "");
        if (k == "wow") supply_[y] += v;
        else if (k == "in") received_ += v;
        else if (k == "out") paid_out_ += v;
        else if (k == "fee") oracle_fees_ += v;
        else if (k == "destroyed") destroyed_ += v;
        else if (k == "backing") backing_[y] += v;
        else if (k == "escrow") escrow_[y] += v;
        else if (k == "owed") owed_[y] += v;
        else if (k == "queue_push") queues_[y].push_back(d.at("bridge").get<std::uint64_t>());
        else if (k == "queue_pop") {
            auto& q = queues_[y];
            std::uint64_t b = d.at("bridge").get<std::uint64_t>();
            if (q.empty() || q.front() != b) flag("fifo", "queue_pop of bridge " + std::to_string(b) + " not at front");
            else q.pop_front();
        } else if (k == "queue_remove") {
            auto& q = queues_[y];
            std::uint64_t b = d.at("bridge").get<std::uint64_t>();
            auto it = std::find(q.begin(), q.end(), b);
            if (it == q.end()) flag("fifo", "queue_remove of absent bridge " + std::to_string(b));
            else q.erase(it);
        } else if (k == "used") {
            if (!used_.insert(d.at("tx").get<std::string>()).second)
                flag("used_txs", "transaction " + d.at("tx").get<std::string>() + " used twice");
        }
    }

    void check_fifo(const json& p)
    {
        const auto& q = queues_[p.value("y", "")];
        const json& consumed = p.value("consumed", json::array());
        for (std::size_t i = 0; i < consumed.size(); ++i) {
            std::uint64_t b = consumed[i].at("bridge").get<std::uint64_t>();
            if (i >= q.size() || q[i] != b) {
                flag("fifo", "burn consumed bridge " + std::to_string(b) + " out of queue order");
                return;
            }
        }
    }

    void check_settlement(const json& p)
    {
        ++settlements_;
        auto y = rate_of(p.value("y", ""));
        if (!y) return flag("invariant2", "unparseable rate");
        I128 w = geti(p, "w"), d = geti(p, "d_recv"), e = geti(p, "eth");
        if (d < 0 || d > w) flag("invariant2", "d_recv " + i128_str(d) + " outside [0, " + i128_str(w) + "]");
        // eth = (w - d_recv) / y  <=>  eth * num = (w - d_recv) * den
        if (e * y->num() != (w - d) * y->den())
            flag("invariant2", "eth " + i128_str(e) + " != (w - d_recv) / y for w=" + i128_str(w) +
                                   " d_recv=" + i128_str(d) + " y=" + y->to_string());
    }

    void check_mode(const std::string& kind, const std::string& mode)
    {
        static const std::set<std::string> enter = {"submit", "backtrack", "deep_chunk"};
        static const std::set<std::string> leave = {"accept", "commitment_challenge", "deep_finalized"};
        if (mode != mode_) {
            bool ok = mode == "Verification" ? enter.count(kind) : leave.count(kind);
            if (!ok) flag("mode", mode_ + " -> " + mode + " on " + kind);
            mode_ = mode;
        }
    }

    template <typename M>
    void compare_map(const char* what, const M& shadow, const json& snap)
    {
        std::set<std::string> keys;
        for (const auto& [k, v] : shadow)
            if (v != 0) keys.insert(k);
        for (auto it = snap.begin(); it != snap.end(); ++it)
            if (it.value().get<std::int64_t>() != 0) keys.insert(it.key());
        for (const auto& k : keys) {
            auto it = shadow.find(k);
            std::int64_t sv = it == shadow.end() ? 0 : it->second;
            std::int64_t cv = snap.contains(k) ? snap[k].get<std::int64_t>() : 0;
            if (sv != cv)
                flag("snapshot", std::string(what) + "[" + k + "] shadow " + std::to_string(sv) + " != reported " +
                                     std::to_string(cv));
        }
    }

    void check_snapshot(const json& s)
    {
        auto scalar = [&](const char* key, std::int64_t shadow) {
            std::int64_t v = geti(s, key);
            if (v != shadow)
                flag("snapshot", std::string(key) + " shadow " + std::to_string(shadow) + " != reported " +
                                     std::to_string(v));
        };
        scalar("received", received_);
        scalar("paid_out", paid_out_);
        scalar("destroyed", destroyed_);
        scalar("oracle_fees", oracle_fees_);
        compare_map("supply", supply_, s.value("supply", json::object()));
        compare_map("backing", backing_, s.value("backing", json::object()));
        compare_map("escrow", escrow_, s.value("escrow", json::object()));

        std::int64_t used = geti(s, "used_count");
        if (used < last_used_count_) flag("used_txs", "used count decreased");
        if (static_cast<std::size_t>(used) != used_.size())
            flag("used_txs", "used count " + std::to_string(used) + " != shadow " + std::to_string(used_.size()));
        last_used_count_ = used;

        std::int64_t held = geti(s, "held");
        if (received_ != paid_out_ + destroyed_ + oracle_fees_ + held)
            flag("conservation", "received " + std::to_string(received_) + " != paid_out + destroyed + fees + held (" +
                                     std::to_string(paid_out_ + destroyed_ + oracle_fees_ + held) + ")");
        if (held < 0) flag("conservation", "negative holdings");
    }

    void check_backing()
    {
        std::set<std::string> ys;
        for (const auto& m : {&supply_, &backing_, &escrow_, &owed_})
            for (const auto& [k, v] : *m) ys.insert(k);
        for (const auto& k : ys) {
            auto y = rate_of(k);
            if (!y) {
                flag("invariant1", "unparseable rate " + k);
                continue;
            }
            // supply = y * backing  <=>  supply * den = num * backing
            I128 lhs = static_cast<I128>(supply_[k]) * y->den();
            I128 rhs = static_cast<I128>(backing_[k]) * y->num();
            if (lhs != rhs)
                flag("invariant1", "y=" + k + " supply " + std::to_string(supply_[k]) + " != y * backing " +
                                       std::to_string(backing_[k]));
            I128 el = static_cast<I128>(owed_[k]) * y->den();
            I128 er = static_cast<I128>(escrow_[k]) * y->num();
            if (el != er)
                flag("invariant1", "y=" + k + " owed " + std::to_string(owed_[k]) + " != y * escrow " +
                                       std::to_string(escrow_[k]));
            ++identity_checks_;
        }
    }

    void finish_stats()
    {
        report_.stats = {{"events", events_},
                         {"contract_events", contract_events_},
                         {"identity_checks", identity_checks_},
                         {"settlements", settlements_},
                         {"quiescent_points", quiescent_points_},
                         {"history_entries_checked", entries_checked_},
                         {"kinds", kinds_}};
        if (events_ > 0 && !saw_end_) report_.warnings.push_back("NoScenarioEnd");
    }

    AuditReport report_;
    std::uint64_t seq_ = 0;
    bool have_prev_ = false;
    std::uint64_t prev_seq_ = 0;
    std::uint64_t prev_t_ = 0;
    std::set<std::string> tags_;
    std::string mode_ = "Listening";

    std::map<std::string, std::int64_t> supply_, backing_, escrow_, owed_;
    std::int64_t received_ = 0, paid_out_ = 0, destroyed_ = 0, oracle_fees_ = 0;
    std::set<std::string> used_;
    std::int64_t last_used_count_ = 0;
    std::map<std::string, std::deque<std::uint64_t>> queues_;

    std::map<Hash, HeaderNode> headers_;
    std::optional<Hash> best_;

    std::uint64_t events_ = 0, contract_events_ = 0, identity_checks_ = 0, settlements_ = 0, quiescent_points_ = 0,
                  entries_checked_ = 0;
    bool saw_end_ = false;
    std::map<std::string, std::uint64_t> kinds_;
};

} // namespace

AuditReport audit_events(const std::vector<json>& events) { return Auditor{}.run(events); }

Result<AuditReport, ParseError> audit_trace(const std::vector<std::string>& lines)
{
    auto events = parse_trace(lines);
    if (!events) return fail(events.error());
    return audit_events(*events);
}

} // namespace dogebridge
