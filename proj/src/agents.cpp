// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "agents_internal.hpp"

#include <algorithm>

namespace dogebridge {

using json = nlohmann::json;

const char* to_string(RateError e)
{
    switch (e) {
    case RateError::EmptyPath: return "EmptyPath";
    case RateError::Unsorted: return "Unsorted";
    case RateError::BeforeStart: return "BeforeStart";
    }
    return "?";
}

Result<RatePath, RateError> RatePath::make(std::vector<RatePoint> points)
{
    if (points.empty()) return fail(RateError::EmptyPath);
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].t <= points[i - 1].t) return fail(RateError::Unsorted);
    RatePath p;
    p.points_ = std::move(points);
    return p;
}

Result<Rate, RateError> RatePath::rate_at(SimTime t) const
{
    if (points_.empty()) return fail(RateError::EmptyPath);
    if (t < points_.front().t) return fail(RateError::BeforeStart);
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](SimTime v, const RatePoint& p) { return v < p.t; });
    return std::prev(it)->rate;
}

Rate RatePath::minimum() const
{
    Rate m = points_.front().rate;
    for (const auto& p : points_) m = std::min(m, p.rate);
    return m;
}

// ---------------------------------------------------------------------------

ParamReader::ParamReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
{
    if (!obj_.is_null() && !obj_.is_object()) error_ = ConfigError{path_, "expected an object"};
}

const json* ParamReader::get(const char* key)
{
    seen_.emplace_back(key);
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
}

void ParamReader::error(const std::string& sub, const std::string& message)
{
    if (!error_) error_ = ConfigError{sub, message};
}

const json* ParamReader::raw(const char* key) { return get(key); }

namespace {

// Parsed text yields unsigned numbers, built-in-code JSON signed ones.
bool non_negative_integer(const json& v)
{
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

} // namespace

std::uint64_t ParamReader::u64(const char* key, std::uint64_t def)
{
    const json* v = get(key);
    if (!v) return def;
    if (!non_negative_integer(*v)) {
        error(path(key), "expected a non-negative integer");
        return def;
    }
    return v->get<std::uint64_t>();
}

std::int64_t ParamReader::i64(const char* key, std::int64_t def)
{
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_number_integer()) {
        error(path(key), "expected an integer");
        return def;
    }
    return v->get<std::int64_t>();
}

bool ParamReader::boolean(const char* key, bool def)
{
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_boolean()) {
        error(path(key), "expected true or false");
        return def;
    }
    return v->get<bool>();
}

std::string ParamReader::str(const char* key, const std::string& def)
{
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_string()) {
        error(path(key), "expected a string");
        return def;
    }
    return v->get<std::string>();
}

namespace {

std::optional<std::int64_t> coin_units(const json& v)
{
    if (!v.is_string()) return std::nullopt;
    return parse_coin_amount(v.get<std::string>());
}

std::optional<Rate> rate_of(const json& v)
{
    if (v.is_number_integer()) return Rate::make(v.get<std::int64_t>(), 1);
    if (v.is_string()) return Rate::parse(v.get<std::string>());
    return std::nullopt;
}

} // namespace

#define DOGEBRIDGE_AMOUNT_READER(Name, Type)                                                  \
    Type ParamReader::Name(const char* key, Type def)                                         \
    {                                                                                         \
        const json* v = get(key);                                                             \
        if (!v) return def;                                                                   \
        auto u = coin_units(*v);                                                              \
        if (!u || *u < 0) {                                                                   \
            error(path(key), "expected a non-negative coin amount string such as \"1.5\""); \
            return def;                                                                       \
        }                                                                                     \
        return Type{*u};                                                                      \
    }

DOGEBRIDGE_AMOUNT_READER(eth, Eth)
DOGEBRIDGE_AMOUNT_READER(doge, Doge)
DOGEBRIDGE_AMOUNT_READER(wow, Wow)
#undef DOGEBRIDGE_AMOUNT_READER

std::optional<Doge> ParamReader::opt_doge(const char* key)
{
    const json* v = get(key);
    if (!v || v->is_null()) return std::nullopt;
    auto u = coin_units(*v);
    if (!u || *u < 0) {
        error(path(key), "expected a non-negative coin amount string");
        return std::nullopt;
    }
    return Doge{*u};
}

Rate ParamReader::rate(const char* key, Rate def)
{
    const json* v = get(key);
    if (!v) return def;
    auto r = rate_of(*v);
    if (!r) {
        error(path(key), "expected a positive rate such as 100 or \"1/2\"");
        return def;
    }
    return *r;
}

std::optional<Rate> ParamReader::opt_rate(const char* key)
{
    const json* v = get(key);
    if (!v || v->is_null()) return std::nullopt;
    auto r = rate_of(*v);
    if (!r) error(path(key), "expected a positive rate such as 100 or \"1/2\"");
    return r;
}

Ratio ParamReader::ratio(const char* key, Ratio def)
{
    const json* v = get(key);
    if (!v) return def;
    if (non_negative_integer(*v)) return Ratio::of(v->get<std::int64_t>(), 1);
    if (v->is_string()) {
        auto r = Rate::parse(v->get<std::string>());
        if (r) return Ratio::of(r->num(), r->den());
        if (v->get<std::string>() == "0") return Ratio::of(0, 1);
    }
    error(path(key), "expected a non-negative ratio such as \"1/100\"");
    return def;
}

std::optional<SimTime> ParamReader::opt_time(const char* key)
{
    const json* v = get(key);
    if (!v || v->is_null()) return std::nullopt;
    if (!non_negative_integer(*v)) {
        error(path(key), "expected simulated seconds");
        return std::nullopt;
    }
    return v->get<SimTime>();
}

Status<ConfigError> ParamReader::finish()
{
    if (!error_ && obj_.is_object()) {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
                error(path_ + "." + it.key(), "unknown field");
                break;
            }
    }
    if (error_) return fail(*error_);
    return Unit{};
}

// ---------------------------------------------------------------------------

const char* action_name(const Action& a)
{
    static const char* const names[] = {
        "SendDoge",    "OpenBridge",     "Register",        "BecomeRelayer", "WithdrawRelayer", "SubmitExtension",
        "ChallengeRange", "ChallengeCommitment", "SupplyProof", "ReportLock",  "BurnWow",         "ReportUnlock",
        "ReportMissing", "Backtrack",     "ProposeDeep",     "ObjectDeep",    "TransferWow",     "PublishBlocks",
    };
    return names[a.index()];
}

AgentIdentity AgentIdentity::of(const std::string& name)
{
    return AgentIdentity{name, derive_address<EthTagAddr>("eth", name), derive_address<DogeTagAddr>("doge", name)};
}

DogeAddress head_address(const std::string& operator_name, std::uint32_t index)
{
    return derive_address<DogeTagAddr>("head", operator_name + "#" + std::to_string(index));
}

const AgentIdentity* Observation::peer(const std::string& name) const
{
    if (!directory) return nullptr;
    auto it = directory->find(name);
    return it == directory->end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

std::vector<ChainTx> scan_txs(const ChainView& view, const Hash& tip, std::uint64_t from, std::uint64_t to,
                              const std::function<bool(const Transaction&)>& pred)
{
    std::vector<ChainTx> out;
    const ChainView::Entry* e = view.find(tip);
    while (e && e->block.header.ordinal > to) e = view.find(e->block.header.parent);
    while (e && e->block.header.ordinal >= from) {
        const auto& txs = e->block.txs;
        for (std::size_t i = txs.size(); i-- > 0;)
            if (pred(txs[i])) out.push_back(ChainTx{e->block.header.ordinal, i, &txs[i]});
        if (e->block.header.ordinal == 0) break;
        e = view.find(e->block.header.parent);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::uint64_t maximal_range(const ChainView& view, const Hash& tip, std::uint64_t c)
{
    std::uint64_t h = view.at(tip).block.header.ordinal;
    return h > c ? h - c : 0;
}

namespace {

bool entry_matches(const HistoryEntry& e, const ChainView& view, const Hash& tip)
{
    auto headers = view.headers_range(tip, e.prior_date + 1, e.range);
    return headers && header_commitment(*headers) == e.commitment;
}

} // namespace

std::optional<std::size_t> first_divergent_entry(const BridgeContract& contract, const ChainView& view,
                                                 const Hash& tip)
{
    const auto& h = contract.history();
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!entry_matches(h[i], view, tip)) return i;
    return std::nullopt;
}

std::optional<std::size_t> entry_covering(const BridgeContract& contract, std::uint64_t ordinal)
{
    const auto& h = contract.history();
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i].prior_date < ordinal && ordinal <= h[i].range) return i;
    return std::nullopt;
}

std::optional<TxReport> build_tx_report(const BridgeContract& contract, const ChainView& view, const Hash& tip,
                                        std::uint64_t ordinal, std::size_t index)
{
    auto idx = entry_covering(contract, ordinal);
    if (!idx) return std::nullopt;
    const HistoryEntry& e = contract.history()[*idx];
    auto headers = view.headers_range(tip, e.prior_date + 1, e.range);
    if (!headers || header_commitment(*headers) != e.commitment) return std::nullopt;
    auto hash = view.ancestor_at(tip, ordinal);
    if (!hash) return std::nullopt;
    const Block& block = view.at(*hash).block;
    if (index >= block.txs.size()) return std::nullopt;

    std::vector<Bytes> leaves;
    leaves.reserve(headers->size());
    for (const auto& h : *headers) leaves.push_back(h.encode());
    TxReport r;
    r.history_index = *idx;
    r.header = block.header;
    r.header_proof = merkle_prove(leaves, ordinal - e.prior_date - 1);
    r.tx = block.txs[index];
    r.tx_proof = merkle_prove(encode_txs(block.txs), index);
    return r;
}

bool should_abscond(Doge locked, Eth collateral, Rate true_rate)
{
    // locked / rate > collateral, with rate = num/den DOGE per ETH
    __int128 lhs = static_cast<__int128>(locked.units) * true_rate.den();
    __int128 rhs = static_cast<__int128>(collateral.units) * true_rate.num();
    return lhs > rhs;
}

namespace {

// rate vs (1 + m) * y, compared exactly
int compare_with_margin(Rate rate, Rate y, Ratio m)
{
    __int128 lhs = static_cast<__int128>(rate.num()) * y.den() * m.den;
    __int128 rhs = static_cast<__int128>(y.num()) * (m.den + m.num) * rate.den();
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

} // namespace

bool hodler_should_burn(Rate true_rate, Rate y, Ratio h) { return compare_with_margin(true_rate, y, h) < 0; }

bool crosser_comfortable(Rate true_rate, Rate y, Ratio m) { return compare_with_margin(true_rate, y, m) >= 0; }

// ---------------------------------------------------------------------------

namespace detail {

std::vector<Block> mine_side_chain(const ChainView& view, const Hash& parent, std::size_t count, std::size_t forged,
                                   SimTime time, std::mt19937_64& rng)
{
    std::vector<Block> out;
    const ChainParams& cp = view.params();
    BlockHeader prev = view.at(parent).block.header;
    Hash prev_hash = parent;
    for (std::size_t i = 0; i < count; ++i) {
        BlockHeader h;
        h.parent = prev_hash;
        h.tx_root = empty_tx_root();
        h.ordinal = prev.ordinal + 1;
        h.timestamp = time;
        h.target = cp.target;
        std::uint64_t start = rng();
        if (i + forged < count) {
            h.nonce = search_nonce(h, cp.pow, start).nonce;
        } else {
            h.nonce = start;
            while (pow_check(h, cp.pow)) ++h.nonce;
        }
        out.push_back(Block{h, {}});
        prev = h;
        prev_hash = h.hash();
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------

const std::vector<std::string>& policy_ids()
{
    static const std::vector<std::string> ids = {
        "honest_relayer",   "lazy_relayer",      "orphan_attacker", "high_range_attacker", "dos_challenger",
        "gap_exploiter",    "honest_operator",   "rational_operator", "honest_crosser",    "vigilant_hodler",
        "greedy_reporter",  "random_actor",
    };
    return ids;
}

Result<std::unique_ptr<Policy>, ConfigError> make_policy(const std::string& policy_id, const PolicyContext& ctx,
                                                         const json& params, const std::string& path)
{
    ParamReader r(params, path);
    std::unique_ptr<Policy> p;
    if (policy_id == "honest_relayer") p = detail::make_honest_relayer(ctx, r, false);
    else if (policy_id == "lazy_relayer") p = detail::make_honest_relayer(ctx, r, true);
    else if (policy_id == "orphan_attacker") p = detail::make_orphan_attacker(ctx, r);
    else if (policy_id == "high_range_attacker") p = detail::make_high_range_attacker(ctx, r);
    else if (policy_id == "dos_challenger") p = detail::make_dos_challenger(ctx, r);
    else if (policy_id == "gap_exploiter") p = detail::make_gap_exploiter(ctx, r);
    else if (policy_id == "honest_operator") p = detail::make_operator(ctx, r, false);
    else if (policy_id == "rational_operator") p = detail::make_operator(ctx, r, true);
    else if (policy_id == "honest_crosser") p = detail::make_crosser(ctx, r);
    else if (policy_id == "vigilant_hodler") p = detail::make_hodler(ctx, r);
    else if (policy_id == "greedy_reporter") p = detail::make_reporter(ctx, r);
    else if (policy_id == "random_actor") p = detail::make_random_actor(ctx, r);
    else return fail(ConfigError{path, "unknown policy '" + policy_id + "'"});
    auto done = r.finish();
    if (!done) return fail(done.error());
    return p;
}

} // namespace dogebridge
