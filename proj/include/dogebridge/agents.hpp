// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/amount.hpp>
#include <dogebridge/chain.hpp>
#include <dogebridge/clock.hpp>
#include <dogebridge/contract.hpp>
#include <dogebridge/result.hpp>

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace dogebridge {

// ---------------------------------------------------------------------------
// exchange-rate path

struct RatePoint {
    SimTime t = 0;
    Rate rate;
};

enum class RateError { EmptyPath, Unsorted, BeforeStart };
const char* to_string(RateError e);

/** Piecewise-constant DOGE-per-ETH schedule. */
class RatePath {
public:
    RatePath() = default;
    static Result<RatePath, RateError> make(std::vector<RatePoint> points);

    Result<Rate, RateError> rate_at(SimTime t) const;
    const std::vector<RatePoint>& points() const { return points_; }
    /// Smallest rate on the whole path.
    Rate minimum() const;

private:
    std::vector<RatePoint> points_;
};

// ---------------------------------------------------------------------------
// parameter parsing with field paths

struct ConfigError {
    std::string path;
    std::string message;
};

/**
 * Reads typed fields out of a JSON object, remembering the first error with
 * its full path. Unknown keys are reported by finish().
 */
class ParamReader {
public:
    ParamReader(const nlohmann::json& obj, std::string path);

    std::uint64_t u64(const char* key, std::uint64_t def);
    std::int64_t i64(const char* key, std::int64_t def);
    bool boolean(const char* key, bool def);
    std::string str(const char* key, const std::string& def);
    Eth eth(const char* key, Eth def);
    Doge doge(const char* key, Doge def);
    Wow wow(const char* key, Wow def);
    std::optional<Doge> opt_doge(const char* key);
    Rate rate(const char* key, Rate def);
    std::optional<Rate> opt_rate(const char* key);
    Ratio ratio(const char* key, Ratio def);
    std::optional<SimTime> opt_time(const char* key);
    const nlohmann::json* raw(const char* key);

    void error(const std::string& sub, const std::string& message);
    std::string path(const char* key) const { return path_ + "." + key; }
    bool ok() const { return !error_; }
    const std::optional<ConfigError>& first_error() const { return error_; }
    /// Flags keys that were never read.
    Status<ConfigError> finish();

private:
    const nlohmann::json* get(const char* key);

    const nlohmann::json& obj_;
    std::string path_;
    std::vector<std::string> seen_;
    std::optional<ConfigError> error_;
};

// ---------------------------------------------------------------------------
// actions

namespace act {
struct SendDoge { DogeAddress from; DogeAddress to; Doge amount; EthAddress memo; };
struct OpenBridge { Eth x; Rate y; DogeAddress head; CrossingFee fee; std::optional<Doge> min_lock; Eth bounty; };
struct Register { DogeAddress head; DogeAddress sender; EthAddress mint_to; Eth deposit; };
struct BecomeRelayer { Eth deposit; };
struct WithdrawRelayer {};
struct Submit { std::uint64_t range = 0; Hash commitment; Hash witness; };
struct ChallengeRange { std::uint64_t range = 0; Hash commitment; Hash witness; };
struct ChallengeCommitment { std::uint64_t epoch = 0; };
struct SupplyProof { ThreadId thread = 0; ExtensionProof proof; };
struct ReportLock { TxReport report; };
struct BurnWow { Rate y; Wow w; DogeAddress dest; };
struct ReportUnlock { BurnId burn = 0; TxReport report; };
struct ReportMissing { Rate y; Wow n; TxReport report; };
struct Backtrack { std::size_t from_index = 0; std::uint64_t range = 0; Hash commitment; Hash witness; };
struct ProposeDeep { std::size_t from_index = 0; std::uint64_t range = 0; Hash commitment; Hash witness; };
struct ObjectDeep {};
struct TransferWow { EthAddress to; Rate y; Wow amount; };
struct PublishBlocks { std::vector<Block> blocks; };
} // namespace act

using Action = std::variant<act::SendDoge, act::OpenBridge, act::Register, act::BecomeRelayer, act::WithdrawRelayer,
                            act::Submit, act::ChallengeRange, act::ChallengeCommitment, act::SupplyProof,
                            act::ReportLock, act::BurnWow, act::ReportUnlock, act::ReportMissing, act::Backtrack,
                            act::ProposeDeep, act::ObjectDeep, act::TransferWow, act::PublishBlocks>;

const char* action_name(const Action& a);

// ---------------------------------------------------------------------------
// observation

struct AgentIdentity {
    std::string name;
    EthAddress eth;
    DogeAddress doge;

    static AgentIdentity of(const std::string& name);
};

/** Dogecoin address of an operator's i-th bridge head. */
DogeAddress head_address(const std::string& operator_name, std::uint32_t index);

struct Observation {
    SimTime now = 0;
    std::uint64_t eth = 0;
    const ChainView* chain = nullptr;
    Hash tip;
    const BridgeContract* contract = nullptr;
    Rate true_rate;
    AgentIdentity self;
    Eth eth_balance;
    /// Spendable DOGE of an address on the visible best chain, net of pending sends.
    std::function<Doge(const DogeAddress&)> doge_spendable;
    const std::map<std::string, AgentIdentity>* directory = nullptr;

    std::uint64_t tip_ordinal() const { return chain->at(tip).block.header.ordinal; }
    const AgentIdentity* peer(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// chain reading helpers shared by policies

struct ChainTx {
    std::uint64_t ordinal = 0;
    std::size_t index = 0;
    const Transaction* tx = nullptr;
};

/** Transactions on tip's ancestor path with ordinals in [from, to] matching pred. */
std::vector<ChainTx> scan_txs(const ChainView& view, const Hash& tip, std::uint64_t from, std::uint64_t to,
                              const std::function<bool(const Transaction&)>& pred);

/** Largest range whose c-block witness the tip already covers. */
std::uint64_t maximal_range(const ChainView& view, const Hash& tip, std::uint64_t c);

/** Index of the first history entry that disagrees with the chain, if any. */
std::optional<std::size_t> first_divergent_entry(const BridgeContract& contract, const ChainView& view,
                                                 const Hash& tip);

/** History entry covering an ordinal, if the contract has accepted it. */
std::optional<std::size_t> entry_covering(const BridgeContract& contract, std::uint64_t ordinal);

/** Inclusion report for tx `index` of the block at `ordinal`, when the covering entry matches the chain. */
std::optional<TxReport> build_tx_report(const BridgeContract& contract, const ChainView& view, const Hash& tip,
                                        std::uint64_t ordinal, std::size_t index);

/// Locked DOGE is worth more than the remaining collateral at the true rate.
bool should_abscond(Doge locked, Eth collateral, Rate true_rate);
/// The true rate is within margin h above y.
bool hodler_should_burn(Rate true_rate, Rate y, Ratio h);
/// The true rate clears y by at least margin m.
bool crosser_comfortable(Rate true_rate, Rate y, Ratio m);

// ---------------------------------------------------------------------------
// policies

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::vector<Action> step(const Observation& obs, std::mt19937_64& rng) = 0;
    /// Dogecoin addresses besides its own that the agent may spend from.
    virtual std::vector<DogeAddress> controlled() const { return {}; }
};

struct PolicyContext {
    AgentIdentity self;
    ProtocolParams params;
    CostModel cost;
    ChainParams chain;
    Eth required_deposit;
};

Result<std::unique_ptr<Policy>, ConfigError> make_policy(const std::string& policy_id, const PolicyContext& ctx,
                                                         const nlohmann::json& params, const std::string& path);

const std::vector<std::string>& policy_ids();

} // namespace dogebridge
