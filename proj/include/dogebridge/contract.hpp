// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/amount.hpp>
#include <dogebridge/chain.hpp>
#include <dogebridge/clock.hpp>
#include <dogebridge/merkle.hpp>
#include <dogebridge/params.hpp>
#include <dogebridge/proof.hpp>
#include <dogebridge/result.hpp>

#include <json.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dogebridge {

using BridgeId = std::uint64_t;
using BurnId = std::uint64_t;
using ThreadId = std::uint64_t;

enum class ContractError {
    BadParams,
    BadCollateral,
    HeadInUse,
    NoSuchBridge,
    BridgeNotOpen,
    AlreadyRegistered,
    InsufficientDeposit,
    NotARelayer,
    ActiveOrPending,
    NotListening,
    NotVerifying,
    RangeNotAhead,
    RangeTooLong,
    WindowNotElapsed,
    WindowElapsed,
    SecondChallenge,
    UnknownThread,
    NotThreadRelayer,
    ProofAlreadySupplied,
    ProofLate,
    InsufficientBalance,
    InexactAmount,
    InsufficientQueue,
    UnknownBurn,
    NotElapsed,
    AlreadySettled,
    BadIndex,
    TooDeep,
    NotStuck,
    DeepPending,
    NoDeepProposal,
};

const char* to_string(ContractError e);

enum class RelayMode { Listening, Verification };
const char* to_string(RelayMode m);

/** Crossing fee in WOW[y]: flat part plus a rate on the minted amount. */
struct CrossingFee {
    Wow flat;
    Ratio rate = Ratio::of(0, 1);

    Wow on(Wow minted) const { return Wow{flat.units + rate.floor_mul(minted.units)}; }
    bool operator==(const CrossingFee&) const = default;
};

enum class BridgeState { Open, Queued, Closed };
const char* to_string(BridgeState s);

struct Bridge {
    BridgeId id = 0;
    EthAddress operator_addr;
    Eth collateral;
    Eth initial_collateral;
    Rate y;
    DogeAddress head;
    CrossingFee fee;
    std::optional<Doge> min_lock;
    Eth burn_bounty;
    bool bounty_paid = false;
    BridgeState state = BridgeState::Open;
    std::uint32_t pending_obligations = 0;

    bool minted() const { return state != BridgeState::Open; }
    /// DOGE (= WOW units) still backed by collateral.
    Wow backed() const;
};

struct Registration {
    EthAddress crosser;
    DogeAddress sender;
    EthAddress mint_to;
    Eth deposit;
    std::uint64_t registered_at_date = 0;
    std::uint64_t expiry = 0;
};

struct HistoryEntry {
    Hash commitment;
    Hash witness;
    std::uint64_t range = 0;
    std::uint64_t prior_date = 0;
    std::uint64_t submitted_at_eth = 0;
    SimTime accepted_at = 0;
    EthAddress relayer;
    /// Position in the global acceptance order; survives truncation.
    std::uint64_t accept_seq = 0;

    std::uint64_t leaf_count() const { return range - prior_date; }
};

struct RelayerAccount {
    Eth deposit;
    std::uint32_t pending_threads = 0;
};

struct PenaltyHold {
    EthAddress displaced;
    Eth amount;
};

struct ActiveVerification {
    std::uint64_t epoch = 0;
    Submission sub;
    std::uint64_t window_start_eth = 0;
    std::uint64_t prior_date = 0;
    /// History entries kept before this submission is appended.
    std::size_t keep = 0;
    bool backtrack = false;
    std::optional<PenaltyHold> penalty;
};

struct ProofThread {
    ThreadId id = 0;
    std::uint64_t epoch = 0;
    Submission sub;
    ExtensionBase base;
    EthAddress relayer;
    EthAddress challenger;
    SimTime deadline = 0;
    std::optional<SimTime> verdict_at;
    std::optional<ProofVerdict> verdict;
    std::optional<PenaltyHold> penalty;
    bool resolved = false;
};

enum class ObligationStatus { Pending, Unlocked, TimedOut };

struct Obligation {
    BridgeId bridge = 0;
    Wow owed;
    Eth escrow;
    ObligationStatus status = ObligationStatus::Pending;
};

struct Burn {
    BurnId id = 0;
    EthAddress hodler;
    Rate y;
    Wow w;
    DogeAddress dest;
    std::uint64_t deadline_eth = 0;
    std::uint64_t burn_accept_seq = 0;
    std::vector<Obligation> obligations;
    Doge d_recv;
    Eth eth_recv;
    bool complete = false;
};

struct DeepProposal {
    EthAddress proposer;
    std::size_t keep = 0;
    Submission sub;
    SimTime proposed_at = 0;
};

/** Transaction inclusion proof against a history entry: header in commitment, tx in header. */
struct TxReport {
    std::size_t history_index = 0;
    BlockHeader header;
    MerkleProof header_proof;
    Transaction tx;
    MerkleProof tx_proof;
};

struct ReportOutcome {
    bool applied = false;
    std::string reason;

    static ReportOutcome ok() { return {true, ""}; }
    static ReportOutcome ignored(std::string why) { return {false, std::move(why)}; }
};

enum class Verdict { Accept, Reject, TimedOut };
const char* to_string(Verdict v);

enum class RangeChallengeOutcome { Ignored, Replaced };

struct EthPayment {
    EthAddress to;
    Eth amount;
    std::string reason;
};

/** One state transition, with the ledger deltas and snapshot the auditor replays. */
struct ContractEvent {
    std::string kind;
    std::string actor;
    nlohmann::json payload;
};

/**
 * The bridge contract state machine. All ETH handed to the contract is
 * debited by the caller; ETH leaving it is queued in the outbox.
 */
class BridgeContract {
public:
    static Result<BridgeContract, ContractError> genesis(const ProtocolParams& params, const CostModel& cost,
                                                         const ClockParams& clock, const ChainParams& chain);

    // bridge opening and locking
    Result<BridgeId, ContractError> open_bridge(const EthAddress& op, Eth x, Rate y, const DogeAddress& head,
                                                CrossingFee fee, std::optional<Doge> min_lock, Eth burn_bounty,
                                                SimTime now);
    Status<ContractError> register_crossing(const EthAddress& crosser, const DogeAddress& head,
                                            const DogeAddress& sender, const EthAddress& mint_to, Eth deposit,
                                            SimTime now);
    std::vector<DogeAddress> expire_registrations(std::uint64_t previous_date, SimTime now);

    // relay
    Status<ContractError> become_relayer(const EthAddress& who, Eth deposit, SimTime now);
    Result<Eth, ContractError> withdraw_relayer_deposit(const EthAddress& who, SimTime now);
    Status<ContractError> submit_extension(const EthAddress& relayer, std::uint64_t range, const Hash& commitment,
                                           const Hash& witness, SimTime now);
    Status<ContractError> accept_on_timeout(SimTime now);
    Result<RangeChallengeOutcome, ContractError> challenge_range(const EthAddress& challenger, std::uint64_t range,
                                                                 const Hash& commitment, const Hash& witness,
                                                                 SimTime now);
    Result<ThreadId, ContractError> challenge_commitment(const EthAddress& challenger, std::uint64_t epoch,
                                                         SimTime now);
    Status<ContractError> supply_proof(const EthAddress& relayer, ThreadId thread, const ExtensionProof& proof,
                                       SimTime now);
    Status<ContractError> resolve_proof(ThreadId thread, Verdict verdict, SimTime now);

    // minting and unlocking
    ReportOutcome report_lock(const EthAddress& reporter, const TxReport& report, SimTime now);
    Result<BurnId, ContractError> burn_wow(const EthAddress& hodler, Rate y, Wow w, const DogeAddress& dest,
                                           SimTime now);
    ReportOutcome report_unlock(const EthAddress& reporter, BurnId burn, const TxReport& report, SimTime now);
    Result<Eth, ContractError> unlock_timeout(BurnId burn, SimTime now);
    Result<ReportOutcome, ContractError> report_missing_doge(const EthAddress& hodler, Rate y, Wow n,
                                                             const TxReport& report, SimTime now);
    Status<ContractError> wow_transfer(const EthAddress& from, const EthAddress& to, Rate y, Wow amount,
                                       SimTime now);

    // backtracking
    Status<ContractError> backtrack(const EthAddress& relayer, std::size_t from_index, std::uint64_t range,
                                    const Hash& commitment, const Hash& witness, SimTime now);
    Status<ContractError> propose_deep(const EthAddress& proposer, std::size_t from_index, std::uint64_t range,
                                       const Hash& commitment, const Hash& witness, SimTime now);
    Status<ContractError> object_deep(const EthAddress& objector, SimTime now);
    Status<ContractError> deep_backtrack_chunk(const EthAddress& relayer, std::size_t from_index,
                                               std::uint64_t range, const Hash& commitment, const Hash& witness,
                                               SimTime now);

    /** Fires every timer due at `now`: window acceptance, proof deadlines and verdicts, unlock timeouts, deep finalization. */
    void on_tick(SimTime now);
    /** Earliest pending timer strictly after `now`, if any. */
    std::optional<SimTime> next_timer(SimTime now) const;

    // observation
    const ProtocolParams& params() const { return params_; }
    const CostModel& cost_model() const { return cost_; }
    const ClockParams& clock() const { return clock_; }
    const ChainParams& chain_params() const { return chain_; }
    std::uint64_t challenge_window() const { return window_; }
    Eth required_deposit() const { return required_deposit_; }

    std::uint64_t current_date() const { return current_date_; }
    RelayMode mode() const { return active_ ? RelayMode::Verification : RelayMode::Listening; }
    const std::optional<ActiveVerification>& active() const { return active_; }
    const std::vector<HistoryEntry>& history() const { return history_; }
    const std::map<BridgeId, Bridge>& bridges() const { return bridges_; }
    const Bridge* bridge(BridgeId id) const;
    const Bridge* open_bridge_at(const DogeAddress& head) const;
    const Bridge* live_bridge_at(const DogeAddress& head) const;
    const std::map<DogeAddress, Registration>& registrations() const { return registrations_; }
    const std::map<EthAddress, RelayerAccount>& relayers() const { return relayers_; }
    bool is_relayer(const EthAddress& who) const;
    const std::map<ThreadId, ProofThread>& threads() const { return threads_; }
    const std::map<BurnId, Burn>& burns() const { return burns_; }
    const std::set<Hash>& used_txs() const { return used_txs_; }
    const std::optional<DeepProposal>& deep_proposal() const { return deep_; }
    std::deque<BridgeId> queue(Rate y) const;
    const std::map<Rate, std::deque<BridgeId>>& queues() const { return queues_; }
    Wow wow_balance(const EthAddress& who, Rate y) const;
    Wow wow_supply(Rate y) const;
    const std::map<Rate, std::map<EthAddress, Wow>>& wow_balances() const { return wow_; }
    SimTime last_progress() const { return last_progress_; }
    std::uint64_t accept_count() const { return accept_seq_; }
    std::uint64_t eth_now(SimTime now) const { return ethereum_time(now, clock_); }
    /// History base that a new extension from `keep` entries would build on.
    ExtensionBase base_at(std::size_t keep) const;

    struct Totals {
        Eth received;
        Eth paid_out;
        Eth destroyed;
        Eth oracle_fees;
    };
    const Totals& totals() const { return totals_; }
    /** Sum of every bucket the contract currently holds. */
    Eth held() const;
    Eth retained() const { return retained_; }

    std::vector<EthPayment> drain_outbox();
    std::vector<ContractEvent> drain_events();

    /** SHA-256 over a canonical encoding of the full state. */
    Hash state_digest() const;

private:
    BridgeContract() = default;

    // relay helpers
    void enter_verification(const EthAddress& relayer, std::size_t keep, std::uint64_t range, const Hash& commitment,
                            const Hash& witness, bool backtrack, SimTime now);
    void append_entry(std::size_t keep, const Submission& sub, std::uint64_t prior_date, SimTime now);
    void release_penalty(std::optional<PenaltyHold>& hold, bool refund, nlohmann::json& deltas);
    Eth debit_deposit(const EthAddress& who, Eth amount);
    std::uint64_t prior_date_at(std::size_t keep) const;
    void settle_timed_out_threads(SimTime now);
    void finalize_deep(SimTime now);

    // peg helpers
    struct Located {
        const HistoryEntry* entry = nullptr;
        std::uint64_t ordinal = 0;
        std::string failure;
    };
    Located locate(const TxReport& report) const;
    void credit_wow(Rate y, const EthAddress& who, Wow amount, nlohmann::json& deltas);
    bool debit_wow(Rate y, const EthAddress& who, Wow amount, nlohmann::json& deltas);
    void pay(const EthAddress& to, Eth amount, const std::string& reason, nlohmann::json& deltas);
    void maybe_close(Bridge& b, nlohmann::json& deltas);
    void remove_from_queue(const Bridge& b);
    void finish_burn_if_done(Burn& burn, nlohmann::json& deltas);
    void settle_obligation_timeout(Burn& burn, Obligation& ob, nlohmann::json& deltas);

    void emit(std::string kind, const EthAddress* actor, nlohmann::json payload, SimTime now);
    nlohmann::json snapshot() const;

    ProtocolParams params_;
    CostModel cost_;
    ClockParams clock_;
    ChainParams chain_;
    std::uint64_t window_ = 0;
    Eth required_deposit_;

    std::vector<HistoryEntry> history_;
    std::uint64_t current_date_ = 0;
    std::optional<ActiveVerification> active_;
    std::uint64_t next_epoch_ = 1;
    std::set<std::uint64_t> commitment_challenged_;
    std::uint64_t accept_seq_ = 0;
    SimTime last_progress_ = 0;

    std::map<BridgeId, Bridge> bridges_;
    BridgeId next_bridge_ = 1;
    std::map<Rate, std::deque<BridgeId>> queues_;
    std::map<DogeAddress, Registration> registrations_;
    std::map<EthAddress, RelayerAccount> relayers_;
    std::map<ThreadId, ProofThread> threads_;
    ThreadId next_thread_ = 1;
    std::map<BurnId, Burn> burns_;
    BurnId next_burn_ = 1;
    std::set<Hash> used_txs_;
    std::map<Rate, std::map<EthAddress, Wow>> wow_;
    std::map<Rate, Wow> supply_;
    std::optional<DeepProposal> deep_;

    Totals totals_;
    Eth retained_;

    std::vector<EthPayment> outbox_;
    std::vector<ContractEvent> events_;
};

} // namespace dogebridge
