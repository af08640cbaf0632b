// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "contract_internal.hpp"

#include <algorithm>

namespace dogebridge {

using detail::delta;
using detail::hexa;
using json = nlohmann::json;

Status<ContractError> BridgeContract::become_relayer(const EthAddress& who, Eth deposit, SimTime now)
{
    auto it = relayers_.find(who);
    Eth existing = it == relayers_.end() ? Eth{} : it->second.deposit;
    if (deposit.units <= 0 || existing + deposit < required_deposit_) return fail(ContractError::InsufficientDeposit);
    relayers_[who].deposit += deposit;
    totals_.received += deposit;
    emit("become_relayer", &who,
         {{"deposit", deposit.units}, {"total", relayers_[who].deposit.units}, {"deltas", {delta("in", deposit.units)}}},
         now);
    return Unit{};
}

Result<Eth, ContractError> BridgeContract::withdraw_relayer_deposit(const EthAddress& who, SimTime now)
{
    auto it = relayers_.find(who);
    if (it == relayers_.end() || it->second.deposit.units == 0) return fail(ContractError::NotARelayer);
    bool active = active_ && active_->sub.relayer == who;
    if (active || it->second.pending_threads > 0) return fail(ContractError::ActiveOrPending);
    Eth amount = it->second.deposit;
    relayers_.erase(it);
    json deltas = json::array();
    pay(who, amount, "relayer_withdraw", deltas);
    emit("withdraw_relayer", &who, {{"amount", amount.units}, {"deltas", std::move(deltas)}}, now);
    return amount;
}

void BridgeContract::enter_verification(const EthAddress& relayer, std::size_t keep, std::uint64_t range,
                                        const Hash& commitment, const Hash& witness, bool backtrack, SimTime now)
{
    ActiveVerification v;
    v.epoch = next_epoch_++;
    v.sub = Submission{range, commitment, witness, relayer, eth_now(now)};
    v.window_start_eth = eth_now(now);
    v.prior_date = prior_date_at(keep);
    v.keep = keep;
    v.backtrack = backtrack;
    active_ = v;
}

Status<ContractError> BridgeContract::submit_extension(const EthAddress& relayer, std::uint64_t range,
                                                       const Hash& commitment, const Hash& witness, SimTime now)
{
    if (active_) return fail(ContractError::NotListening);
    if (!is_relayer(relayer)) return fail(ContractError::NotARelayer);
    if (range <= current_date_) return fail(ContractError::RangeNotAhead);
    if (range - current_date_ > params_.max_extension_len) return fail(ContractError::RangeTooLong);
    enter_verification(relayer, history_.size(), range, commitment, witness, false, now);
    emit("submit", &relayer,
         {{"epoch", active_->epoch},
          {"range", range},
          {"prior_date", active_->prior_date},
          {"commitment", commitment.hex()},
          {"witness", witness.hex()},
          {"window_end_eth", active_->window_start_eth + window_}},
         now);
    return Unit{};
}

void BridgeContract::release_penalty(std::optional<PenaltyHold>& hold, bool refund, json& deltas)
{
    if (!hold) return;
    if (refund) {
        relayers_[hold->displaced].deposit += hold->amount;
        deltas.push_back({{"k", "penalty_refund"}, {"who", hexa(hold->displaced)}, {"d", hold->amount.units}});
    } else {
        retained_ += hold->amount;
        deltas.push_back({{"k", "retained"}, {"d", hold->amount.units}, {"why", "nonmax_penalty"}});
    }
    hold.reset();
}

void BridgeContract::append_entry(std::size_t keep, const Submission& sub, std::uint64_t prior_date, SimTime now)
{
    history_.resize(keep);
    HistoryEntry e;
    e.commitment = sub.commitment;
    e.witness = sub.witness;
    e.range = sub.range;
    e.prior_date = prior_date;
    e.submitted_at_eth = sub.submitted_at_eth;
    e.accepted_at = now;
    e.relayer = sub.relayer;
    e.accept_seq = ++accept_seq_;
    history_.push_back(e);
    current_date_ = sub.range;
    last_progress_ = now;
}

Status<ContractError> BridgeContract::accept_on_timeout(SimTime now)
{
    if (!active_) return fail(ContractError::NotVerifying);
    if (eth_now(now) < active_->window_start_eth + window_) return fail(ContractError::WindowNotElapsed);

    std::uint64_t previous = current_date_;
    std::size_t before = history_.size();
    ActiveVerification v = *active_;
    active_.reset();
    append_entry(v.keep, v.sub, v.prior_date, now);
    json deltas = json::array();
    release_penalty(v.penalty, false, deltas);
    emit("accept", &v.sub.relayer,
         {{"epoch", v.epoch},
          {"index", history_.size() - 1},
          {"range", v.sub.range},
          {"prior_date", v.prior_date},
          {"commitment", v.sub.commitment.hex()},
          {"truncated", before + 1 - history_.size()},
          {"backtrack", v.backtrack},
          {"accept_seq", accept_seq_},
          {"deltas", std::move(deltas)}},
         now);
    if (deep_) {
        EthAddress proposer = deep_->proposer;
        deep_.reset();
        emit("deep_cancelled", &proposer, {{"cause", "normal_extension"}}, now);
    }
    expire_registrations(previous, now);
    return Unit{};
}

Result<RangeChallengeOutcome, ContractError> BridgeContract::challenge_range(const EthAddress& challenger,
                                                                             std::uint64_t range,
                                                                             const Hash& commitment,
                                                                             const Hash& witness, SimTime now)
{
    if (!active_) return fail(ContractError::NotVerifying);
    if (!is_relayer(challenger)) return fail(ContractError::NotARelayer);
    if (eth_now(now) >= active_->window_start_eth + window_) return fail(ContractError::WindowElapsed);

    if (range < active_->sub.range + params_.d) {
        emit("range_challenge_ignored", &challenger,
             {{"epoch", active_->epoch}, {"range", range}, {"sub_range", active_->sub.range}}, now);
        return RangeChallengeOutcome::Ignored;
    }
    if (range - active_->prior_date > params_.max_extension_len) return fail(ContractError::RangeTooLong);

    json deltas = json::array();
    release_penalty(active_->penalty, false, deltas);
    EthAddress displaced = active_->sub.relayer;
    Eth penalty = debit_deposit(displaced, nonmax_penalty(params_, relayers_[displaced].deposit));
    std::uint64_t old_epoch = active_->epoch;
    std::uint64_t old_range = active_->sub.range;

    ActiveVerification v = *active_;
    v.epoch = next_epoch_++;
    v.sub = Submission{range, commitment, witness, challenger, eth_now(now)};
    v.window_start_eth = eth_now(now);
    v.penalty = PenaltyHold{displaced, penalty};
    active_ = v;
    deltas.push_back({{"k", "penalty_hold"}, {"who", hexa(displaced)}, {"d", penalty.units}});
    emit("range_challenge", &challenger,
         {{"old_epoch", old_epoch},
          {"epoch", v.epoch},
          {"displaced", hexa(displaced)},
          {"old_range", old_range},
          {"range", range},
          {"penalty", penalty.units},
          {"commitment", commitment.hex()},
          {"window_end_eth", v.window_start_eth + window_},
          {"deltas", std::move(deltas)}},
         now);
    return RangeChallengeOutcome::Replaced;
}

Result<ThreadId, ContractError> BridgeContract::challenge_commitment(const EthAddress& challenger,
                                                                     std::uint64_t epoch, SimTime now)
{
    if (commitment_challenged_.count(epoch)) return fail(ContractError::SecondChallenge);
    if (!active_ || active_->epoch != epoch) return fail(ContractError::NotVerifying);
    if (!is_relayer(challenger)) return fail(ContractError::NotARelayer);
    if (eth_now(now) >= active_->window_start_eth + window_) return fail(ContractError::WindowElapsed);

    ActiveVerification v = *active_;
    active_.reset();
    commitment_challenged_.insert(epoch);

    ProofThread t;
    t.id = next_thread_++;
    t.epoch = epoch;
    t.sub = v.sub;
    t.base = base_at(v.keep);
    t.relayer = v.sub.relayer;
    t.challenger = challenger;
    t.deadline = now + proof_deadline_seconds(params_, v.sub.range - v.prior_date);
    t.penalty = v.penalty;
    relayers_[t.relayer].pending_threads += 1;
    relayers_[t.challenger].pending_threads += 1;
    ThreadId id = t.id;
    threads_.emplace(id, t);
    emit("commitment_challenge", &challenger,
         {{"epoch", epoch},
          {"thread", id},
          {"relayer", hexa(t.relayer)},
          {"range", t.sub.range},
          {"proof_deadline", t.deadline}},
         now);
    return id;
}

Status<ContractError> BridgeContract::supply_proof(const EthAddress& relayer, ThreadId thread,
                                                   const ExtensionProof& proof, SimTime now)
{
    auto it = threads_.find(thread);
    if (it == threads_.end() || it->second.resolved) return fail(ContractError::UnknownThread);
    auto& t = it->second;
    if (t.relayer != relayer) return fail(ContractError::NotThreadRelayer);
    if (t.verdict_at) return fail(ContractError::ProofAlreadySupplied);
    if (now > t.deadline) return fail(ContractError::ProofLate);
    t.verdict = verify_extension_proof(t.base, t.sub, proof, chain_, params_.c);
    t.verdict_at = now + oracle_latency(cost_, t.sub.range - t.base.prior_date, params_.c);
    emit("proof_supplied", &relayer,
         {{"thread", thread}, {"headers", proof.revealed.size() + proof.witness.size()}, {"verdict_at", *t.verdict_at}},
         now);
    return Unit{};
}

Status<ContractError> BridgeContract::resolve_proof(ThreadId thread, Verdict verdict, SimTime now)
{
    auto it = threads_.find(thread);
    if (it == threads_.end() || it->second.resolved) return fail(ContractError::UnknownThread);
    auto& t = it->second;
    std::uint64_t len = t.sub.range - t.base.prior_date;
    Eth cost = verification_cost_eth(cost_, len, params_.c);
    Eth reward = challenge_reward(params_, cost);
    json deltas = json::array();
    json info = {{"thread", thread}, {"verdict", to_string(verdict)}, {"cost", cost.units}, {"reward", reward.units}};

    switch (verdict) {
    case Verdict::Accept: {
        Eth taken = debit_deposit(t.challenger, cost + reward);
        Eth fee = std::min(taken, cost);
        totals_.oracle_fees += fee;
        relayers_[t.relayer].deposit += taken - fee;
        deltas.push_back(delta("fee", fee.units));
        info["payer"] = hexa(t.challenger);
        info["debited"] = taken.units;
        release_penalty(t.penalty, false, deltas);
        break;
    }
    case Verdict::Reject: {
        Eth taken = debit_deposit(t.relayer, cost + reward);
        Eth fee = std::min(taken, cost);
        totals_.oracle_fees += fee;
        relayers_[t.challenger].deposit += taken - fee;
        deltas.push_back(delta("fee", fee.units));
        info["payer"] = hexa(t.relayer);
        info["debited"] = taken.units;
        release_penalty(t.penalty, true, deltas);
        break;
    }
    case Verdict::TimedOut: {
        Eth all = debit_deposit(t.relayer, relayers_[t.relayer].deposit);
        totals_.destroyed += all;
        deltas.push_back(delta("destroyed", all.units));
        info["payer"] = hexa(t.relayer);
        info["debited"] = all.units;
        release_penalty(t.penalty, true, deltas);
        break;
    }
    }
    relayers_[t.relayer].pending_threads -= 1;
    relayers_[t.challenger].pending_threads -= 1;
    t.resolved = true;
    info["relayer"] = hexa(t.relayer);
    info["challenger"] = hexa(t.challenger);
    info["deltas"] = std::move(deltas);
    emit("proof_resolved", nullptr, std::move(info), now);
    return Unit{};
}

void BridgeContract::settle_timed_out_threads(SimTime now)
{
    std::vector<ThreadId> late;
    for (const auto& [id, t] : threads_)
        if (!t.resolved && !t.verdict_at && now > t.deadline) late.push_back(id);
    for (ThreadId id : late) (void)resolve_proof(id, Verdict::TimedOut, now);
}

// ---------------------------------------------------------------------------
// backtracking

Status<ContractError> BridgeContract::backtrack(const EthAddress& relayer, std::size_t from_index,
                                                std::uint64_t range, const Hash& commitment, const Hash& witness,
                                                SimTime now)
{
    if (active_) return fail(ContractError::NotListening);
    if (!is_relayer(relayer)) return fail(ContractError::NotARelayer);
    if (from_index >= history_.size()) return fail(ContractError::BadIndex);
    std::uint64_t prior = prior_date_at(from_index);
    if (range <= prior) return fail(ContractError::RangeNotAhead);
    if (range - prior > params_.max_extension_len) return fail(ContractError::RangeTooLong);
    std::uint64_t depth = current_date_ - prior;
    if (verification_cost_eth(cost_, depth, params_.c) > relayers_.at(relayer).deposit)
        return fail(ContractError::TooDeep);
    enter_verification(relayer, from_index, range, commitment, witness, true, now);
    emit("backtrack", &relayer,
         {{"epoch", active_->epoch},
          {"from_index", from_index},
          {"range", range},
          {"prior_date", prior},
          {"depth", depth},
          {"commitment", commitment.hex()},
          {"window_end_eth", active_->window_start_eth + window_}},
         now);
    return Unit{};
}

Status<ContractError> BridgeContract::propose_deep(const EthAddress& proposer, std::size_t from_index,
                                                   std::uint64_t range, const Hash& commitment, const Hash& witness,
                                                   SimTime now)
{
    if (deep_) return fail(ContractError::DeepPending);
    if (from_index > history_.size()) return fail(ContractError::BadIndex);
    if (range <= prior_date_at(from_index)) return fail(ContractError::RangeNotAhead);
    deep_ = DeepProposal{proposer, from_index, Submission{range, commitment, witness, proposer, eth_now(now)}, now};
    emit("deep_proposed", &proposer,
         {{"from_index", from_index},
          {"range", range},
          {"commitment", commitment.hex()},
          {"finalize_at", now + params_.deep_backtrack_delay_1}},
         now);
    return Unit{};
}

Status<ContractError> BridgeContract::object_deep(const EthAddress& objector, SimTime now)
{
    if (!deep_) return fail(ContractError::NoDeepProposal);
    deep_.reset();
    emit("deep_cancelled", &objector, {{"cause", "objection"}}, now);
    return Unit{};
}

void BridgeContract::finalize_deep(SimTime now)
{
    DeepProposal p = *deep_;
    deep_.reset();
    json deltas = json::array();
    bool cancelled_active = false;
    if (active_) {
        release_penalty(active_->penalty, false, deltas);
        active_.reset();
        cancelled_active = true;
    }
    std::uint64_t previous = current_date_;
    std::size_t before = history_.size();
    append_entry(p.keep, p.sub, prior_date_at(p.keep), now);
    emit("deep_finalized", &p.proposer,
         {{"index", history_.size() - 1},
          {"range", p.sub.range},
          {"prior_date", history_.back().prior_date},
          {"commitment", p.sub.commitment.hex()},
          {"truncated", before + 1 - history_.size()},
          {"cancelled_active", cancelled_active},
          {"accept_seq", accept_seq_},
          {"deltas", std::move(deltas)}},
         now);
    expire_registrations(previous, now);
}

Status<ContractError> BridgeContract::deep_backtrack_chunk(const EthAddress& relayer, std::size_t from_index,
                                                           std::uint64_t range, const Hash& commitment,
                                                           const Hash& witness, SimTime now)
{
    if (active_) return fail(ContractError::NotListening);
    if (!is_relayer(relayer)) return fail(ContractError::NotARelayer);
    if (now < last_progress_ + params_.deep_backtrack_delay_2) return fail(ContractError::NotStuck);
    if (from_index > history_.size()) return fail(ContractError::BadIndex);
    std::uint64_t prior = prior_date_at(from_index);
    if (range <= prior) return fail(ContractError::RangeNotAhead);
    if (range - prior > params_.max_extension_len) return fail(ContractError::RangeTooLong);
    bool bt = from_index < history_.size();
    enter_verification(relayer, from_index, range, commitment, witness, bt, now);
    emit("deep_chunk", &relayer,
         {{"epoch", active_->epoch},
          {"from_index", from_index},
          {"range", range},
          {"prior_date", prior},
          {"commitment", commitment.hex()},
          {"window_end_eth", active_->window_start_eth + window_}},
         now);
    return Unit{};
}

} // namespace dogebridge
