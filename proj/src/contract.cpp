// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "contract_internal.hpp"

#include <algorithm>

namespace dogebridge {

using detail::delta;
using detail::delta_y;
using detail::hexa;
using json = nlohmann::json;

const char* to_string(ContractError e)
{
    switch (e) {
    case ContractError::BadParams: return "BadParams";
    case ContractError::BadCollateral: return "BadCollateral";
    case ContractError::HeadInUse: return "HeadInUse";
    case ContractError::NoSuchBridge: return "NoSuchBridge";
    case ContractError::BridgeNotOpen: return "BridgeNotOpen";
    case ContractError::AlreadyRegistered: return "AlreadyRegistered";
    case ContractError::InsufficientDeposit: return "InsufficientDeposit";
    case ContractError::NotARelayer: return "NotARelayer";
    case ContractError::ActiveOrPending: return "ActiveOrPending";
    case ContractError::NotListening: return "NotListening";
    case ContractError::NotVerifying: return "NotVerifying";
    case ContractError::RangeNotAhead: return "RangeNotAhead";
    case ContractError::RangeTooLong: return "RangeTooLong";
    case ContractError::WindowNotElapsed: return "WindowNotElapsed";
    case ContractError::WindowElapsed: return "WindowElapsed";
    case ContractError::SecondChallenge: return "SecondChallenge";
    case ContractError::UnknownThread: return "UnknownThread";
    case ContractError::NotThreadRelayer: return "NotThreadRelayer";
    case ContractError::ProofAlreadySupplied: return "ProofAlreadySupplied";
    case ContractError::ProofLate: return "ProofLate";
    case ContractError::InsufficientBalance: return "InsufficientBalance";
    case ContractError::InexactAmount: return "InexactAmount";
    case ContractError::InsufficientQueue: return "InsufficientQueue";
    case ContractError::UnknownBurn: return "UnknownBurn";
    case ContractError::NotElapsed: return "NotElapsed";
    case ContractError::AlreadySettled: return "AlreadySettled";
    case ContractError::BadIndex: return "BadIndex";
    case ContractError::TooDeep: return "TooDeep";
    case ContractError::NotStuck: return "NotStuck";
    case ContractError::DeepPending: return "DeepPending";
    case ContractError::NoDeepProposal: return "NoDeepProposal";
    }
    return "?";
}

const char* to_string(RelayMode m) { return m == RelayMode::Listening ? "Listening" : "Verification"; }

const char* to_string(BridgeState s)
{
    switch (s) {
    case BridgeState::Open: return "Open";
    case BridgeState::Queued: return "Queued";
    case BridgeState::Closed: return "Closed";
    }
    return "?";
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Accept: return "Accept";
    case Verdict::Reject: return "Reject";
    case Verdict::TimedOut: return "TimedOut";
    }
    return "?";
}

Wow Bridge::backed() const
{
    auto cap = y.capacity_for(collateral);
    return Wow{cap ? cap->units : 0};
}

Result<BridgeContract, ContractError> BridgeContract::genesis(const ProtocolParams& params, const CostModel& cost,
                                                              const ClockParams& clock, const ChainParams& chain)
{
    if (!validate(params) || !cost.valid() || !clock.valid()) return fail(ContractError::BadParams);
    BridgeContract s;
    s.params_ = params;
    s.cost_ = cost;
    s.clock_ = clock;
    s.chain_ = chain;
    s.window_ = challenge_window_eth_blocks(params.d, params.k, clock);
    s.required_deposit_ = required_relayer_deposit(params, cost);
    return s;
}

// ---------------------------------------------------------------------------
// observation

const Bridge* BridgeContract::bridge(BridgeId id) const
{
    auto it = bridges_.find(id);
    return it == bridges_.end() ? nullptr : &it->second;
}

const Bridge* BridgeContract::open_bridge_at(const DogeAddress& head) const
{
    for (const auto& [id, b] : bridges_)
        if (b.head == head && b.state == BridgeState::Open) return &b;
    return nullptr;
}

const Bridge* BridgeContract::live_bridge_at(const DogeAddress& head) const
{
    for (const auto& [id, b] : bridges_)
        if (b.head == head && b.state != BridgeState::Closed) return &b;
    return nullptr;
}

bool BridgeContract::is_relayer(const EthAddress& who) const
{
    auto it = relayers_.find(who);
    return it != relayers_.end() && it->second.deposit >= required_deposit_;
}

std::deque<BridgeId> BridgeContract::queue(Rate y) const
{
    auto it = queues_.find(y);
    return it == queues_.end() ? std::deque<BridgeId>{} : it->second;
}

Wow BridgeContract::wow_balance(const EthAddress& who, Rate y) const
{
    auto it = wow_.find(y);
    if (it == wow_.end()) return Wow{};
    auto jt = it->second.find(who);
    return jt == it->second.end() ? Wow{} : jt->second;
}

Wow BridgeContract::wow_supply(Rate y) const
{
    auto it = supply_.find(y);
    return it == supply_.end() ? Wow{} : it->second;
}

std::uint64_t BridgeContract::prior_date_at(std::size_t keep) const
{
    return keep == 0 ? 0 : history_[keep - 1].range;
}

ExtensionBase BridgeContract::base_at(std::size_t keep) const
{
    ExtensionBase b;
    b.prior_date = prior_date_at(keep);
    if (keep > 0) {
        b.prior_commitment = history_[keep - 1].commitment;
        b.prior_leaf_count = history_[keep - 1].leaf_count();
    }
    return b;
}

Eth BridgeContract::held() const
{
    Eth sum;
    for (const auto& [id, b] : bridges_) {
        if (b.state == BridgeState::Closed) continue;
        sum += b.collateral;
        if (!b.bounty_paid) sum += b.burn_bounty;
    }
    for (const auto& [id, burn] : burns_)
        for (const auto& ob : burn.obligations)
            if (ob.status == ObligationStatus::Pending) sum += ob.escrow;
    for (const auto& [who, acct] : relayers_) sum += acct.deposit;
    for (const auto& [head, reg] : registrations_) sum += reg.deposit;
    if (active_ && active_->penalty) sum += active_->penalty->amount;
    for (const auto& [id, t] : threads_)
        if (t.penalty) sum += t.penalty->amount;
    sum += retained_;
    return sum;
}

std::vector<EthPayment> BridgeContract::drain_outbox()
{
    std::vector<EthPayment> out;
    out.swap(outbox_);
    return out;
}

std::vector<ContractEvent> BridgeContract::drain_events()
{
    std::vector<ContractEvent> out;
    out.swap(events_);
    return out;
}

// ---------------------------------------------------------------------------
// ledger helpers

void BridgeContract::credit_wow(Rate y, const EthAddress& who, Wow amount, json& deltas)
{
    if (amount.units == 0) return;
    wow_[y][who] += amount;
    supply_[y] += amount;
    deltas.push_back({{"k", "wow"}, {"y", y.to_string()}, {"who", hexa(who)}, {"d", amount.units}});
}

bool BridgeContract::debit_wow(Rate y, const EthAddress& who, Wow amount, json& deltas)
{
    if (wow_balance(who, y) < amount) return false;
    if (amount.units == 0) return true;
    wow_[y][who] -= amount;
    supply_[y] -= amount;
    deltas.push_back({{"k", "wow"}, {"y", y.to_string()}, {"who", hexa(who)}, {"d", -amount.units}});
    return true;
}

void BridgeContract::pay(const EthAddress& to, Eth amount, const std::string& reason, json& deltas)
{
    if (amount.units <= 0) return;
    outbox_.push_back(EthPayment{to, amount, reason});
    totals_.paid_out += amount;
    deltas.push_back({{"k", "out"}, {"who", hexa(to)}, {"d", amount.units}, {"why", reason}});
}

Eth BridgeContract::debit_deposit(const EthAddress& who, Eth amount)
{
    auto& acct = relayers_[who];
    Eth taken = std::min(acct.deposit, amount);
    acct.deposit -= taken;
    return taken;
}

Status<ContractError> BridgeContract::wow_transfer(const EthAddress& from, const EthAddress& to, Rate y, Wow amount,
                                                   SimTime now)
{
    if (amount.units < 0 || wow_balance(from, y) < amount) return fail(ContractError::InsufficientBalance);
    json deltas = json::array();
    if (amount.units > 0 && from != to) {
        wow_[y][from] -= amount;
        wow_[y][to] += amount;
        deltas.push_back({{"k", "wow"}, {"y", y.to_string()}, {"who", hexa(from)}, {"d", -amount.units}});
        deltas.push_back({{"k", "wow"}, {"y", y.to_string()}, {"who", hexa(to)}, {"d", amount.units}});
    }
    emit("wow_transfer", &from,
         {{"to", hexa(to)}, {"y", y.to_string()}, {"amount", amount.units}, {"deltas", std::move(deltas)}}, now);
    return Unit{};
}

// ---------------------------------------------------------------------------
// timers

void BridgeContract::on_tick(SimTime now)
{
    std::uint64_t e = eth_now(now);
    if (active_ && e >= active_->window_start_eth + window_) (void)accept_on_timeout(now);

    settle_timed_out_threads(now);
    std::vector<ThreadId> due;
    for (const auto& [id, t] : threads_)
        if (!t.resolved && t.verdict_at && *t.verdict_at <= now) due.push_back(id);
    for (ThreadId id : due) {
        const auto& t = threads_.at(id);
        (void)resolve_proof(id, t.verdict->accepted ? Verdict::Accept : Verdict::Reject, now);
    }

    std::vector<BurnId> expired;
    for (const auto& [id, b] : burns_)
        if (!b.complete && e >= b.deadline_eth) expired.push_back(id);
    for (BurnId id : expired) (void)unlock_timeout(id, now);

    if (deep_ && now >= deep_->proposed_at + params_.deep_backtrack_delay_1) finalize_deep(now);
}

std::optional<SimTime> BridgeContract::next_timer(SimTime now) const
{
    std::optional<SimTime> best;
    auto consider = [&](SimTime t) {
        if (t <= now) t = now + 1;
        if (!best || t < *best) best = t;
    };
    if (active_) consider(eth_block_start(active_->window_start_eth + window_, clock_));
    for (const auto& [id, t] : threads_) {
        if (t.resolved) continue;
        if (t.verdict_at)
            consider(*t.verdict_at);
        else
            consider(t.deadline + 1);
    }
    for (const auto& [id, b] : burns_)
        if (!b.complete) consider(eth_block_start(b.deadline_eth, clock_));
    if (deep_) consider(deep_->proposed_at + params_.deep_backtrack_delay_1);
    return best;
}

// ---------------------------------------------------------------------------
// events and digest

json BridgeContract::snapshot() const
{
    json supply = json::object();
    json backing = json::object();
    json escrow = json::object();
    for (const auto& [y, s] : supply_) supply[y.to_string()] = s.units;
    for (const auto& [id, b] : bridges_) {
        if (!b.minted() || b.state == BridgeState::Closed) continue;
        auto key = b.y.to_string();
        backing[key] = backing.value(key, std::int64_t{0}) + b.collateral.units;
    }
    for (const auto& [id, burn] : burns_) {
        for (const auto& ob : burn.obligations) {
            if (ob.status != ObligationStatus::Pending) continue;
            auto key = burn.y.to_string();
            escrow[key] = escrow.value(key, std::int64_t{0}) + ob.escrow.units;
        }
    }
    return {
        {"mode", to_string(mode())},
        {"current_date", current_date_},
        {"history_len", history_.size()},
        {"used_count", used_txs_.size()},
        {"held", held().units},
        {"received", totals_.received.units},
        {"paid_out", totals_.paid_out.units},
        {"destroyed", totals_.destroyed.units},
        {"oracle_fees", totals_.oracle_fees.units},
        {"supply", supply},
        {"backing", backing},
        {"escrow", escrow},
    };
}

void BridgeContract::emit(std::string kind, const EthAddress* actor, json payload, SimTime now)
{
    if (!payload.contains("deltas")) payload["deltas"] = json::array();
    payload["snapshot"] = snapshot();
    payload["t"] = now;
    events_.push_back(ContractEvent{std::move(kind), actor ? hexa(*actor) : std::string("contract"),
                                    std::move(payload)});
}

namespace {

void put_sub(ByteWriter& w, const Submission& s)
{
    w.u64(s.range);
    w.hash(s.commitment);
    w.hash(s.witness);
    w.prefixed(s.relayer.bytes);
    w.u64(s.submitted_at_eth);
}

void put_rate(ByteWriter& w, const Rate& y)
{
    w.i64(y.num());
    w.i64(y.den());
}

void put_hold(ByteWriter& w, const std::optional<PenaltyHold>& h)
{
    w.u8(h ? 1 : 0);
    if (h) {
        w.prefixed(h->displaced.bytes);
        w.i64(h->amount.units);
    }
}

} // namespace

Hash BridgeContract::state_digest() const
{
    ByteWriter w;
    w.str("dogebridge-state-v1");
    w.u64(current_date_);
    w.u64(accept_seq_);
    w.u64(last_progress_);
    w.u32(static_cast<std::uint32_t>(history_.size()));
    for (const auto& h : history_) {
        w.hash(h.commitment);
        w.hash(h.witness);
        w.u64(h.range);
        w.u64(h.prior_date);
        w.u64(h.submitted_at_eth);
        w.u64(h.accepted_at);
        w.prefixed(h.relayer.bytes);
        w.u64(h.accept_seq);
    }
    w.u8(active_ ? 1 : 0);
    if (active_) {
        w.u64(active_->epoch);
        put_sub(w, active_->sub);
        w.u64(active_->window_start_eth);
        w.u64(active_->prior_date);
        w.u64(active_->keep);
        w.u8(active_->backtrack ? 1 : 0);
        put_hold(w, active_->penalty);
    }
    w.u32(static_cast<std::uint32_t>(bridges_.size()));
    for (const auto& [id, b] : bridges_) {
        w.u64(id);
        w.prefixed(b.operator_addr.bytes);
        w.i64(b.collateral.units);
        w.i64(b.initial_collateral.units);
        put_rate(w, b.y);
        w.prefixed(b.head.bytes);
        w.i64(b.fee.flat.units);
        w.i64(b.fee.rate.num);
        w.i64(b.fee.rate.den);
        w.i64(b.min_lock ? b.min_lock->units : -1);
        w.i64(b.burn_bounty.units);
        w.u8(b.bounty_paid ? 1 : 0);
        w.u8(static_cast<std::uint8_t>(b.state));
        w.u32(b.pending_obligations);
    }
    for (const auto& [y, q] : queues_) {
        put_rate(w, y);
        w.u32(static_cast<std::uint32_t>(q.size()));
        for (auto id : q) w.u64(id);
    }
    for (const auto& [head, r] : registrations_) {
        w.prefixed(head.bytes);
        w.prefixed(r.crosser.bytes);
        w.prefixed(r.sender.bytes);
        w.prefixed(r.mint_to.bytes);
        w.i64(r.deposit.units);
        w.u64(r.registered_at_date);
        w.u64(r.expiry);
    }
    for (const auto& [who, a] : relayers_) {
        w.prefixed(who.bytes);
        w.i64(a.deposit.units);
        w.u32(a.pending_threads);
    }
    for (const auto& [id, t] : threads_) {
        w.u64(id);
        w.u64(t.epoch);
        put_sub(w, t.sub);
        w.prefixed(t.relayer.bytes);
        w.prefixed(t.challenger.bytes);
        w.u64(t.deadline);
        w.i64(t.verdict_at ? static_cast<std::int64_t>(*t.verdict_at) : -1);
        w.u8(t.verdict ? (t.verdict->accepted ? 1 : 2) : 0);
        put_hold(w, t.penalty);
        w.u8(t.resolved ? 1 : 0);
    }
    for (const auto& [id, b] : burns_) {
        w.u64(id);
        w.prefixed(b.hodler.bytes);
        put_rate(w, b.y);
        w.i64(b.w.units);
        w.prefixed(b.dest.bytes);
        w.u64(b.deadline_eth);
        w.u64(b.burn_accept_seq);
        for (const auto& ob : b.obligations) {
            w.u64(ob.bridge);
            w.i64(ob.owed.units);
            w.i64(ob.escrow.units);
            w.u8(static_cast<std::uint8_t>(ob.status));
        }
        w.i64(b.d_recv.units);
        w.i64(b.eth_recv.units);
        w.u8(b.complete ? 1 : 0);
    }
    w.u32(static_cast<std::uint32_t>(used_txs_.size()));
    for (const auto& h : used_txs_) w.hash(h);
    for (const auto& [y, m] : wow_) {
        put_rate(w, y);
        for (const auto& [who, amt] : m) {
            w.prefixed(who.bytes);
            w.i64(amt.units);
        }
    }
    w.u8(deep_ ? 1 : 0);
    if (deep_) {
        w.prefixed(deep_->proposer.bytes);
        w.u64(deep_->keep);
        put_sub(w, deep_->sub);
        w.u64(deep_->proposed_at);
    }
    w.i64(totals_.received.units);
    w.i64(totals_.paid_out.units);
    w.i64(totals_.destroyed.units);
    w.i64(totals_.oracle_fees.units);
    w.i64(retained_.units);
    return sha256(w.bytes());
}

} // namespace dogebridge
