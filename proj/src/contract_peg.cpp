// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "contract_internal.hpp"

#include <algorithm>

namespace dogebridge {

using detail::delta;
using detail::delta_y;
using detail::hexa;
using detail::queue_delta;
using json = nlohmann::json;

Result<BridgeId, ContractError> BridgeContract::open_bridge(const EthAddress& op, Eth x, Rate y,
                                                            const DogeAddress& head, CrossingFee fee,
                                                            std::optional<Doge> min_lock, Eth burn_bounty,
                                                            SimTime now)
{
    if (x.units <= 0 || burn_bounty.units < 0 || !y.capacity_for(x)) return fail(ContractError::BadCollateral);
    if (live_bridge_at(head)) return fail(ContractError::HeadInUse);
    Bridge b;
    b.id = next_bridge_++;
    b.operator_addr = op;
    b.collateral = x;
    b.initial_collateral = x;
    b.y = y;
    b.head = head;
    b.fee = fee;
    b.min_lock = min_lock;
    b.burn_bounty = burn_bounty;
    bridges_.emplace(b.id, b);
    totals_.received += x + burn_bounty;
    emit("open_bridge", &op,
         {{"bridge", b.id},
          {"y", y.to_string()},
          {"head", hexa(head)},
          {"collateral", x.units},
          {"capacity", y.capacity_for(x)->units},
          {"burn_bounty", burn_bounty.units},
          {"deltas", {delta("in", (x + burn_bounty).units)}}},
         now);
    return b.id;
}

Status<ContractError> BridgeContract::register_crossing(const EthAddress& crosser, const DogeAddress& head,
                                                        const DogeAddress& sender, const EthAddress& mint_to,
                                                        Eth deposit, SimTime now)
{
    const Bridge* b = open_bridge_at(head);
    if (!b) return fail(live_bridge_at(head) ? ContractError::BridgeNotOpen : ContractError::NoSuchBridge);
    if (registrations_.count(head)) return fail(ContractError::AlreadyRegistered);
    if (deposit < registration_void_fee(params_, b->collateral)) return fail(ContractError::InsufficientDeposit);
    Registration r{crosser, sender, mint_to, deposit, current_date_,
                   current_date_ + params_.registration_window_doge_blocks};
    registrations_.emplace(head, r);
    totals_.received += deposit;
    emit("register", &crosser,
         {{"bridge", b->id},
          {"head", hexa(head)},
          {"sender", hexa(sender)},
          {"deposit", deposit.units},
          {"expiry", r.expiry},
          {"deltas", {delta("in", deposit.units)}}},
         now);
    return Unit{};
}

std::vector<DogeAddress> BridgeContract::expire_registrations(std::uint64_t previous_date, SimTime now)
{
    // A registration is voided once the date had already passed its expiry
    // before the latest advance, so the entry that crossed it can still be reported.
    std::vector<DogeAddress> voided;
    for (auto it = registrations_.begin(); it != registrations_.end();) {
        const Registration& r = it->second;
        if (previous_date <= r.expiry) {
            ++it;
            continue;
        }
        const Bridge* b = open_bridge_at(it->first);
        Eth fee = std::min(r.deposit, b ? registration_void_fee(params_, b->collateral) : r.deposit);
        json deltas = json::array();
        retained_ += fee;
        deltas.push_back({{"k", "retained"}, {"d", fee.units}, {"why", "void_fee"}});
        pay(r.crosser, r.deposit - fee, "registration_refund", deltas);
        EthAddress crosser = r.crosser;
        DogeAddress head = it->first;
        std::uint64_t expiry = r.expiry;
        voided.push_back(head);
        it = registrations_.erase(it);
        emit("registration_voided", &crosser,
             {{"head", hexa(head)}, {"expiry", expiry}, {"fee", fee.units}, {"deltas", std::move(deltas)}}, now);
    }
    return voided;
}

BridgeContract::Located BridgeContract::locate(const TxReport& r) const
{
    Located loc;
    if (r.history_index >= history_.size()) {
        loc.failure = "BadIndex";
        return loc;
    }
    const HistoryEntry& e = history_[r.history_index];
    if (r.header_proof.leaf_count != e.leaf_count() ||
        !merkle_verify(e.commitment, r.header.encode(), r.header_proof)) {
        loc.failure = "BadHeaderProof";
        return loc;
    }
    std::uint64_t ordinal = e.prior_date + 1 + r.header_proof.leaf_index;
    if (r.header.ordinal != ordinal) {
        loc.failure = "BadOrdinal";
        return loc;
    }
    if (!merkle_verify(r.header.tx_root, r.tx.encode(), r.tx_proof)) {
        loc.failure = "BadTxProof";
        return loc;
    }
    loc.entry = &e;
    loc.ordinal = ordinal;
    return loc;
}

ReportOutcome BridgeContract::report_lock(const EthAddress& reporter, const TxReport& report, SimTime now)
{
    auto ignore = [&](const std::string& why) {
        emit("lock_report_ignored", &reporter, {{"tx", report.tx.id().hex()}, {"reason", why}}, now);
        return ReportOutcome::ignored(why);
    };
    Located loc = locate(report);
    if (!loc.entry) return ignore(loc.failure);
    const Transaction& tx = report.tx;
    Hash txid = tx.id();
    if (used_txs_.count(txid)) return ignore("TxUsed");
    const Bridge* found = open_bridge_at(tx.receiver);
    if (!found) return ignore("NotOpenBridgeHead");
    auto reg = registrations_.find(tx.receiver);
    if (reg != registrations_.end() && reg->second.sender != tx.sender) return ignore("SenderNotRegistered");
    if (found->min_lock && tx.amount < *found->min_lock) return ignore("BelowMinLock");
    EthAddress mint_to = reg != registrations_.end() ? reg->second.mint_to : tx.memo;
    if (mint_to.is_zero()) return ignore("NoMintAddress");

    Bridge& b = bridges_.at(found->id);
    Wow cap = b.backed();
    Wow m{b.y.round_down_exact(std::min(tx.amount.units, cap.units))};
    if (m.units <= 0) return ignore("ZeroMint");

    json deltas = json::array();
    used_txs_.insert(txid);
    deltas.push_back({{"k", "used"}, {"tx", txid.hex()}});

    Eth kept = *b.y.eth_for(m.units);
    Eth refund = b.collateral - kept;
    b.collateral = kept;
    b.state = BridgeState::Queued;
    queues_[b.y].push_back(b.id);
    deltas.push_back(delta_y("backing", b.y, kept.units));
    deltas.push_back(queue_delta("queue_push", b.y, b.id));
    pay(b.operator_addr, refund, "shortfall_refund", deltas);

    Wow rem = m;
    auto take = [&rem](Wow want) {
        Wow t{std::clamp<std::int64_t>(want.units, 0, rem.units)};
        rem -= t;
        return t;
    };
    Wow fee = take(b.fee.on(m));
    Wow tax = take(params_.relay_tax);
    Wow bounty = take(params_.lock_bounty);
    credit_wow(b.y, b.operator_addr, fee, deltas);
    credit_wow(b.y, loc.entry->relayer, tax, deltas);
    credit_wow(b.y, reporter, bounty, deltas);
    credit_wow(b.y, mint_to, rem, deltas);

    json info = {{"bridge", b.id},
                 {"y", b.y.to_string()},
                 {"tx", txid.hex()},
                 {"ordinal", loc.ordinal},
                 {"history_index", report.history_index},
                 {"locked", tx.amount.units},
                 {"minted", m.units},
                 {"fee", fee.units},
                 {"relay_tax", tax.units},
                 {"lock_bounty", bounty.units},
                 {"crosser_amount", rem.units},
                 {"mint_to", hexa(mint_to)},
                 {"refund", refund.units}};
    if (reg != registrations_.end()) {
        pay(reg->second.crosser, reg->second.deposit, "registration_refund", deltas);
        registrations_.erase(reg);
    }
    info["deltas"] = std::move(deltas);
    emit("mint", &reporter, std::move(info), now);
    return ReportOutcome::ok();
}

Result<BurnId, ContractError> BridgeContract::burn_wow(const EthAddress& hodler, Rate y, Wow w,
                                                       const DogeAddress& dest, SimTime now)
{
    if (w.units <= 0 || wow_balance(hodler, y) < w) return fail(ContractError::InsufficientBalance);
    if (w.units % y.num() != 0) return fail(ContractError::InexactAmount);
    auto& q = queues_[y];
    std::int64_t coverage = 0;
    for (BridgeId id : q) coverage += bridges_.at(id).backed().units;
    if (coverage < w.units) return fail(ContractError::InsufficientQueue);

    json deltas = json::array();
    debit_wow(y, hodler, w, deltas);
    Burn burn;
    burn.id = next_burn_++;
    burn.hodler = hodler;
    burn.y = y;
    burn.w = w;
    burn.dest = dest;
    burn.deadline_eth = eth_now(now) + unlock_deadline_eth_blocks(params_, clock_);
    burn.burn_accept_seq = accept_seq_;

    json consumed = json::array();
    Wow rem = w;
    while (rem.units > 0) {
        Bridge& b = bridges_.at(q.front());
        Wow t{std::min(rem.units, b.backed().units)};
        Eth escrow = *y.eth_for(t.units);
        b.collateral -= escrow;
        b.pending_obligations += 1;
        burn.obligations.push_back(Obligation{b.id, t, escrow, ObligationStatus::Pending});
        deltas.push_back(delta_y("backing", y, -escrow.units));
        deltas.push_back(delta_y("escrow", y, escrow.units));
        deltas.push_back(delta_y("owed", y, t.units));
        consumed.push_back({{"bridge", b.id}, {"owed", t.units}, {"escrow", escrow.units}});
        rem -= t;
        if (b.backed().units == 0) {
            deltas.push_back(queue_delta("queue_pop", y, b.id));
            q.pop_front();
        }
    }
    BurnId id = burn.id;
    Rate by = burn.y;
    DogeAddress bdest = burn.dest;
    std::uint64_t deadline = burn.deadline_eth;
    burns_.emplace(id, std::move(burn));
    emit("burn", &hodler,
         {{"burn", id},
          {"y", by.to_string()},
          {"w", w.units},
          {"dest", hexa(bdest)},
          {"deadline_eth", deadline},
          {"consumed", std::move(consumed)},
          {"deltas", std::move(deltas)}},
         now);
    return id;
}

void BridgeContract::remove_from_queue(const Bridge& b)
{
    auto it = queues_.find(b.y);
    if (it == queues_.end()) return;
    auto& q = it->second;
    q.erase(std::remove(q.begin(), q.end(), b.id), q.end());
}

void BridgeContract::maybe_close(Bridge& b, json& deltas)
{
    if (!b.minted() || b.state == BridgeState::Closed || b.collateral.units != 0 || b.pending_obligations != 0)
        return;
    b.state = BridgeState::Closed;
    if (!b.bounty_paid) {
        pay(b.operator_addr, b.burn_bounty, "bounty_refund", deltas);
        b.bounty_paid = true;
    }
    deltas.push_back({{"k", "close"}, {"bridge", b.id}});
}

void BridgeContract::finish_burn_if_done(Burn& burn, json& deltas)
{
    (void)deltas;
    for (const auto& ob : burn.obligations)
        if (ob.status == ObligationStatus::Pending) return;
    burn.complete = true;
}

ReportOutcome BridgeContract::report_unlock(const EthAddress& reporter, BurnId burn_id, const TxReport& report,
                                            SimTime now)
{
    auto ignore = [&](const std::string& why) {
        emit("unlock_report_ignored", &reporter, {{"burn", burn_id}, {"tx", report.tx.id().hex()}, {"reason", why}},
             now);
        return ReportOutcome::ignored(why);
    };
    auto bit = burns_.find(burn_id);
    if (bit == burns_.end()) return ignore("UnknownBurn");
    Burn& burn = bit->second;
    if (burn.complete) return ignore("BurnSettled");
    Located loc = locate(report);
    if (!loc.entry) return ignore(loc.failure);
    const Transaction& tx = report.tx;

    Obligation* ob = nullptr;
    for (auto& o : burn.obligations)
        if (o.status == ObligationStatus::Pending && bridges_.at(o.bridge).head == tx.sender) ob = &o;
    if (!ob) return ignore("SenderNotObligedHead");
    if (tx.receiver != burn.dest) return ignore("WrongReceiver");
    if (tx.amount.units < ob->owed.units) return ignore("Underpaid");
    if (loc.entry->accept_seq <= burn.burn_accept_seq) return ignore("PreBurnCommitment");
    Hash txid = tx.id();
    if (used_txs_.count(txid)) return ignore("TxUsed");

    json deltas = json::array();
    used_txs_.insert(txid);
    deltas.push_back({{"k", "used"}, {"tx", txid.hex()}});
    Bridge& b = bridges_.at(ob->bridge);
    ob->status = ObligationStatus::Unlocked;
    b.pending_obligations -= 1;
    burn.d_recv += Doge{ob->owed.units};
    deltas.push_back(delta_y("escrow", burn.y, -ob->escrow.units));
    deltas.push_back(delta_y("owed", burn.y, -ob->owed.units));
    pay(b.operator_addr, ob->escrow, "escrow_refund", deltas);
    Eth bounty;
    if (!b.bounty_paid && b.burn_bounty.units > 0) {
        bounty = b.burn_bounty;
        pay(reporter, bounty, "burn_bounty", deltas);
        b.bounty_paid = true;
    }
    maybe_close(b, deltas);
    finish_burn_if_done(burn, deltas);
    json info = {{"burn", burn_id},
                 {"bridge", b.id},
                 {"tx", txid.hex()},
                 {"ordinal", loc.ordinal},
                 {"owed", ob->owed.units},
                 {"escrow", ob->escrow.units},
                 {"bounty", bounty.units},
                 {"deltas", std::move(deltas)}};
    emit("unlock", &reporter, std::move(info), now);
    if (burn.complete)
        emit("burn_complete", &burn.hodler,
             {{"burn", burn_id},
              {"y", burn.y.to_string()},
              {"w", burn.w.units},
              {"d_recv", burn.d_recv.units},
              {"eth", burn.eth_recv.units}},
             now);
    return ReportOutcome::ok();
}

void BridgeContract::settle_obligation_timeout(Burn& burn, Obligation& ob, json& deltas)
{
    Bridge& b = bridges_.at(ob.bridge);
    ob.status = ObligationStatus::TimedOut;
    b.pending_obligations -= 1;
    burn.eth_recv += ob.escrow;
    deltas.push_back(delta_y("escrow", burn.y, -ob.escrow.units));
    deltas.push_back(delta_y("owed", burn.y, -ob.owed.units));
    pay(burn.hodler, ob.escrow, "unlock_timeout", deltas);
    maybe_close(b, deltas);
}

Result<Eth, ContractError> BridgeContract::unlock_timeout(BurnId burn_id, SimTime now)
{
    auto bit = burns_.find(burn_id);
    if (bit == burns_.end()) return fail(ContractError::UnknownBurn);
    Burn& burn = bit->second;
    if (burn.complete) return fail(ContractError::AlreadySettled);
    if (eth_now(now) < burn.deadline_eth) return fail(ContractError::NotElapsed);
    json deltas = json::array();
    json settled = json::array();
    Eth paid;
    for (auto& ob : burn.obligations) {
        if (ob.status != ObligationStatus::Pending) continue;
        settle_obligation_timeout(burn, ob, deltas);
        paid += ob.escrow;
        settled.push_back(ob.bridge);
    }
    finish_burn_if_done(burn, deltas);
    emit("unlock_timeout", &burn.hodler,
         {{"burn", burn_id}, {"paid", paid.units}, {"bridges", std::move(settled)}, {"deltas", std::move(deltas)}},
         now);
    emit("burn_complete", &burn.hodler,
         {{"burn", burn_id},
          {"y", burn.y.to_string()},
          {"w", burn.w.units},
          {"d_recv", burn.d_recv.units},
          {"eth", burn.eth_recv.units}},
         now);
    return paid;
}

Result<ReportOutcome, ContractError> BridgeContract::report_missing_doge(const EthAddress& hodler, Rate y, Wow n,
                                                                         const TxReport& report, SimTime now)
{
    if (n.units <= 0 || wow_balance(hodler, y) < n) return fail(ContractError::InsufficientBalance);
    auto ignore = [&](const std::string& why) {
        emit("missing_report_ignored", &hodler, {{"tx", report.tx.id().hex()}, {"n", n.units}, {"reason", why}}, now);
        return ReportOutcome::ignored(why);
    };
    Located loc = locate(report);
    if (!loc.entry) return ignore(loc.failure);
    const Transaction& tx = report.tx;
    Bridge* b = nullptr;
    for (auto& [id, cand] : bridges_)
        if (cand.head == tx.sender && cand.state == BridgeState::Queued && cand.y == y) b = &cand;
    if (!b) return ignore("NotMintedBridgeHead");
    Hash txid = tx.id();
    if (used_txs_.count(txid)) return ignore("TxUsed");
    if (tx.amount.units < n.units) return ignore("AmountBelowClaim");
    if (n.units % y.num() != 0) return ignore("InexactAmount");
    if (n > b->backed()) return ignore("ExceedsCollateral");
    for (const auto& [bid, burn] : burns_) {
        if (burn.complete || burn.dest != tx.receiver) continue;
        for (const auto& ob : burn.obligations)
            if (ob.status == ObligationStatus::Pending && ob.bridge == b->id && tx.amount.units >= ob.owed.units)
                return ignore("LegitimateUnlock");
    }

    json deltas = json::array();
    debit_wow(y, hodler, n, deltas);
    Eth eth = *y.eth_for(n.units);
    b->collateral -= eth;
    deltas.push_back(delta_y("backing", y, -eth.units));
    used_txs_.insert(txid);
    deltas.push_back({{"k", "used"}, {"tx", txid.hex()}});
    pay(hodler, eth, "missing_doge", deltas);
    bool closed = false;
    if (b->backed().units == 0) {
        remove_from_queue(*b);
        deltas.push_back(queue_delta("queue_remove", y, b->id));
        maybe_close(*b, deltas);
        closed = b->state == BridgeState::Closed;
    }
    emit("missing_doge_paid", &hodler,
         {{"bridge", b->id},
          {"y", y.to_string()},
          {"tx", txid.hex()},
          {"stolen", tx.amount.units},
          {"w", n.units},
          {"d_recv", 0},
          {"eth", eth.units},
          {"closed", closed},
          {"deltas", std::move(deltas)}},
         now);
    return ReportOutcome::ok();
}

} // namespace dogebridge
