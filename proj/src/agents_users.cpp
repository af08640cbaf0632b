// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "agents_internal.hpp"

#include <set>

namespace dogebridge::detail {

namespace {

using AttemptKey = std::pair<Hash, std::uint64_t>;

/** Committed transactions (ordinals up to the contract's current date) matching pred. */
std::vector<ChainTx> committed_txs(const Observation& o, const std::function<bool(const Transaction&)>& pred)
{
    std::uint64_t date = std::min(o.contract->current_date(), o.tip_ordinal());
    if (date == 0) return {};
    return scan_txs(*o.chain, o.tip, 1, date, pred);
}

/** Builds a report once per (tx, covering entry); later ticks retry only after the history changes. */
std::optional<TxReport> fresh_report(const Observation& o, const ChainTx& ct, std::set<AttemptKey>& attempted)
{
    auto idx = entry_covering(*o.contract, ct.ordinal);
    if (!idx) return std::nullopt;
    AttemptKey key{ct.tx->id(), o.contract->history()[*idx].accept_seq};
    if (attempted.count(key)) return std::nullopt;
    auto r = build_tx_report(*o.contract, *o.chain, o.tip, ct.ordinal, ct.index);
    if (r) attempted.insert(key);
    return r;
}

/** Pending unlock obligations paired with the transactions that settle them. */
void unlock_reports(const Observation& o, const std::optional<EthAddress>& only_hodler, std::set<AttemptKey>& attempted,
                    std::vector<Action>& out)
{
    const BridgeContract& k = *o.contract;
    for (const auto& [id, burn] : k.burns()) {
        if (burn.complete || (only_hodler && burn.hodler != *only_hodler)) continue;
        for (const auto& ob : burn.obligations) {
            if (ob.status != ObligationStatus::Pending) continue;
            const Bridge* b = k.bridge(ob.bridge);
            auto found = committed_txs(o, [&](const Transaction& tx) {
                return tx.sender == b->head && tx.receiver == burn.dest && tx.amount.units >= ob.owed.units;
            });
            for (const auto& ct : found) {
                if (k.used_txs().count(ct.tx->id())) continue;
                auto idx = entry_covering(k, ct.ordinal);
                if (!idx || k.history()[*idx].accept_seq <= burn.burn_accept_seq) continue;
                if (auto r = fresh_report(o, ct, attempted)) {
                    out.push_back(act::ReportUnlock{id, std::move(*r)});
                    break;
                }
            }
        }
    }
}

Wow queue_coverage(const BridgeContract& k, Rate y)
{
    Wow sum;
    for (BridgeId id : k.queue(y)) sum += k.bridge(id)->backed();
    return sum;
}

bool pays_pending_unlock(const BridgeContract& k, const Bridge& b, const Transaction& tx)
{
    for (const auto& [id, burn] : k.burns()) {
        if (burn.complete || burn.dest != tx.receiver) continue;
        for (const auto& ob : burn.obligations)
            if (ob.status == ObligationStatus::Pending && ob.bridge == b.id && tx.amount.units >= ob.owed.units)
                return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

class Operator final : public Policy {
public:
    Operator(const PolicyContext& ctx, ParamReader& r, bool rational)
        : ctx_(ctx), rational_(rational), collateral_(r.eth("collateral", Eth::coins(10))),
          y_(r.rate("y", *Rate::make(100, 1))), count_(static_cast<std::uint32_t>(r.u64("bridges", 1))),
          fee_{r.wow("fee_flat", Wow{}), r.ratio("fee_rate", Ratio::of(0, 1))}, min_lock_(r.opt_doge("min_lock")),
          bounty_(r.eth("burn_bounty", Eth{})), open_at_(r.opt_time("open_at").value_or(0)),
          pays_unlocks_(r.boolean("pays_unlocks", true))
    {
        if (rational_) abscond_ = r.boolean("abscond", true);
        if (count_ == 0 || count_ > 64) r.error(r.path("bridges"), "must lie in 1..64");
        if (!y_.capacity_for(collateral_)) r.error(r.path("collateral"), "collateral times y must be a whole DOGE unit");
        for (std::uint32_t i = 0; i < count_; ++i) heads_.push_back(head_address(ctx.self.name, i));
        opened_.assign(count_, false);
    }

    std::vector<DogeAddress> controlled() const override { return heads_; }

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        const BridgeContract& k = *o.contract;
        if (o.now >= open_at_) {
            for (std::uint32_t i = 0; i < count_; ++i) {
                if (opened_[i]) continue;
                opened_[i] = true;
                out.push_back(act::OpenBridge{collateral_, y_, heads_[i], fee_, min_lock_, bounty_});
            }
        }

        for (const auto& [id, b] : k.bridges()) {
            if (b.operator_addr != o.self.eth || b.state != BridgeState::Queued || stolen_.count(b.head)) continue;
            Doge locked = o.doge_spendable(b.head);
            if (abscond_ && locked.positive() && should_abscond(locked, b.collateral, o.true_rate)) {
                stolen_.insert(b.head);
                out.push_back(act::SendDoge{b.head, o.self.doge, locked, EthAddress{}});
            }
        }

        if (!pays_unlocks_) return out;
        for (const auto& [id, burn] : k.burns()) {
            if (burn.complete) continue;
            for (const auto& ob : burn.obligations) {
                const Bridge* b = k.bridge(ob.bridge);
                if (ob.status != ObligationStatus::Pending || b->operator_addr != o.self.eth) continue;
                if (stolen_.count(b->head) || !paid_.insert({id, ob.bridge}).second) continue;
                Doge owed{ob.owed.units};
                if (o.doge_spendable(b->head) < owed) continue;
                out.push_back(act::SendDoge{b->head, burn.dest, owed, EthAddress{}});
            }
        }
        return out;
    }

private:
    PolicyContext ctx_;
    bool rational_;
    bool abscond_ = false;
    Eth collateral_;
    Rate y_;
    std::uint32_t count_;
    CrossingFee fee_;
    std::optional<Doge> min_lock_;
    Eth bounty_;
    SimTime open_at_;
    bool pays_unlocks_;
    std::vector<DogeAddress> heads_;
    std::vector<bool> opened_;
    std::set<DogeAddress> stolen_;
    std::set<std::pair<BurnId, BridgeId>> paid_;
};

class Crosser final : public Policy {
public:
    Crosser(const PolicyContext& ctx, ParamReader& r)
        : ctx_(ctx), operator_(r.str("operator", "")), index_(static_cast<std::uint32_t>(r.u64("bridge_index", 0))),
          amount_(r.opt_doge("amount")), register_(r.boolean("register", true)),
          margin_(r.ratio("margin", Ratio::of(1, 4))), start_(r.opt_time("start_after").value_or(0)),
          self_report_(r.boolean("self_report", false)), mint_to_name_(r.str("mint_to", ""))
    {
        if (operator_.empty()) r.error(r.path("operator"), "required");
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        const BridgeContract& k = *o.contract;
        if (sent_) {
            if (self_report_) report_own_lock(o, out);
            return out;
        }
        if (o.now < start_) return out;
        EthAddress mint_to = o.self.eth;
        if (!mint_to_name_.empty()) {
            const AgentIdentity* p = o.peer(mint_to_name_);
            if (!p) return out;
            mint_to = p->eth;
        }
        DogeAddress head = head_address(operator_, index_);
        const Bridge* b = k.open_bridge_at(head);
        if (!b || !crosser_comfortable(o.true_rate, b->y, margin_)) return out;
        Doge amount = amount_ ? *amount_ : Doge{b->backed().units};
        if (!amount.positive() || o.doge_spendable(o.self.doge) < amount) return out;

        if (register_) {
            auto reg = k.registrations().find(head);
            if (reg == k.registrations().end()) {
                if (!registering_ || reg_date_ != k.current_date()) {
                    registering_ = true;
                    reg_date_ = k.current_date();
                    Eth deposit = registration_void_fee(ctx_.params, b->collateral) + ctx_.params.registration_dust;
                    if (o.eth_balance >= deposit) out.push_back(act::Register{head, o.self.doge, mint_to, deposit});
                }
                return out;
            }
            if (reg->second.crosser != o.self.eth) return out;
        }
        sent_ = true;
        head_ = head;
        out.push_back(act::SendDoge{o.self.doge, head, amount, mint_to});
        return out;
    }

private:
    void report_own_lock(const Observation& o, std::vector<Action>& out)
    {
        const Bridge* b = o.contract->open_bridge_at(head_);
        if (!b) return;
        auto found = committed_txs(o, [&](const Transaction& tx) {
            return tx.sender == o.self.doge && tx.receiver == head_;
        });
        for (const auto& ct : found) {
            if (o.contract->used_txs().count(ct.tx->id())) continue;
            if (auto r = fresh_report(o, ct, attempted_)) {
                out.push_back(act::ReportLock{std::move(*r)});
                return;
            }
        }
    }

    PolicyContext ctx_;
    std::string operator_;
    std::uint32_t index_;
    std::optional<Doge> amount_;
    bool register_;
    Ratio margin_;
    SimTime start_;
    bool self_report_;
    std::string mint_to_name_;
    bool registering_ = false;
    std::uint64_t reg_date_ = 0;
    bool sent_ = false;
    DogeAddress head_;
    std::set<AttemptKey> attempted_;
};

class Hodler final : public Policy {
public:
    Hodler(const PolicyContext& ctx, ParamReader& r)
        : ctx_(ctx), y_(r.rate("y", *Rate::make(100, 1))), margin_(r.ratio("burn_margin", Ratio::of(1, 10))),
          rate_trigger_(r.boolean("rate_trigger", true)), burn_at_(r.opt_time("burn_at")),
          burn_amount_(r.wow("burn_amount", Wow{})), report_missing_(r.boolean("report_missing", true)),
          report_unlocks_(r.boolean("report_unlocks", true))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        const BridgeContract& k = *o.contract;
        Wow bal = k.wow_balance(o.self.eth, y_);

        if (report_missing_ && bal.positive()) {
            for (const auto& [id, b] : k.bridges()) {
                if (b.y != y_ || b.state != BridgeState::Queued) continue;
                auto found = committed_txs(o, [&](const Transaction& tx) { return tx.sender == b.head; });
                for (const auto& ct : found) {
                    if (k.used_txs().count(ct.tx->id()) || pays_pending_unlock(k, b, *ct.tx)) continue;
                    Wow n{y_.round_down_exact(std::min({bal.units, ct.tx->amount.units, b.backed().units}))};
                    if (!n.positive()) continue;
                    if (auto r = fresh_report(o, ct, attempted_)) {
                        out.push_back(act::ReportMissing{y_, n, std::move(*r)});
                        return out;
                    }
                }
            }
        }

        if (report_unlocks_) unlock_reports(o, o.self.eth, attempted_, out);

        bool scripted = burn_at_ && o.now >= *burn_at_ && !scripted_done_;
        bool triggered = rate_trigger_ && hodler_should_burn(o.true_rate, y_, margin_);
        if (bal.positive() && (scripted || triggered)) {
            Wow want = scripted && burn_amount_.positive() ? std::min(burn_amount_, bal) : bal;
            Wow w{y_.round_down_exact(std::min(want.units, queue_coverage(k, y_).units))};
            if (w.positive()) {
                if (scripted) scripted_done_ = true;
                out.push_back(act::BurnWow{y_, w, o.self.doge});
            }
        }
        return out;
    }

private:
    PolicyContext ctx_;
    Rate y_;
    Ratio margin_;
    bool rate_trigger_;
    std::optional<SimTime> burn_at_;
    Wow burn_amount_;
    bool report_missing_;
    bool report_unlocks_;
    bool scripted_done_ = false;
    std::set<AttemptKey> attempted_;
};

class Reporter final : public Policy {
public:
    Reporter(const PolicyContext& ctx, ParamReader& r)
        : ctx_(ctx), locks_(r.boolean("locks", true)), unlocks_(r.boolean("unlocks", true))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        const BridgeContract& k = *o.contract;
        if (locks_) {
            for (const auto& [id, b] : k.bridges()) {
                if (b.state != BridgeState::Open) continue;
                auto reg = k.registrations().find(b.head);
                auto found = committed_txs(o, [&](const Transaction& tx) {
                    if (tx.receiver != b.head) return false;
                    if (reg != k.registrations().end()) return tx.sender == reg->second.sender;
                    return !tx.memo.is_zero();
                });
                for (const auto& ct : found) {
                    if (k.used_txs().count(ct.tx->id())) continue;
                    if (b.min_lock && ct.tx->amount < *b.min_lock) continue;
                    if (auto r = fresh_report(o, ct, attempted_)) {
                        out.push_back(act::ReportLock{std::move(*r)});
                        break;
                    }
                }
            }
        }
        if (unlocks_) unlock_reports(o, std::nullopt, attempted_, out);
        return out;
    }

private:
    PolicyContext ctx_;
    bool locks_;
    bool unlocks_;
    std::set<AttemptKey> attempted_;
};

/** Seeded noise: transfers, burns, small sends, unregistered crossings, stray registrations and junk reports. */
class RandomActor final : public Policy {
public:
    RandomActor(const PolicyContext& ctx, ParamReader& r)
        : ctx_(ctx), y_(r.rate("y", *Rate::make(100, 1))), p_(r.ratio("act_probability", Ratio::of(1, 8)))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64& rng) override
    {
        std::vector<Action> out;
        if (std::uniform_int_distribution<std::int64_t>(0, p_.den - 1)(rng) >= p_.num) return out;
        const BridgeContract& k = *o.contract;
        Wow bal = k.wow_balance(o.self.eth, y_);
        auto pick = [&rng](std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(0, hi)(rng); };
        std::vector<const AgentIdentity*> peers;
        for (const auto& [name, id] : *o.directory)
            if (name != o.self.name) peers.push_back(&id);

        switch (pick(6)) {
        case 0:
            if (bal.positive() && !peers.empty())
                out.push_back(act::TransferWow{peers[pick(peers.size() - 1)]->eth, y_, Wow{pick(bal.units)}});
            break;
        case 1: {
            Wow w{y_.round_down_exact(std::min(pick(bal.units), queue_coverage(k, y_).units))};
            if (w.positive()) out.push_back(act::BurnWow{y_, w, o.self.doge});
            break;
        }
        case 2: {
            Doge have = o.doge_spendable(o.self.doge);
            if (have.positive() && !peers.empty())
                out.push_back(act::SendDoge{o.self.doge, peers[pick(peers.size() - 1)]->doge,
                                            Doge{pick(have.units / 10)}, EthAddress{}});
            break;
        }
        case 3: {
            // unregistered crossing: exact, short, or over capacity
            std::vector<const Bridge*> open;
            for (const auto& [id, b] : k.bridges())
                if (b.state == BridgeState::Open && !k.registrations().count(b.head)) open.push_back(&b);
            if (open.empty()) break;
            const Bridge* b = open[pick(open.size() - 1)];
            std::int64_t cap = b->backed().units;
            std::int64_t amount = std::vector<std::int64_t>{cap, cap / 2 + 1, cap + cap / 4}[pick(2)];
            if (o.doge_spendable(o.self.doge).units >= amount)
                out.push_back(act::SendDoge{o.self.doge, b->head, Doge{amount}, o.self.eth});
            break;
        }
        case 4: {
            // registration that is never followed by a lock
            for (const auto& [id, b] : k.bridges()) {
                if (b.state != BridgeState::Open || k.registrations().count(b.head)) continue;
                Eth deposit = registration_void_fee(ctx_.params, b.collateral) + ctx_.params.registration_dust;
                if (o.eth_balance >= deposit) out.push_back(act::Register{b.head, o.self.doge, o.self.eth, deposit});
                break;
            }
            break;
        }
        case 5: {
            // replay of an already-used transaction as a lock report
            std::uint64_t date = std::min(k.current_date(), o.tip_ordinal());
            if (date == 0) break;
            auto txs = scan_txs(*o.chain, o.tip, 1, date, [&](const Transaction& tx) {
                return k.used_txs().count(tx.id()) != 0;
            });
            if (txs.empty()) break;
            const auto& ct = txs[pick(txs.size() - 1)];
            if (auto r = build_tx_report(k, *o.chain, o.tip, ct.ordinal, ct.index))
                out.push_back(act::ReportLock{std::move(*r)});
            break;
        }
        default:
            if (bal.positive() && !peers.empty())
                out.push_back(act::TransferWow{o.self.eth, y_, Wow{pick(bal.units)}});
            break;
        }
        return out;
    }

private:
    PolicyContext ctx_;
    Rate y_;
    Ratio p_;
};

} // namespace

PolicyPtr make_operator(const PolicyContext& ctx, ParamReader& r, bool rational)
{
    return std::make_unique<Operator>(ctx, r, rational);
}

PolicyPtr make_crosser(const PolicyContext& ctx, ParamReader& r) { return std::make_unique<Crosser>(ctx, r); }

PolicyPtr make_hodler(const PolicyContext& ctx, ParamReader& r) { return std::make_unique<Hodler>(ctx, r); }

PolicyPtr make_reporter(const PolicyContext& ctx, ParamReader& r) { return std::make_unique<Reporter>(ctx, r); }

PolicyPtr make_random_actor(const PolicyContext& ctx, ParamReader& r)
{
    return std::make_unique<RandomActor>(ctx, r);
}

} // namespace dogebridge::detail
