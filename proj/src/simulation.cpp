// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/contract.hpp>
#include <dogebridge/simulation.hpp>

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>

namespace dogebridge {

using json = nlohmann::json;

namespace {

struct DogeBlockEvent {};
struct EthTickEvent {};
struct TimerEvent {};
using SimEvent = std::variant<DogeBlockEvent, EthTickEvent, TimerEvent>;

using BalanceMap = std::map<DogeAddress, std::int64_t>;

std::uint64_t sub_seed(std::uint64_t seed, const std::string& label)
{
    ByteWriter w;
    w.u64(seed);
    w.str(label);
    Hash h = sha256(w.bytes());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | h.bytes[i];
    return v;
}

json agent_params_json(const ScenarioConfig& cfg)
{
    return {{"c", cfg.params.c},
            {"d", cfg.params.d},
            {"k", cfg.params.k},
            {"max_extension_len", cfg.params.max_extension_len},
            {"required_deposit", required_relayer_deposit(cfg.params, cfg.cost).units},
            {"unlock_deadline_eth_blocks", unlock_deadline_eth_blocks(cfg.params, cfg.clock)},
            {"challenge_window_eth_blocks", challenge_window_eth_blocks(cfg.params.d, cfg.params.k, cfg.clock)}};
}

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg)
        : cfg_(cfg), net_rng_(sub_seed(cfg.seed, "network")), chain_(make_chain(cfg)), contract_(make_contract(cfg))
    {
        required_ = contract_.required_deposit();
        for (const auto& a : cfg_.agents) directory_.emplace(a.name, AgentIdentity::of(a.name));
        for (const auto& a : cfg_.agents) {
            Agent ag;
            ag.cfg = &a;
            ag.id = directory_.at(a.name);
            ag.rng.seed(sub_seed(cfg_.seed, "agent:" + a.name));
            PolicyContext ctx{ag.id, cfg_.params, cfg_.cost, cfg_.chain, required_};
            for (std::size_t j = 0; j < a.policies.size(); ++j) {
                auto p = make_policy(a.policies[j], ctx, a.params[j], "$.agents." + a.name);
                if (!p) throw std::invalid_argument(p.error().path + ": " + p.error().message);
                ag.policies.push_back(std::move(p).value());
            }
            wallets_[ag.id.eth] += a.eth;
            names_[address_hex(ag.id.eth)] = a.name;
            agents_.push_back(std::move(ag));
        }
        balances_[chain_.genesis()] = std::make_shared<BalanceMap>(chain_.balances(chain_.genesis()));
        digest_ = contract_.state_digest();
    }

    RunResult run()
    {
        write_start();
        queue_.schedule(0, EthTickEvent{});
        SimTime phase = cfg_.phase_jitter ? net_rng_() % (cfg_.phase_jitter + 1) : 0;
        queue_.schedule(next_doge_block_time(phase, cfg_.clock, net_rng_), DogeBlockEvent{});

        std::string reason = "sim_time";
        std::uint64_t processed = 0;
        while (!queue_.empty()) {
            if (queue_.next_time() > cfg_.end.sim_time) break;
            if (processed >= cfg_.end.max_events) {
                reason = "max_events";
                break;
            }
            auto item = queue_.pop();
            ++processed;
            now_ = item.time;
            if (std::holds_alternative<DogeBlockEvent>(item.event))
                on_doge_block();
            else if (std::holds_alternative<EthTickEvent>(item.event))
                on_eth_tick();
            else
                on_timer();
        }
        if (queue_.empty()) reason = "drained";

        RunResult r;
        r.summary = summary(reason, processed);
        trace_.write(now_, eth_now(), "scenario_end", "harness", r.summary, digest_);
        r.lines = trace_.take();
        r.digest = trace_digest(r.lines);
        r.summary["trace_digest"] = r.digest.hex();
        r.summary["trace_lines"] = r.lines.size();
        return r;
    }

private:
    struct Agent {
        const AgentConfig* cfg = nullptr;
        AgentIdentity id;
        std::vector<std::unique_ptr<Policy>> policies;
        std::mt19937_64 rng;
    };

    static ChainView make_chain(const ScenarioConfig& cfg)
    {
        std::vector<Transaction> alloc;
        std::uint64_t nonce = 0;
        for (const auto& a : cfg.agents) {
            if (!a.doge.positive()) continue;
            Transaction tx;
            tx.receiver = AgentIdentity::of(a.name).doge;
            tx.amount = a.doge;
            tx.nonce = nonce++;
            alloc.push_back(tx);
        }
        return ChainView(cfg.chain, ChainView::make_genesis(cfg.chain, std::move(alloc), 0), 0);
    }

    static BridgeContract make_contract(const ScenarioConfig& cfg)
    {
        auto k = BridgeContract::genesis(cfg.params, cfg.cost, cfg.clock, cfg.chain);
        if (!k) throw std::invalid_argument(std::string("contract parameters: ") + to_string(k.error()));
        return std::move(k).value();
    }

    std::uint64_t eth_now() const { return ethereum_time(now_, cfg_.clock); }

    // -----------------------------------------------------------------------
    // chain bookkeeping

    const BalanceMap& balances_at(const Hash& h)
    {
        auto it = balances_.find(h);
        if (it != balances_.end()) return *it->second;
        // walk back to a cached ancestor, then apply forward
        std::vector<Hash> path;
        Hash cur = h;
        while (!balances_.count(cur)) {
            path.push_back(cur);
            cur = chain_.at(cur).block.header.parent;
        }
        auto base = balances_.at(cur);
        for (auto p = path.rbegin(); p != path.rend(); ++p) {
            auto next = std::make_shared<BalanceMap>(*base);
            for (const auto& tx : chain_.at(*p).block.txs) {
                if (!tx.sender.is_zero()) (*next)[tx.sender] -= tx.amount.units;
                (*next)[tx.receiver] += tx.amount.units;
            }
            balances_[*p] = next;
            base = next;
        }
        return *balances_.at(h);
    }

    std::int64_t balance(const Hash& tip, const DogeAddress& a)
    {
        const auto& m = balances_at(tip);
        auto it = m.find(a);
        return it == m.end() ? 0 : it->second;
    }

    Doge spendable(const Hash& tip, const DogeAddress& a)
    {
        std::int64_t v = balance(tip, a);
        for (const auto& tx : mempool_)
            if (tx.sender == a) v -= tx.amount.units;
        return Doge{std::max<std::int64_t>(v, 0)};
    }

    void record_block(const Block& b, const std::string& miner)
    {
        json txs = json::array();
        for (const auto& tx : b.txs) txs.push_back(tx.id().hex());
        Hash h = b.hash();
        trace_.write(now_, eth_now(), "doge_block", miner,
                     {{"hash", h.hex()},
                      {"ordinal", b.header.ordinal},
                      {"parent", b.header.parent.hex()},
                      {"header", to_hex(b.header.encode())},
                      {"txs", std::move(txs)},
                      {"best", chain_.best_tip() == h}},
                     digest_);
    }

    void on_doge_block()
    {
        Hash parent = chain_.best_tip();
        BalanceMap bal = balances_at(parent);
        std::vector<Transaction> included, rest;
        for (const auto& tx : mempool_) {
            if (bal[tx.sender] >= tx.amount.units) {
                bal[tx.sender] -= tx.amount.units;
                bal[tx.receiver] += tx.amount.units;
                included.push_back(tx);
            } else {
                rest.push_back(tx);
            }
        }
        auto block = chain_.mine_block(parent, included, now_, net_rng_());
        if (!block) throw std::logic_error(std::string("mining failed: ") + to_string(block.error()));
        if (auto added = chain_.add_block(*block, now_); !added)
            throw std::logic_error(std::string("mined block rejected: ") + to_string(added.error()));
        mempool_ = std::move(rest);
        record_block(*block, "network");
        queue_.schedule(next_doge_block_time(now_, cfg_.clock, net_rng_), DogeBlockEvent{});
    }

    // -----------------------------------------------------------------------
    // contract plumbing

    std::string actor_name(const std::string& hex) const
    {
        auto it = names_.find(hex);
        return it == names_.end() ? hex : it->second;
    }

    void flush()
    {
        auto events = contract_.drain_events();
        if (!events.empty()) digest_ = contract_.state_digest();
        for (auto& ev : events) trace_.write(now_, eth_now(), ev.kind, actor_name(ev.actor), std::move(ev.payload), digest_);
        for (const auto& p : contract_.drain_outbox()) wallets_[p.to] += p.amount;
    }

    void schedule_timer()
    {
        auto t = contract_.next_timer(now_);
        if (t && timers_.insert(*t).second) queue_.schedule(*t, TimerEvent{});
    }

    void on_timer()
    {
        timers_.erase(now_);
        contract_.on_tick(now_);
        flush();
        schedule_timer();
    }

    // -----------------------------------------------------------------------
    // agents

    bool offline(const Agent& a) const
    {
        for (const auto& [from, to] : a.cfg->offline)
            if (now_ >= from && now_ < to) return true;
        return false;
    }

    void on_eth_tick()
    {
        Rate rate = *cfg_.rates.rate_at(now_);
        if (!last_rate_ || *last_rate_ != rate) {
            last_rate_ = rate;
            trace_.write(now_, eth_now(), "rate", "harness", {{"rate", rate.to_string()}}, digest_);
        }
        contract_.on_tick(now_);
        flush();

        for (auto& a : agents_) {
            if (offline(a)) continue;
            SimTime delay = a.cfg->visibility_delay;
            Hash tip = delay == 0 ? chain_.best_tip() : chain_.best_tip_visible(now_ >= delay ? now_ - delay : 0);
            Observation o;
            o.now = now_;
            o.eth = eth_now();
            o.chain = &chain_;
            o.tip = tip;
            o.contract = &contract_;
            o.true_rate = rate;
            o.self = a.id;
            o.eth_balance = wallets_[a.id.eth];
            o.doge_spendable = [this, tip](const DogeAddress& addr) { return spendable(tip, addr); };
            o.directory = &directory_;
            for (auto& p : a.policies) {
                auto actions = p->step(o, a.rng);
                for (const auto& act : actions) {
                    execute(a, tip, act);
                    flush();
                }
                o.eth_balance = wallets_[a.id.eth];
            }
        }
        schedule_timer();
        check_quiescent();
        queue_.schedule(eth_block_start(eth_now() + 1, cfg_.clock), EthTickEvent{});
    }

    void reject(const Agent& a, const Action& act, const std::string& error)
    {
        trace_.write(now_, eth_now(), "action_rejected", a.id.name, {{"action", action_name(act)}, {"error", error}},
                     digest_);
    }

    void policy_bug(const Agent& a, const Action& act, const std::string& error)
    {
        ++policy_bugs_;
        trace_.write(now_, eth_now(), "policy_bug", a.id.name, {{"action", action_name(act)}, {"error", error}},
                     digest_);
    }

    bool debit_eth(const Agent& a, const Action& act, Eth amount)
    {
        Eth& w = wallets_[a.id.eth];
        if (amount.units < 0 || w < amount) {
            policy_bug(a, act, "EthOverdraft");
            return false;
        }
        w -= amount;
        return true;
    }

    bool owns(const Agent& a, const DogeAddress& addr) const
    {
        if (addr == a.id.doge) return true;
        for (const auto& p : a.policies) {
            auto c = p->controlled();
            if (std::find(c.begin(), c.end(), addr) != c.end()) return true;
        }
        return false;
    }

    template <typename E>
    void check(const Agent& a, const Action& act, const Result<E, ContractError>& r)
    {
        if (!r) reject(a, act, to_string(r.error()));
    }

    template <typename E>
    void check(const Agent& a, const Action& act, const Result<E, ContractError>& r, Eth refund_on_error)
    {
        if (!r) {
            reject(a, act, to_string(r.error()));
            wallets_[a.id.eth] += refund_on_error;
        }
    }

    void execute(const Agent& a, const Hash& tip, const Action& act)
    {
        const EthAddress& me = a.id.eth;
        if (auto* s = std::get_if<act::SendDoge>(&act)) {
            if (!owns(a, s->from)) return policy_bug(a, act, "NotOwned");
            if (!s->amount.positive()) return reject(a, act, "NonPositiveAmount");
            if (spendable(tip, s->from) < s->amount) return policy_bug(a, act, "DogeOverdraft");
            Transaction tx{s->from, s->to, s->amount, tx_nonce_++, s->memo};
            mempool_.push_back(tx);
            trace_.write(now_, eth_now(), "doge_tx", a.id.name,
                         {{"id", tx.id().hex()},
                          {"from", address_hex(tx.sender)},
                          {"to", address_hex(tx.receiver)},
                          {"amount", tx.amount.units},
                          {"memo", address_hex(tx.memo)}},
                         digest_);
        } else if (auto* ob = std::get_if<act::OpenBridge>(&act)) {
            Eth total = ob->x + ob->bounty;
            if (!debit_eth(a, act, total)) return;
            check(a, act, contract_.open_bridge(me, ob->x, ob->y, ob->head, ob->fee, ob->min_lock, ob->bounty, now_),
                  total);
        } else if (auto* rg = std::get_if<act::Register>(&act)) {
            if (!debit_eth(a, act, rg->deposit)) return;
            check(a, act, contract_.register_crossing(me, rg->head, rg->sender, rg->mint_to, rg->deposit, now_),
                  rg->deposit);
        } else if (auto* br = std::get_if<act::BecomeRelayer>(&act)) {
            if (!debit_eth(a, act, br->deposit)) return;
            check(a, act, contract_.become_relayer(me, br->deposit, now_), br->deposit);
        } else if (std::holds_alternative<act::WithdrawRelayer>(act)) {
            check(a, act, contract_.withdraw_relayer_deposit(me, now_));
        } else if (auto* sb = std::get_if<act::Submit>(&act)) {
            check(a, act, contract_.submit_extension(me, sb->range, sb->commitment, sb->witness, now_));
        } else if (auto* cr = std::get_if<act::ChallengeRange>(&act)) {
            check(a, act, contract_.challenge_range(me, cr->range, cr->commitment, cr->witness, now_));
        } else if (auto* cc = std::get_if<act::ChallengeCommitment>(&act)) {
            check(a, act, contract_.challenge_commitment(me, cc->epoch, now_));
        } else if (auto* sp = std::get_if<act::SupplyProof>(&act)) {
            check(a, act, contract_.supply_proof(me, sp->thread, sp->proof, now_));
        } else if (auto* rl = std::get_if<act::ReportLock>(&act)) {
            (void)contract_.report_lock(me, rl->report, now_);
        } else if (auto* bw = std::get_if<act::BurnWow>(&act)) {
            check(a, act, contract_.burn_wow(me, bw->y, bw->w, bw->dest, now_));
        } else if (auto* ru = std::get_if<act::ReportUnlock>(&act)) {
            (void)contract_.report_unlock(me, ru->burn, ru->report, now_);
        } else if (auto* rm = std::get_if<act::ReportMissing>(&act)) {
            check(a, act, contract_.report_missing_doge(me, rm->y, rm->n, rm->report, now_));
        } else if (auto* bt = std::get_if<act::Backtrack>(&act)) {
            check(a, act, contract_.backtrack(me, bt->from_index, bt->range, bt->commitment, bt->witness, now_));
        } else if (auto* pd = std::get_if<act::ProposeDeep>(&act)) {
            check(a, act, contract_.propose_deep(me, pd->from_index, pd->range, pd->commitment, pd->witness, now_));
        } else if (std::holds_alternative<act::ObjectDeep>(act)) {
            check(a, act, contract_.object_deep(me, now_));
        } else if (auto* tw = std::get_if<act::TransferWow>(&act)) {
            check(a, act, contract_.wow_transfer(me, tw->to, tw->y, tw->amount, now_));
        } else if (auto* pb = std::get_if<act::PublishBlocks>(&act)) {
            for (const auto& b : pb->blocks) {
                auto added = chain_.add_block(b, now_);
                if (!added) return reject(a, act, to_string(added.error()));
                if (*added == AddOutcome::Accepted) record_block(b, a.id.name);
            }
        }
    }

    // -----------------------------------------------------------------------
    // quiescence

    void check_quiescent()
    {
        if (!mempool_.empty() || !contract_.registrations().empty()) return;
        for (const auto& [id, b] : contract_.burns())
            if (!b.complete) return;
        const Hash& tip = chain_.best_tip();
        auto key = std::make_tuple(tip, contract_.used_txs().size(), contract_.bridges().size());
        if (last_quiescent_key_ && *last_quiescent_key_ == key) return;
        last_quiescent_key_ = key;

        std::set<DogeAddress> heads;
        for (const auto& [id, b] : contract_.bridges()) heads.insert(b.head);
        std::uint64_t tip_ordinal = chain_.at(tip).block.header.ordinal;
        auto related = scan_txs(chain_, tip, 1, tip_ordinal, [&](const Transaction& tx) {
            return heads.count(tx.sender) || heads.count(tx.receiver);
        });
        for (const auto& ct : related)
            if (!contract_.used_txs().count(ct.tx->id())) return;

        json locked = json::object();
        json supply = json::object();
        std::set<std::pair<Rate, DogeAddress>> seen;
        for (const auto& [id, b] : contract_.bridges()) {
            std::string y = b.y.to_string();
            if (!locked.contains(y)) locked[y] = 0;
            if (!b.minted() || !seen.insert({b.y, b.head}).second) continue;
            locked[y] = locked[y].get<std::int64_t>() + balance(tip, b.head);
        }
        for (const auto& [y, m] : contract_.wow_balances()) {
            supply[y.to_string()] = contract_.wow_supply(y).units;
            if (!locked.contains(y.to_string())) locked[y.to_string()] = 0;
        }
        json payload = {{"locked", locked}, {"supply", supply}, {"doge_tip", tip_ordinal}};
        if (last_quiescent_ == json({{"locked", locked}, {"supply", supply}})) return;
        last_quiescent_ = json({{"locked", locked}, {"supply", supply}});
        trace_.write(now_, eth_now(), "quiescent", "harness", std::move(payload), digest_);
    }

    // -----------------------------------------------------------------------
    // start / end records

    void write_start()
    {
        json agents = json::array();
        for (const auto& a : agents_)
            agents.push_back({{"name", a.id.name},
                              {"policies", a.cfg->policies},
                              {"eth_address", address_hex(a.id.eth)},
                              {"doge_address", address_hex(a.id.doge)},
                              {"eth", a.cfg->eth.units},
                              {"doge", a.cfg->doge.units}});
        json rates = json::array();
        for (const auto& p : cfg_.rates.points()) rates.push_back({{"t", p.t}, {"rate", p.rate.to_string()}});
        const Block& g = chain_.at(chain_.genesis()).block;
        trace_.write(0, 0, "scenario_start", "harness",
                     {{"name", cfg_.name},
                      {"tags", cfg_.tags},
                      {"seed", cfg_.seed},
                      {"clock",
                       {{"eth_block_seconds", cfg_.clock.eth_block_seconds},
                        {"doge_block_seconds", cfg_.clock.doge_block_seconds},
                        {"interarrival", cfg_.clock.doge_interarrival == Interarrival::Deterministic ? "deterministic"
                                                                                                    : "exponential"}}},
                      {"params", agent_params_json(cfg_)},
                      {"chain",
                       {{"target_bits", cfg_.target_bits},
                        {"pow", cfg_.chain.pow.algorithm == PowAlgorithm::Sha256d ? "sha256d" : "scrypt"}}},
                      {"rates", rates},
                      {"agents", agents},
                      {"genesis", {{"hash", g.hash().hex()}, {"header", to_hex(g.header.encode())}}}},
                     digest_);
    }

    json summary(const std::string& reason, std::uint64_t processed)
    {
        const Hash& tip = chain_.best_tip();
        json history = json::array();
        for (std::size_t i = 0; i < contract_.history().size(); ++i) {
            const auto& e = contract_.history()[i];
            history.push_back({{"index", i},
                               {"range", e.range},
                               {"prior_date", e.prior_date},
                               {"commitment", e.commitment.hex()},
                               {"relayer", actor_name(address_hex(e.relayer))}});
        }
        json supply = json::object();
        for (const auto& [y, m] : contract_.wow_balances()) supply[y.to_string()] = contract_.wow_supply(y).units;
        json agents = json::object();
        for (const auto& a : agents_) {
            json wow = json::object();
            for (const auto& [y, m] : contract_.wow_balances()) {
                Wow w = contract_.wow_balance(a.id.eth, y);
                if (w.positive()) wow[y.to_string()] = w.units;
            }
            auto acct = contract_.relayers().find(a.id.eth);
            agents[a.id.name] = {{"eth", wallets_[a.id.eth].units},
                                 {"doge", balance(tip, a.id.doge)},
                                 {"wow", wow},
                                 {"relayer_deposit", acct == contract_.relayers().end() ? 0 : acct->second.deposit.units}};
        }
        json bridges = json::array();
        for (const auto& [id, b] : contract_.bridges())
            bridges.push_back({{"id", id},
                               {"operator", actor_name(address_hex(b.operator_addr))},
                               {"y", b.y.to_string()},
                               {"state", to_string(b.state)},
                               {"collateral", b.collateral.units},
                               {"initial_collateral", b.initial_collateral.units},
                               {"head_balance", balance(tip, b.head)}});
        json burns = json::array();
        for (const auto& [id, b] : contract_.burns())
            burns.push_back({{"id", id},
                             {"y", b.y.to_string()},
                             {"w", b.w.units},
                             {"complete", b.complete},
                             {"d_recv", b.d_recv.units},
                             {"eth", b.eth_recv.units}});
        return {{"end_reason", reason},
                {"events_processed", processed},
                {"sim_time", now_},
                {"doge_tip", {{"hash", tip.hex()}, {"ordinal", chain_.at(tip).block.header.ordinal}}},
                {"doge_blocks", chain_.size()},
                {"current_date", contract_.current_date()},
                {"mode", to_string(contract_.mode())},
                {"history", history},
                {"wow_supply", supply},
                {"agents", agents},
                {"bridges", bridges},
                {"burns", burns},
                {"used_txs", contract_.used_txs().size()},
                {"policy_bugs", policy_bugs_},
                {"contract_held", contract_.held().units}};
    }

    const ScenarioConfig& cfg_;
    std::mt19937_64 net_rng_;
    ChainView chain_;
    BridgeContract contract_;
    Eth required_;
    std::map<std::string, AgentIdentity> directory_;
    std::map<std::string, std::string> names_;
    std::vector<Agent> agents_;
    std::map<EthAddress, Eth> wallets_;
    std::map<Hash, std::shared_ptr<BalanceMap>> balances_;
    std::vector<Transaction> mempool_;
    std::uint64_t tx_nonce_ = 1;
    EventQueue<SimEvent> queue_;
    std::set<SimTime> timers_;
    TraceWriter trace_;
    Hash digest_;
    SimTime now_ = 0;
    std::optional<Rate> last_rate_;
    std::uint64_t policy_bugs_ = 0;
    std::optional<std::tuple<Hash, std::size_t, std::size_t>> last_quiescent_key_;
    json last_quiescent_;
};

} // namespace

RunResult run_scenario(const ScenarioConfig& config)
{
    Simulation sim(config);
    return sim.run();
}

ReplayResult replay_check(const ScenarioConfig& config, const std::vector<std::string>& lines)
{
    RunResult fresh = run_scenario(config);
    ReplayResult r;
    std::size_t n = std::min(fresh.lines.size(), lines.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (fresh.lines[i] != lines[i]) {
            r.divergence = i;
            r.detail = "line " + std::to_string(i + 1) + " differs";
            return r;
        }
    }
    if (fresh.lines.size() != lines.size()) {
        r.divergence = n;
        r.detail = lines.size() < fresh.lines.size() ? "trace truncated after line " + std::to_string(n)
                                                     : "trace has extra lines after line " + std::to_string(n);
        return r;
    }
    r.identical = true;
    return r;
}

} // namespace dogebridge
