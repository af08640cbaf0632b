// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "agents_internal.hpp"

#include <set>

namespace dogebridge::detail {

namespace {

/** Deposit bookkeeping and proof answering shared by every relayer policy. */
class RelayerBase : public Policy {
public:
    RelayerBase(const PolicyContext& ctx, ParamReader& r)
        : ctx_(ctx), deposit_(r.eth("deposit", ctx.required_deposit)), start_(r.opt_time("start_after").value_or(0))
    {
    }

protected:
    /// False until the agent holds relayer status.
    bool ensure_relayer(const Observation& o, std::vector<Action>& out)
    {
        if (o.contract->is_relayer(o.self.eth)) return true;
        if (!joined_) {
            joined_ = true;
            out.push_back(act::BecomeRelayer{deposit_});
        }
        return false;
    }

    /// Answers own proof threads with whatever `prover` yields for the submission.
    template <typename Prover>
    void answer_threads(const Observation& o, std::vector<Action>& out, Prover&& prover)
    {
        for (const auto& [id, t] : o.contract->threads()) {
            if (t.resolved || t.verdict_at || t.relayer != o.self.eth || answered_.count(id)) continue;
            answered_.insert(id);
            if (auto proof = prover(t)) out.push_back(act::SupplyProof{id, std::move(*proof)});
        }
    }

    std::optional<ExtensionProof> honest_proof(const Observation& o, const ProofThread& t) const
    {
        auto p = prove_extension(*o.chain, o.tip, t.base, t.sub.range, ctx_.params.c);
        if (!p) return std::nullopt;
        return std::move(p).value();
    }

    bool window_open(const Observation& o) const
    {
        const auto& a = o.contract->active();
        return a && o.eth < a->window_start_eth + o.contract->challenge_window();
    }

    PolicyContext ctx_;
    Eth deposit_;
    SimTime start_;
    bool joined_ = false;
    std::set<ThreadId> answered_;
};

class HonestRelayer final : public RelayerBase {
public:
    HonestRelayer(const PolicyContext& ctx, ParamReader& r, bool lazy)
        : RelayerBase(ctx, r), challenge_(r.boolean("challenge", !lazy)), submit_(r.boolean("submit", true))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        if (o.now < start_ || !ensure_relayer(o, out)) return out;
        answer_threads(o, out, [&](const ProofThread& t) { return honest_proof(o, t); });

        const BridgeContract& k = *o.contract;
        const auto c = ctx_.params.c;
        std::uint64_t m = maximal_range(*o.chain, o.tip, c);

        if (const auto& deep = k.deep_proposal(); deep && deep->proposed_at != objected_) {
            ExtensionBase base = k.base_at(deep->keep);
            auto roots = extension_roots(*o.chain, o.tip, base.prior_date, deep->sub.range, c);
            if (!roots || roots->first != deep->sub.commitment || roots->second != deep->sub.witness) {
                objected_ = deep->proposed_at;
                out.push_back(act::ObjectDeep{});
            }
        }

        if (const auto& a = k.active()) {
            if (a->sub.relayer == o.self.eth || !challenge_ || !window_open(o)) return out;
            std::uint64_t last_eth = a->window_start_eth + k.challenge_window() - 1;
            if (!verified_.count(a->epoch)) {
                // Judge only once the chain covers the claimed witness, or at the last moment.
                if (a->sub.range + c > o.tip_ordinal() && o.eth < last_eth) return out;
                auto roots = extension_roots(*o.chain, o.tip, a->prior_date, a->sub.range, c);
                if (!roots || roots->first != a->sub.commitment || roots->second != a->sub.witness) {
                    verified_.insert(a->epoch);
                    out.push_back(act::ChallengeCommitment{a->epoch});
                    return out;
                }
                verified_.insert(a->epoch);
            }
            std::uint64_t cap = a->prior_date + ctx_.params.max_extension_len;
            std::uint64_t alt = std::min(m, cap);
            if (alt >= a->sub.range + ctx_.params.d) {
                auto roots = extension_roots(*o.chain, o.tip, a->prior_date, alt, c);
                if (roots) out.push_back(act::ChallengeRange{alt, roots->first, roots->second});
            }
            return out;
        }

        if (!submit_) return out;
        if (auto bad = first_divergent_entry(k, *o.chain, o.tip)) {
            ExtensionBase base = k.base_at(*bad);
            std::uint64_t range = std::min(m, base.prior_date + ctx_.params.max_extension_len);
            auto roots = extension_roots(*o.chain, o.tip, base.prior_date, range, c);
            if (!roots) return out;
            Eth need = verification_cost_eth(ctx_.cost, k.current_date() - base.prior_date, c);
            auto acct = k.relayers().find(o.self.eth);
            if (acct != k.relayers().end() && need <= acct->second.deposit)
                out.push_back(act::Backtrack{*bad, range, roots->first, roots->second});
            else if (!k.deep_proposal())
                out.push_back(act::ProposeDeep{*bad, range, roots->first, roots->second});
            return out;
        }
        std::uint64_t date = k.current_date();
        std::uint64_t range = std::min(m, date + ctx_.params.max_extension_len);
        if (range <= date) return out;
        auto roots = extension_roots(*o.chain, o.tip, date, range, c);
        if (roots) out.push_back(act::Submit{range, roots->first, roots->second});
        return out;
    }

private:
    bool challenge_;
    bool submit_;
    std::set<std::uint64_t> verified_;
    SimTime objected_ = ~SimTime{0};
};

/**
 * Commits a fork that branches at the contract's current date: the first
 * blocks carry real proof-of-work but lose to the main chain, and the
 * confirmation witness is forged because the attacker cannot mine it in time.
 */
class OrphanAttacker final : public RelayerBase {
public:
    OrphanAttacker(const PolicyContext& ctx, ParamReader& r)
        : RelayerBase(ctx, r), attacks_(r.u64("attacks", 1)), supply_(r.boolean("supply_proof", true))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64& rng) override
    {
        std::vector<Action> out;
        if (o.now < start_ || !ensure_relayer(o, out)) return out;
        answer_threads(o, out, [&](const ProofThread& t) -> std::optional<ExtensionProof> {
            auto it = proofs_.find(t.sub.commitment);
            if (!supply_ || it == proofs_.end()) return std::nullopt;
            return it->second;
        });

        const BridgeContract& k = *o.contract;
        if (done_ >= attacks_ || k.active()) return out;
        if (first_divergent_entry(k, *o.chain, o.tip)) return out;
        std::uint64_t prior = k.current_date();
        std::uint64_t m = maximal_range(*o.chain, o.tip, ctx_.params.c);
        if (m <= prior) return out;
        auto base_hash = o.chain->ancestor_at(o.tip, prior);
        if (!base_hash) return out;

        std::size_t len = m - prior;
        std::size_t c = ctx_.params.c;
        auto side = mine_side_chain(*o.chain, *base_hash, len + c, c, o.now, rng);
        std::vector<BlockHeader> revealed, witness;
        for (std::size_t i = 0; i < side.size(); ++i) (i < len ? revealed : witness).push_back(side[i].header);

        ExtensionProof proof;
        proof.revealed = revealed;
        proof.witness = witness;
        ExtensionBase base = k.base_at(k.history().size());
        if (base.prior_commitment) {
            auto open = prior_tip_opening(*o.chain, o.tip, base);
            if (!open) return out;
            proof.prior_tip = std::move(open).value();
        }
        Hash commitment = header_commitment(revealed);
        proofs_[commitment] = std::move(proof);
        ++done_;

        side.resize(len);
        out.push_back(act::PublishBlocks{std::move(side)});
        out.push_back(act::Submit{m, commitment, header_commitment(witness)});
        return out;
    }

private:
    std::uint64_t attacks_;
    bool supply_;
    std::uint64_t done_ = 0;
    std::map<Hash, ExtensionProof> proofs_;
};

/** Claims a range past the chain tip with a made-up commitment. */
class HighRangeAttacker final : public RelayerBase {
public:
    HighRangeAttacker(const PolicyContext& ctx, ParamReader& r)
        : RelayerBase(ctx, r), extra_(r.u64("extra_blocks", 30)), attacks_(r.u64("attacks", 1))
    {
    }

    std::vector<Action> step(const Observation& o, std::mt19937_64& rng) override
    {
        std::vector<Action> out;
        if (o.now < start_ || !ensure_relayer(o, out)) return out;
        const BridgeContract& k = *o.contract;
        if (done_ >= attacks_ || k.active()) return out;
        std::uint64_t range = std::min(o.tip_ordinal() + extra_, k.current_date() + ctx_.params.max_extension_len);
        if (range <= k.current_date()) return out;
        auto noise = [&rng] {
            ByteWriter w;
            w.u64(rng());
            w.u64(rng());
            return sha256(w.bytes());
        };
        ++done_;
        out.push_back(act::Submit{range, noise(), noise()});
        return out;
    }

private:
    std::uint64_t extra_;
    std::uint64_t attacks_;
    std::uint64_t done_ = 0;
};

/** Disputes every other relayer's commitment regardless of its validity. */
class DosChallenger final : public RelayerBase {
public:
    DosChallenger(const PolicyContext& ctx, ParamReader& r) : RelayerBase(ctx, r) {}

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        if (o.now < start_ || !ensure_relayer(o, out)) return out;
        const auto& a = o.contract->active();
        if (!a || a->sub.relayer == o.self.eth || !window_open(o) || hit_.count(a->epoch)) return out;
        hit_.insert(a->epoch);
        out.push_back(act::ChallengeCommitment{a->epoch});
        return out;
    }

private:
    std::set<std::uint64_t> hit_;
};

/**
 * Waits until the last Ethereum block of each challenge window and then
 * offers its own maximal range, hoping the chain has grown by d meanwhile.
 */
class GapExploiter final : public RelayerBase {
public:
    GapExploiter(const PolicyContext& ctx, ParamReader& r) : RelayerBase(ctx, r) {}

    std::vector<Action> step(const Observation& o, std::mt19937_64&) override
    {
        std::vector<Action> out;
        if (o.now < start_ || !ensure_relayer(o, out)) return out;
        answer_threads(o, out, [&](const ProofThread& t) { return honest_proof(o, t); });
        const BridgeContract& k = *o.contract;
        const auto& a = k.active();
        if (!a || a->sub.relayer == o.self.eth || tried_.count(a->epoch)) return out;
        if (o.eth + 1 != a->window_start_eth + k.challenge_window()) return out;
        tried_.insert(a->epoch);
        std::uint64_t m = maximal_range(*o.chain, o.tip, ctx_.params.c);
        m = std::min(m, a->prior_date + ctx_.params.max_extension_len);
        if (m <= a->sub.range) return out;
        auto roots = extension_roots(*o.chain, o.tip, a->prior_date, m, ctx_.params.c);
        if (roots) out.push_back(act::ChallengeRange{m, roots->first, roots->second});
        return out;
    }

private:
    std::set<std::uint64_t> tried_;
};

} // namespace

PolicyPtr make_honest_relayer(const PolicyContext& ctx, ParamReader& r, bool lazy)
{
    return std::make_unique<HonestRelayer>(ctx, r, lazy);
}

PolicyPtr make_orphan_attacker(const PolicyContext& ctx, ParamReader& r)
{
    return std::make_unique<OrphanAttacker>(ctx, r);
}

PolicyPtr make_high_range_attacker(const PolicyContext& ctx, ParamReader& r)
{
    return std::make_unique<HighRangeAttacker>(ctx, r);
}

PolicyPtr make_dos_challenger(const PolicyContext& ctx, ParamReader& r)
{
    return std::make_unique<DosChallenger>(ctx, r);
}

PolicyPtr make_gap_exploiter(const PolicyContext& ctx, ParamReader& r)
{
    return std::make_unique<GapExploiter>(ctx, r);
}

} // namespace dogebridge::detail
