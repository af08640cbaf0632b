// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <dogebridge/proof.hpp>

namespace dogebridge {

Hash header_commitment(const std::vector<BlockHeader>& headers)
{
    std::vector<Bytes> leaves;
    leaves.reserve(headers.size());
    for (const auto& h : headers) leaves.push_back(h.encode());
    return merkle_root(leaves);
}

Result<std::pair<Hash, Hash>, ProofError> extension_roots(const ChainView& view, const Hash& tip,
                                                          std::uint64_t prior_date, std::uint64_t range,
                                                          std::uint64_t c)
{
    if (range <= prior_date) return fail(ProofError::InsufficientChain);
    auto revealed = view.headers_range(tip, prior_date + 1, range);
    auto witness = view.headers_range(tip, range + 1, range + c);
    if (!revealed || !witness) return fail(ProofError::InsufficientChain);
    return std::make_pair(header_commitment(*revealed), header_commitment(*witness));
}

Result<PriorTipOpening, ProofError> prior_tip_opening(const ChainView& view, const Hash& tip,
                                                     const ExtensionBase& base)
{
    std::uint64_t n = base.prior_leaf_count;
    if (!base.prior_commitment || n == 0 || n > base.prior_date) return fail(ProofError::BaseMismatch);
    auto prev = view.headers_range(tip, base.prior_date - n + 1, base.prior_date);
    if (!prev) return fail(ProofError::BaseMismatch);
    std::vector<Bytes> leaves;
    leaves.reserve(prev->size());
    for (const auto& h : *prev) leaves.push_back(h.encode());
    if (merkle_root(leaves) != *base.prior_commitment) return fail(ProofError::BaseMismatch);
    return PriorTipOpening{prev->back(), merkle_prove(leaves, n - 1)};
}

Result<ExtensionProof, ProofError> prove_extension(const ChainView& view, const Hash& tip, const ExtensionBase& base,
                                                   std::uint64_t range, std::uint64_t c)
{
    if (range <= base.prior_date) return fail(ProofError::InsufficientChain);
    auto revealed = view.headers_range(tip, base.prior_date + 1, range);
    auto witness = view.headers_range(tip, range + 1, range + c);
    if (!revealed || !witness) return fail(ProofError::InsufficientChain);

    ExtensionProof proof;
    proof.revealed = std::move(revealed).value();
    proof.witness = std::move(witness).value();

    if (base.prior_commitment) {
        auto open = prior_tip_opening(view, tip, base);
        if (!open) return fail(open.error());
        proof.prior_tip = std::move(open).value();
    }
    return proof;
}

const char* to_string(RejectReason r)
{
    switch (r) {
    case RejectReason::WrongLength: return "WrongLength";
    case RejectReason::ShortWitness: return "ShortWitness";
    case RejectReason::BadPoW: return "BadPoW";
    case RejectReason::BadTarget: return "BadTarget";
    case RejectReason::BadOrdinal: return "BadOrdinal";
    case RejectReason::BadLink: return "BadLink";
    case RejectReason::BadPriorTip: return "BadPriorTip";
    case RejectReason::CommitmentMismatch: return "CommitmentMismatch";
    case RejectReason::WitnessMismatch: return "WitnessMismatch";
    }
    return "?";
}

ProofVerdict verify_extension_proof(const ExtensionBase& base, const Submission& sub, const ExtensionProof& proof,
                                    const ChainParams& chain, std::uint64_t c)
{
    using R = RejectReason;
    if (sub.range <= base.prior_date || proof.revealed.size() != sub.range - base.prior_date)
        return ProofVerdict::reject(R::WrongLength);
    if (proof.witness.size() < c) return ProofVerdict::reject(R::ShortWitness);
    if (proof.witness.size() > c) return ProofVerdict::reject(R::WrongLength);

    std::optional<Hash> parent;
    if (base.prior_commitment) {
        if (!proof.prior_tip) return ProofVerdict::reject(R::BadPriorTip);
        const auto& open = *proof.prior_tip;
        if (open.header.ordinal != base.prior_date || open.proof.leaf_count != base.prior_leaf_count ||
            open.proof.leaf_index + 1 != base.prior_leaf_count ||
            !merkle_verify(*base.prior_commitment, open.header.encode(), open.proof))
            return ProofVerdict::reject(R::BadPriorTip);
        parent = open.header.hash();
    }

    std::uint64_t expect = base.prior_date + 1;
    auto check_seq = [&](const std::vector<BlockHeader>& seq) -> std::optional<R> {
        for (const auto& h : seq) {
            if (h.target != chain.target) return R::BadTarget;
            if (!pow_check(h, chain.pow)) return R::BadPoW;
            if (h.ordinal != expect) return R::BadOrdinal;
            if (parent && h.parent != *parent) return R::BadLink;
            parent = h.hash();
            ++expect;
        }
        return std::nullopt;
    };
    if (auto r = check_seq(proof.revealed)) return ProofVerdict::reject(*r);
    if (auto r = check_seq(proof.witness)) return ProofVerdict::reject(*r);

    if (header_commitment(proof.revealed) != sub.commitment) return ProofVerdict::reject(R::CommitmentMismatch);
    if (header_commitment(proof.witness) != sub.witness) return ProofVerdict::reject(R::WitnessMismatch);
    return ProofVerdict::accept();
}

SimTime oracle_latency(const CostModel& m, std::uint64_t extension_len, std::uint64_t c)
{
    return m.latency_per_block * (extension_len + c);
}

} // namespace dogebridge
