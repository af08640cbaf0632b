// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <dogebridge/chain.hpp>
#include <dogebridge/merkle.hpp>
#include <dogebridge/params.hpp>
#include <dogebridge/result.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace dogebridge {

/** The (range, commitment, confirmation witness) triple a relayer proposes. */
struct Submission {
    std::uint64_t range = 0;
    Hash commitment;
    Hash witness;
    EthAddress relayer;
    std::uint64_t submitted_at_eth = 0;

    bool operator==(const Submission&) const = default;
};

/** Merkle root over header encodings, in order. */
Hash header_commitment(const std::vector<BlockHeader>& headers);

/// Opening of the last header of the preceding history entry.
struct PriorTipOpening {
    BlockHeader header;
    MerkleProof proof;
};

/**
 * Reveal-and-check stand-in for a succinct proof. The verifier recomputes
 * both roots from the revealed headers.
 */
struct ExtensionProof {
    std::vector<BlockHeader> revealed; // ordinals prior_date+1 .. range
    std::vector<BlockHeader> witness;  // ordinals range+1 .. range+c
    std::optional<PriorTipOpening> prior_tip;
};

/** What the verifier knows about the history state being extended. */
struct ExtensionBase {
    std::uint64_t prior_date = 0;
    /// Absent when the extension starts from an empty history.
    std::optional<Hash> prior_commitment;
    std::uint64_t prior_leaf_count = 0;
};

enum class ProofError { InsufficientChain, BaseMismatch };

/**
 * Builds the proof from the segment of `tip`'s ancestor path. The prior tip
 * opening is produced from the same path, so a history entry that does not
 * match the chain yields BaseMismatch.
 */
Result<ExtensionProof, ProofError> prove_extension(const ChainView& view, const Hash& tip, const ExtensionBase& base,
                                                   std::uint64_t range, std::uint64_t c);

/** Opens the last header of the entry described by `base` against the chain. */
Result<PriorTipOpening, ProofError> prior_tip_opening(const ChainView& view, const Hash& tip,
                                                     const ExtensionBase& base);

/** Commitment and witness roots an honest relayer would submit for this range. */
Result<std::pair<Hash, Hash>, ProofError> extension_roots(const ChainView& view, const Hash& tip,
                                                          std::uint64_t prior_date, std::uint64_t range,
                                                          std::uint64_t c);

enum class RejectReason {
    WrongLength,
    ShortWitness,
    BadPoW,
    BadTarget,
    BadOrdinal,
    BadLink,
    BadPriorTip,
    CommitmentMismatch,
    WitnessMismatch,
};

const char* to_string(RejectReason r);

struct ProofVerdict {
    bool accepted = false;
    RejectReason reason = RejectReason::WrongLength;

    static ProofVerdict accept() { return {true, RejectReason::WrongLength}; }
    static ProofVerdict reject(RejectReason r) { return {false, r}; }
};

ProofVerdict verify_extension_proof(const ExtensionBase& base, const Submission& sub, const ExtensionProof& proof,
                                    const ChainParams& chain, std::uint64_t c);

/** Seconds the oracle takes to return a verdict for an extension of this length. */
SimTime oracle_latency(const CostModel& m, std::uint64_t extension_len, std::uint64_t c);

} // namespace dogebridge
