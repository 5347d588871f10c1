#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "polchain/block.hpp"
#include "polchain/chain_store.hpp"
#include "polchain/geo.hpp"
#include "polchain/messages.hpp"

namespace polchain {

enum class RejectReason {
    NotAContact,
    BadSignature,
    OutOfRange,
    StaleAnchor,
    NotAddressee,
    DuplicateProof,
    StaleTimestamp,
    SelfProof,
    CollusionSuspect,
    InvalidCoordinates,
    MonopolyViolation,
    NotLeader,
    MalformedBlock,
};

inline constexpr RejectReason kAllRejectReasons[] = {
    RejectReason::NotAContact,      RejectReason::BadSignature,
    RejectReason::OutOfRange,       RejectReason::StaleAnchor,
    RejectReason::NotAddressee,     RejectReason::DuplicateProof,
    RejectReason::StaleTimestamp,   RejectReason::SelfProof,
    RejectReason::CollusionSuspect, RejectReason::InvalidCoordinates,
    RejectReason::MonopolyViolation, RejectReason::NotLeader,
    RejectReason::MalformedBlock,
};

/// Stable names used in reports.
std::string_view to_string(RejectReason r);
std::optional<RejectReason> reject_reason_from_string(std::string_view s);

enum class Outcome { Accept, Fork, Reject };

struct Verdict {
    Outcome outcome = Outcome::Accept;
    std::optional<RejectReason> reason;
    /// Set when the anchor mismatch means the local chain and the sender's
    /// chain disagree and should be synchronised.
    bool trigger_sync = false;

    static Verdict accept() { return {}; }
    static Verdict fork() { return {Outcome::Fork, std::nullopt, false}; }
    static Verdict reject(RejectReason r, bool sync = false) { return {Outcome::Reject, r, sync}; }

    bool accepted() const { return outcome != Outcome::Reject; }
    bool operator==(const Verdict&) const = default;
};

/// Immutable snapshot of everything a peer consults when validating.
struct ValidationContext {
    PublicKey local_pk;
    Digest chain_head;
    /// Read handle; must outlive the context and not be mutated while in use.
    const ChainStore* chain_view = nullptr;
    std::set<PublicKey> overlay_contacts;
    std::set<PublicKey> radio_reachable;
    /// Overlay-declared locations the local peer knows about (its contacts and
    /// the peer that relayed the message, when any).
    std::map<PublicKey, GeoLocation> declared_locations;
    /// Peer that handed us a gossiped proof, when known.
    std::optional<PublicKey> relay_sender;
    /// Local set of pending (received, unconfirmed) proofs.
    std::function<bool(const ProofId&)> is_pending;
    RangeParams range;
    GeoLocation local_location;
    std::uint64_t now_ms = 0;
    std::uint64_t freshness_window_ms = 30'000;
    /// Test hook: when false every range comparison passes.
    bool range_check_enabled = true;
};

/// Request rules in order: contact and radio reach, signature, coordinates,
/// distance to the local peer, anchor equals local head, timestamp freshness.
Verdict verify_request(const ProofRequest& req, const ValidationContext& ctx);

/// Run by the original requester. Addressee, signatures (response and embedded
/// request), coordinates, distance to the local peer.
Verdict verify_response(const ProofResponse& res, const ValidationContext& ctx,
                        const std::set<PublicKey>& sent_to);

/// Third-party check before relaying. Signatures, coordinates, the two claims
/// within range of each other, anchor among the latest T blocks, not already
/// known, and the collusion cross-check against radio reach and overlay
/// declarations.
Verdict verify_gossiped_proof(const ProofResponse& p, const ValidationContext& ctx);

/// Accept (extends head), Fork (extends a block at most T below head) or a
/// rejection.
Verdict verify_block(const Block& b, const ValidationContext& ctx);

/// Per-proof checks shared by gossip and block validation: both signatures,
/// distinct parties, valid coordinates, claims within range of each other.
std::optional<RejectReason> check_proof_intrinsic(const ProofResponse& p, const RangeParams& range,
                                                  bool range_check_enabled = true);

/// Whether anchor is one of the latest T blocks ending at tip (genesis counts
/// while the branch is shorter than T).
bool anchor_in_window(const ChainStore& store, const Digest& tip, const Digest& anchor);

}  // namespace polchain
