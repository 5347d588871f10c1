#include "polchain/validation.hpp"

#include <array>
#include <string>

namespace polchain {
namespace {

constexpr std::array<std::string_view, std::size(kAllRejectReasons)> kReasonNames = {
    "NotAContact",      "BadSignature",       "OutOfRange",        "StaleAnchor",
    "NotAddressee",     "DuplicateProof",     "StaleTimestamp",    "SelfProof",
    "CollusionSuspect", "InvalidCoordinates", "MonopolyViolation", "NotLeader",
    "MalformedBlock",
};

bool in_range(const GeoLocation& a, const GeoLocation& b, const ValidationContext& ctx) {
    return !ctx.range_check_enabled || within_range(a, b, ctx.range);
}

// The collusion cross-check compares each participant's claim with what the
// local peer can observe independently: radio reach (true positions) and the
// overlay declaration.
bool participant_consistent(const PublicKey& pk, const GeoLocation& claim,
                            const ValidationContext& ctx) {
    if (pk == ctx.local_pk) return true;
    const bool reachable = ctx.radio_reachable.contains(pk);
    // A participant delivering its own proof over an overlay link is expected
    // to be a geographic neighbour.
    if (ctx.relay_sender == pk && !reachable) return false;
    if (!ctx.range_check_enabled) return true;
    const bool claims_near = within_range(claim, ctx.local_location, ctx.range);
    if (claims_near && !reachable) return false;
    // Radio reach pins the true position near us; a far claim contradicts it.
    if (reachable && !claims_near) return false;
    if (auto it = ctx.declared_locations.find(pk); it != ctx.declared_locations.end())
        if (!within_range(claim, it->second, ctx.range)) return false;
    return true;
}

}  // namespace

std::string_view to_string(RejectReason r) { return kReasonNames[static_cast<std::size_t>(r)]; }

std::optional<RejectReason> reject_reason_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kReasonNames.size(); ++i)
        if (kReasonNames[i] == s) return kAllRejectReasons[i];
    return std::nullopt;
}

Verdict verify_request(const ProofRequest& req, const ValidationContext& ctx) {
    if (req.requester_pk == ctx.local_pk) return Verdict::reject(RejectReason::SelfProof);
    if (!ctx.overlay_contacts.contains(req.requester_pk) ||
        !ctx.radio_reachable.contains(req.requester_pk))
        return Verdict::reject(RejectReason::NotAContact);
    if (!request_signature_valid(req)) return Verdict::reject(RejectReason::BadSignature);
    if (!is_valid(req.location)) return Verdict::reject(RejectReason::InvalidCoordinates);
    if (!in_range(req.location, ctx.local_location, ctx))
        return Verdict::reject(RejectReason::OutOfRange);
    if (req.prev_block_hash != ctx.chain_head)
        return Verdict::reject(RejectReason::StaleAnchor, /*sync=*/true);
    const auto age = ctx.now_ms > req.timestamp_ms ? ctx.now_ms - req.timestamp_ms
                                                   : req.timestamp_ms - ctx.now_ms;
    if (age > ctx.freshness_window_ms) return Verdict::reject(RejectReason::StaleTimestamp);
    return Verdict::accept();
}

Verdict verify_response(const ProofResponse& res, const ValidationContext& ctx,
                        const std::set<PublicKey>& sent_to) {
    if (res.request.requester_pk != ctx.local_pk || !sent_to.contains(res.responder_pk))
        return Verdict::reject(RejectReason::NotAddressee);
    if (res.responder_pk == res.request.requester_pk)
        return Verdict::reject(RejectReason::SelfProof);
    if (!response_signatures_valid(res)) return Verdict::reject(RejectReason::BadSignature);
    if (!is_valid(res.location)) return Verdict::reject(RejectReason::InvalidCoordinates);
    if (!in_range(res.location, ctx.local_location, ctx))
        return Verdict::reject(RejectReason::OutOfRange);
    return Verdict::accept();
}

std::optional<RejectReason> check_proof_intrinsic(const ProofResponse& p, const RangeParams& range,
                                                  bool range_check_enabled) {
    if (!response_signatures_valid(p)) return RejectReason::BadSignature;
    if (p.responder_pk == p.request.requester_pk) return RejectReason::SelfProof;
    if (!is_valid(p.location) || !is_valid(p.request.location))
        return RejectReason::InvalidCoordinates;
    if (range_check_enabled && !within_range(p.request.location, p.location, range))
        return RejectReason::OutOfRange;
    return std::nullopt;
}

bool anchor_in_window(const ChainStore& store, const Digest& tip, const Digest& anchor) {
    if (!store.is_ancestor(anchor, tip)) return false;
    return store.height_of(tip) - store.height_of(anchor) < store.params().window;
}

Verdict verify_gossiped_proof(const ProofResponse& p, const ValidationContext& ctx) {
    if (auto r = check_proof_intrinsic(p, ctx.range, ctx.range_check_enabled))
        return Verdict::reject(*r);
    const auto& store = *ctx.chain_view;
    if (!anchor_in_window(store, ctx.chain_head, p.request.prev_block_hash))
        return Verdict::reject(RejectReason::StaleAnchor,
                               !store.contains(p.request.prev_block_hash));
    const auto id = proof_id(p);
    if (store.branch_contains_proof(ctx.chain_head, id) || (ctx.is_pending && ctx.is_pending(id)))
        return Verdict::reject(RejectReason::DuplicateProof);
    if (!participant_consistent(p.request.requester_pk, p.request.location, ctx) ||
        !participant_consistent(p.responder_pk, p.location, ctx))
        return Verdict::reject(RejectReason::CollusionSuspect);
    return Verdict::accept();
}

Verdict verify_block(const Block& b, const ValidationContext& ctx) {
    if (b.proofs.empty()) return Verdict::reject(RejectReason::MalformedBlock);
    std::vector<ProofId> ids;
    ids.reserve(b.proofs.size());
    for (const auto& p : b.proofs) ids.push_back(proof_id(p));
    for (std::size_t i = 1; i < ids.size(); ++i) {
        if (ids[i] == ids[i - 1]) return Verdict::reject(RejectReason::DuplicateProof);
        if (ids[i] < ids[i - 1]) return Verdict::reject(RejectReason::MalformedBlock);
    }
    if (!block_signature_valid(b)) return Verdict::reject(RejectReason::BadSignature);

    const auto& store = *ctx.chain_view;
    const auto window = store.params().window;
    const auto* parent = store.find(b.prev_hash);
    if (!parent) return Verdict::reject(RejectReason::StaleAnchor, /*sync=*/true);
    const bool fork = b.prev_hash != ctx.chain_head;
    // Forks may start at most T below head so that every stake window they
    // need stays inside the 2T bodies retained by pruning.
    if (fork && parent->height + window < store.height_of(ctx.chain_head))
        return Verdict::reject(RejectReason::StaleAnchor);

    for (const auto& p : b.proofs)
        if (auto r = check_proof_intrinsic(p, ctx.range, ctx.range_check_enabled))
            return Verdict::reject(*r);
    for (const auto& p : b.proofs)
        if (!anchor_in_window(store, b.prev_hash, p.request.prev_block_hash))
            return Verdict::reject(RejectReason::StaleAnchor);
    for (const auto& id : ids)
        if (store.branch_contains_proof(b.prev_hash, id))
            return Verdict::reject(RejectReason::DuplicateProof);
    if (recent_producers(store, b.prev_hash).contains(b.producer_pk))
        return Verdict::reject(RejectReason::MonopolyViolation);
    if (!may_mint(store, b.prev_hash, b.producer_pk)) return Verdict::reject(RejectReason::NotLeader);
    for (const auto& p : b.proofs) {
        const auto& a = p.request.requester_pk;
        const auto& r = p.responder_pk;
        if (a == ctx.local_pk && !ctx.overlay_contacts.contains(r))
            return Verdict::reject(RejectReason::NotAContact);
        if (r == ctx.local_pk && !ctx.overlay_contacts.contains(a))
            return Verdict::reject(RejectReason::NotAContact);
    }
    return fork ? Verdict::fork() : Verdict::accept();
}

}  // namespace polchain
