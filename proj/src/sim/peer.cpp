#include "polchain/sim/peer.hpp"

#include <algorithm>
#include <iterator>

namespace polchain::sim {
namespace {

Digest as_digest(const ProofId& id) {
    Digest d;
    d.bytes = id.bytes;
    return d;
}

ValidationContext context_for(const PeerState& s, const Neighborhood& nb, const StepSettings& st) {
    ValidationContext ctx = nb.base;
    ctx.local_pk = s.identity.public_key;
    ctx.chain_head = s.store.head();
    ctx.chain_view = &s.store;
    ctx.now_ms = st.now_ms;
    return ctx;
}

ContextFactory block_context(const PeerState& s, const Neighborhood& nb, const StepSettings& st) {
    return [&s, &nb, &st](const ChainStore&) {
        auto ctx = context_for(s, nb, st);
        ctx.overlay_contacts.insert(s.known_partners.begin(), s.known_partners.end());
        return ctx;
    };
}

Verdict verdict_of(const AppendResult& r) {
    switch (r.status) {
        case AppendStatus::Accepted: return Verdict::accept();
        case AppendStatus::ForkRetained: return Verdict::fork();
        default: return Verdict::reject(r.reason.value_or(RejectReason::MalformedBlock), r.trigger_sync);
    }
}

std::vector<PeerIndex> without(const std::vector<PeerIndex>& v, PeerIndex x) {
    std::vector<PeerIndex> out;
    out.reserve(v.size());
    for (auto p : v)
        if (p != x) out.push_back(p);
    return out;
}

std::vector<PeerIndex> intersect(const std::vector<PeerIndex>& a, const std::vector<PeerIndex>& b) {
    std::vector<PeerIndex> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void send(Actions& a, const PeerState& s, Channel ch, std::optional<std::vector<PeerIndex>> to, Message m) {
    if (to && to->empty()) return;
    a.sends.push_back(Send{s.index, ch, std::move(to), std::move(m)});
}

void after_chain_change(PeerState& s, const StepSettings& st, Actions& a) {
    const auto& head = s.store.head();
    std::erase_if(s.pending, [&](const auto& kv) {
        return s.store.branch_contains_proof(head, kv.first) ||
               !anchor_in_window(s.store, head, kv.second.request.prev_block_hash);
    });
    a.mint_at = st.now_ms + st.mint_delay_ms;
}

constexpr std::uint64_t kSyncCooldownMs = 1000;

/// At most one sync message per partner and direction per cooldown.
bool sync_allowed(PeerState& s, PeerIndex to, const StepSettings& st) {
    auto [it, fresh] = s.last_sync.try_emplace(to, st.now_ms);
    if (fresh) return true;
    if (st.now_ms - it->second < kSyncCooldownMs) return false;
    it->second = st.now_ms;
    return true;
}

void request_sync(PeerState& s, PeerIndex to, const StepSettings& st, Actions& a) {
    if (!sync_allowed(s, to, st)) return;
    send(a, s, Channel::Direct, std::vector<PeerIndex>{to},
         SyncRequestMsg{s.store.head(), s.store.head_height()});
}

void send_blocks_above(const PeerState& s, PeerIndex to, std::uint64_t min_height, Actions& a) {
    auto blocks = s.store.branch_blocks(s.store.head(), min_height);
    if (blocks.empty()) return;
    send(a, s, Channel::Direct, std::vector<PeerIndex>{to},
         SyncResponseMsg{std::make_shared<const std::vector<Block>>(std::move(blocks))});
}

/// Mints on head when this peer (under its current or a retired key) is the
/// eligible leader or, unless leader_only, the round is open.
void try_mint(PeerState& s, const Neighborhood& nb, const StepSettings& st, Actions& a, bool leader_only) {
    if (!st.active) return;
    const Digest head = s.store.head();
    if (s.minted_on.contains(head)) return;
    const PeerIdentity* who = nullptr;
    if (auto leader = eligible_leader(s.store, head)) {
        if (*leader == s.identity.public_key) who = &s.identity;
        for (const auto& r : s.retired)
            if (r.public_key == *leader) who = &r;
    } else if (!leader_only && may_mint(s.store, head, s.identity.public_key)) {
        who = &s.identity;
    }
    if (!who) return;

    std::vector<ProofResponse> candidates;
    candidates.reserve(s.pending.size());
    for (const auto& [id, p] : s.pending) candidates.push_back(p);
    auto block = assemble_block(candidates, *who, s.store);
    if (!block) return;
    const auto r = append(s.store, *block, block_context(s, nb, st)(s.store));
    a.observations.push_back({"mint", verdict_of(r), r.block_hash, false});
    if (!r.stored()) return;
    s.minted_on.insert(head);
    send(a, s, Channel::Overlay, std::nullopt, make_block_msg(*block));
    after_chain_change(s, st, a);
}

void on_tick(PeerState& s, const World& world, const Neighborhood& nb, const StepSettings& st, Actions& a) {
    if (!st.active) return;
    std::erase_if(s.outstanding, [&](const auto& kv) {
        return st.now_ms - kv.second.sent_at_ms > nb.base.freshness_window_ms;
    });
    if (!nb.radio.empty()) {
        auto req = make_request(s.identity, s.claim_location, s.store.head(), st.now_ms);
        OutstandingRequest out{{}, st.now_ms};
        for (auto q : nb.radio) out.sent_to.insert(world[q].pk);
        s.outstanding[request_id(req)] = std::move(out);
        send(a, s, Channel::Radio, std::nullopt, RequestMsg{req});
    }
    try_mint(s, nb, st, a, false);
}

void on_request(PeerState& s, PeerIndex from, const ProofRequest& req, const Neighborhood& nb,
                const StepSettings& st, Actions& a) {
    const auto v = verify_request(req, context_for(s, nb, st));
    a.observations.push_back({"request", v, request_id(req)});
    if (v.accepted()) {
        auto res = make_response(req, s.identity, s.claim_location, st.now_ms);
        s.known_partners.insert(req.requester_pk);
        send(a, s, Channel::Radio, std::vector<PeerIndex>{from}, ResponseMsg{std::move(res)});
        return;
    }
    if (!v.trigger_sync) return;
    const auto& anchor = req.prev_block_hash;
    if (!s.store.contains(anchor)) {
        request_sync(s, from, st, a);
    } else if (s.store.is_ancestor(anchor, s.store.head()) && sync_allowed(s, from, st)) {
        send_blocks_above(s, from, s.store.height_of(anchor) + 1, a);
    }
}

void accept_own_proof(PeerState& s, const ProofResponse& res, const Neighborhood& nb,
                      const StepSettings& st, Actions& a) {
    const auto id = proof_id(res);
    if (s.pending.contains(id)) return;
    s.pending.emplace(id, res);
    send(a, s, Channel::Overlay, intersect(nb.gossip, nb.radio), make_proof_msg(res));
    a.mint_at = st.now_ms + st.mint_delay_ms;
}

void on_response(PeerState& s, const ProofResponse& res, const Neighborhood& nb,
                 const StepSettings& st, Actions& a) {
    static const std::set<PublicKey> kNone;
    auto it = s.outstanding.find(request_id(res.request));
    const auto& sent_to = it == s.outstanding.end() ? kNone : it->second.sent_to;
    const auto v = verify_response(res, context_for(s, nb, st), sent_to);
    a.observations.push_back({"response", v, as_digest(proof_id(res))});
    if (!v.accepted()) return;
    s.known_partners.insert(res.responder_pk);
    accept_own_proof(s, res, nb, st, a);
}

/// Returns the verdict; relays only when relay is set.
Verdict on_proof(PeerState& s, PeerIndex from, const ProofMsg& m, const World& world,
                 const Neighborhood& nb, const StepSettings& st, Actions& a, bool relay) {
    if (s.pending.contains(m.id)) {
        const auto v = Verdict::reject(RejectReason::DuplicateProof);
        a.observations.push_back({"proof", v, as_digest(m.id)});
        return v;
    }
    auto ctx = context_for(s, nb, st);
    const auto& sender = world[from];
    ctx.relay_sender = sender.pk;
    ctx.declared_locations.emplace(sender.pk, sender.declared_location);
    ctx.is_pending = [&s](const ProofId& id) { return s.pending.contains(id); };
    const auto v = verify_gossiped_proof(*m.proof, ctx);
    a.observations.push_back({"proof", v, as_digest(m.id)});
    if (v.accepted()) {
        s.pending.emplace(m.id, *m.proof);
        if (relay) {
            // A participant's own proof is always a first hop.
            const auto& pk = s.identity.public_key;
            const bool mine = m.proof->request.requester_pk == pk || m.proof->responder_pk == pk;
            send(a, s, Channel::Overlay, without(mine ? intersect(nb.gossip, nb.radio) : nb.gossip, from), m);
        }
        a.mint_at = st.now_ms + st.mint_delay_ms;
    }
    return v;
}

void on_block(PeerState& s, PeerIndex from, const BlockMsg& m, const Neighborhood& nb,
              const StepSettings& st, Actions& a) {
    if (s.store.contains(m.hash)) return;
    const auto old_head = s.store.head();
    const auto results = ingest(s.store, *m.block, s.orphans, block_context(s, nb, st));
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (r.status == AppendStatus::AlreadyKnown) continue;
        a.observations.push_back(
            {"block", verdict_of(r), r.block_hash, r.status == AppendStatus::ForkRetained});
        if (i == 0 && r.status == AppendStatus::Rejected && r.trigger_sync) request_sync(s, from, st, a);
        if (!r.stored()) continue;
        const auto* e = s.store.find(r.block_hash);
        if (!e || !e->body) continue;
        BlockMsg fwd = r.block_hash == m.hash ? m : BlockMsg{std::make_shared<const Block>(*e->body), r.block_hash};
        send(a, s, Channel::Overlay, without(nb.gossip, from), std::move(fwd));
    }
    if (s.store.head() != old_head) after_chain_change(s, st, a);
}

void on_sync_request(PeerState& s, PeerIndex from, const SyncRequestMsg& m, Actions& a) {
    if (m.head == s.store.head()) return;
    if (s.store.contains(m.head) && s.store.is_ancestor(m.head, s.store.head())) {
        send_blocks_above(s, from, s.store.height_of(m.head) + 1, a);
        return;
    }
    // Diverged or unknown: everything within the fork horizon.
    const auto window2 = 2 * std::uint64_t{s.store.params().window};
    const auto lo = std::min(m.height, s.store.head_height());
    send_blocks_above(s, from, lo > window2 ? lo - window2 + 1 : 1, a);
}

void on_sync_response(PeerState& s, const SyncResponseMsg& m, const Neighborhood& nb,
                      const StepSettings& st, Actions& a) {
    const auto old_head = s.store.head();
    const auto results = sync(s.store, *m.blocks, block_context(s, nb, st));
    for (const auto& r : results) {
        if (r.status == AppendStatus::AlreadyKnown) continue;
        a.observations.push_back(
            {"sync_block", verdict_of(r), r.block_hash, r.status == AppendStatus::ForkRetained});
    }
    if (s.store.head() != old_head) {
        after_chain_change(s, st, a);
        const auto* e = s.store.find(s.store.head());
        if (e && e->body)
            send(a, s, Channel::Overlay, nb.gossip,
                 BlockMsg{std::make_shared<const Block>(*e->body), s.store.head()});
    }
}

void on_chain_message(PeerState& s, const Arrival& ev, const Neighborhood& nb,
                      const StepSettings& st, Actions& a) {
    if (const auto* b = std::get_if<BlockMsg>(&ev.msg)) on_block(s, ev.from, *b, nb, st, a);
    else if (const auto* q = std::get_if<SyncRequestMsg>(&ev.msg)) on_sync_request(s, ev.from, *q, a);
    else if (const auto* r = std::get_if<SyncResponseMsg>(&ev.msg)) on_sync_response(s, *r, nb, st, a);
}

// Adversarial behaviours ---------------------------------------------------

void inject(Actions& a, const ProofResponse& p, bool fabricated) {
    const auto id = proof_id(p);
    a.injected.push_back(as_digest(id));
    if (fabricated) a.fabricated.push_back(id);
}

void spoof_own_tick(PeerState& s, const StepSettings& st, Actions& a) {
    auto req = make_request(s.identity, s.claim_location, s.store.head(), st.now_ms);
    a.injected.push_back(request_id(req));
    send(a, s, Channel::Radio, std::nullopt, RequestMsg{req});
}

void spoof_other_tick(PeerState& s, const AdversaryRole& role, const World& world,
                      const StepSettings& st, Actions& a) {
    if (!role.victim) return;
    const auto& victim = world[*role.victim];

    // A request in the victim's name, signed with our own key.
    ProofRequest forged{victim.pk, victim.declared_location, s.store.head(), st.now_ms, {}};
    forged.signature = sign(request_signing_payload(forged), s.identity.private_key);
    a.injected.push_back(request_id(forged));
    send(a, s, Channel::Radio, std::nullopt, RequestMsg{forged});

    // Our genuine response to the forged request.
    auto p1 = make_response(forged, s.identity, s.claim_location, st.now_ms);
    inject(a, p1, true);
    send(a, s, Channel::Overlay, std::nullopt, make_proof_msg(p1));

    // Our genuine request with a response forged in the victim's name.
    auto own = make_request(s.identity, s.claim_location, s.store.head(), st.now_ms);
    ProofResponse p2{own, victim.pk, victim.declared_location, st.now_ms, {}};
    p2.signature = sign(response_signing_payload(p2), s.identity.private_key);
    inject(a, p2, true);
    send(a, s, Channel::Overlay, std::nullopt, make_proof_msg(p2));
}

void replay_tick(PeerState& s, const StepSettings&, Rng& rng, Actions& a) {
    const auto h = s.store.head_height();
    if (h < 3) return;
    // Proofs at least two blocks deep: every honest peer has seen them confirmed.
    const auto blocks = s.store.branch_blocks(s.store.head(), 1);
    std::vector<const ProofResponse*> old;
    for (const auto& b : blocks)
        if (s.store.height_of(block_hash(b)) + 2 <= h)
            for (const auto& p : b.proofs) old.push_back(&p);
    if (old.empty()) return;
    for (int k = 0; k < 2; ++k) {
        const auto& p = *old[rng.index(old.size())];
        inject(a, p, false);
        send(a, s, Channel::Overlay, std::nullopt, make_proof_msg(p));
    }
}

void collusion_tick(PeerState& s, const AdversaryRole& role, const StepSettings& st, Actions& a) {
    if (!role.collusion_lead || !role.partner || !role.partner_identity) return;
    auto req = make_request(s.identity, s.claim_location, s.store.head(), st.now_ms);
    auto res = make_response(req, *role.partner_identity, role.partner_claim, st.now_ms);
    inject(a, res, true);
    s.pending.emplace(proof_id(res), res);
    auto msg = make_proof_msg(res);
    send(a, s, Channel::Overlay, std::nullopt, msg);
    a.sends.push_back(Send{*role.partner, Channel::Overlay, std::nullopt, msg});
}

}  // namespace

std::string_view message_name(const Message& m) {
    static constexpr std::string_view kNames[] = {"request", "response", "proof",
                                                  "block", "sync_request", "sync_response"};
    return kNames[m.index()];
}

ProofMsg make_proof_msg(const ProofResponse& p) {
    return ProofMsg{std::make_shared<const ProofResponse>(p), proof_id(p)};
}

BlockMsg make_block_msg(const Block& b) { return BlockMsg{std::make_shared<const Block>(b), block_hash(b)}; }

Actions honest_peer_step(PeerState& s, const PeerEvent& ev, const World& world,
                         const Neighborhood& nb, const StepSettings& st) {
    Actions a;
    if (std::holds_alternative<Tick>(ev)) {
        on_tick(s, world, nb, st, a);
    } else if (std::holds_alternative<MintCheck>(ev)) {
        try_mint(s, nb, st, a, false);
    } else {
        const auto& arr = std::get<Arrival>(ev);
        if (const auto* m = std::get_if<RequestMsg>(&arr.msg)) on_request(s, arr.from, m->request, nb, st, a);
        else if (const auto* r = std::get_if<ResponseMsg>(&arr.msg)) on_response(s, r->response, nb, st, a);
        else if (const auto* p = std::get_if<ProofMsg>(&arr.msg)) on_proof(s, arr.from, *p, world, nb, st, a, true);
        else on_chain_message(s, arr, nb, st, a);
    }
    return a;
}

Actions adversary_step(PeerState& s, const AdversaryRole& role, const PeerEvent& ev,
                       const World& world, const Neighborhood& nb, const StepSettings& st,
                       Rng& rng) {
    if (role.kind == AttackKind::IdentityObserver) return honest_peer_step(s, ev, world, nb, st);
    Actions a;
    if (std::holds_alternative<Tick>(ev)) {
        if (!st.active) return a;
        switch (role.kind) {
            case AttackKind::SpoofOwnLocation: spoof_own_tick(s, st, a); break;
            case AttackKind::SpoofOtherLocation: spoof_other_tick(s, role, world, st, a); break;
            case AttackKind::ReplayProof: replay_tick(s, st, rng, a); break;
            case AttackKind::Collusion: collusion_tick(s, role, st, a); break;
            case AttackKind::IdentityObserver: break;
        }
        try_mint(s, nb, st, a, true);
        return a;
    }
    if (std::holds_alternative<MintCheck>(ev)) {
        try_mint(s, nb, st, a, true);
        return a;
    }
    const auto& arr = std::get<Arrival>(ev);
    if (const auto* m = std::get_if<RequestMsg>(&arr.msg)) {
        // Answers anyone, from the displaced position.
        if (role.kind != AttackKind::SpoofOwnLocation || m->request.requester_pk == s.identity.public_key)
            return a;
        auto res = make_response(m->request, s.identity, s.claim_location, st.now_ms);
        inject(a, res, true);
        send(a, s, Channel::Radio, std::vector<PeerIndex>{arr.from}, ResponseMsg{std::move(res)});
    } else if (const auto* r = std::get_if<ResponseMsg>(&arr.msg)) {
        if (role.kind != AttackKind::SpoofOwnLocation ||
            r->response.request.requester_pk != s.identity.public_key)
            return a;
        inject(a, r->response, true);
        s.pending.emplace(proof_id(r->response), r->response);
        send(a, s, Channel::Overlay, std::nullopt, make_proof_msg(r->response));
    } else if (const auto* p = std::get_if<ProofMsg>(&arr.msg)) {
        // Collected for minting, never relayed.
        Actions scratch;
        on_proof(s, arr.from, *p, world, nb, st, scratch, false);
    } else {
        on_chain_message(s, arr, nb, st, a);
    }
    return a;
}

void rotate_identity(PeerState& s, Rng& rng) {
    const auto old = s.identity.public_key;
    s.retired.push_back(s.identity);
    s.identity = generate_identity(rng.seed32());
    s.outstanding.clear();
    std::erase_if(s.pending, [&](const auto& kv) {
        return kv.second.request.requester_pk == old || kv.second.responder_pk == old;
    });
    ++s.rotations;
}

}  // namespace polchain::sim
