#include <random>
#include <set>

#include <gtest/gtest.h>

#include "polchain/validation.hpp"
#include "support.hpp"

namespace {

using namespace polchain;
using namespace testing_support;

constexpr std::uint8_t kLocal = 10;

ProofResponse signed_as(ProofResponse p, const PeerIdentity& signer) {
    p.signature = sign(response_signing_payload(p), signer.private_key);
    return p;
}

ProofRequest signed_as(ProofRequest r, const PeerIdentity& signer) {
    r.signature = sign(request_signing_payload(r), signer.private_key);
    return r;
}

class RequestRules : public ::testing::Test {
protected:
    ChainStore store{ChainParams{5}};
    ValidationContext ctx;
    void SetUp() override {
        const auto g = store.genesis();
        const auto b1 = put(store, {proof(1, 2, g)}, 3, g);
        const auto b2 = put(store, {proof(1, 2, b1)}, 4, b1);
        store.set_head(b2);
        ctx = context(store, kLocal, {1, 2}, {1, 2});
    }
    ProofRequest honest(GeoLocation loc = at_m(20, 0)) {
        return make_request(ident(1), loc, store.head(), ctx.now_ms);
    }
};

TEST_F(RequestRules, HonestNeighbourAnchoredAtHead) {
    EXPECT_EQ(verify_request(honest(), ctx), Verdict::accept());
}

TEST_F(RequestRules, Rule1NotAContact) {
    auto c = ctx;
    c.overlay_contacts.erase(pk(1));
    EXPECT_EQ(verify_request(honest(), c).reason, RejectReason::NotAContact);
    c = ctx;
    c.radio_reachable.erase(pk(1));
    EXPECT_EQ(verify_request(honest(), c).reason, RejectReason::NotAContact);
}

TEST_F(RequestRules, Rule2BadSignature) {
    auto r = honest();
    r.location = at_m(25, 0);
    EXPECT_EQ(verify_request(r, ctx).reason, RejectReason::BadSignature);
}

TEST_F(RequestRules, Rule3OutOfRangeAt10km) {
    EXPECT_EQ(verify_request(honest(at_m(10'000, 0)), ctx).reason, RejectReason::OutOfRange);
}

TEST_F(RequestRules, Rule4StaleAnchorTriggersSync) {
    const auto grandparent = store.at(store.at(store.head()).header.prev_hash).header.prev_hash;
    const auto r = make_request(ident(1), at_m(20, 0), grandparent, ctx.now_ms);
    const auto v = verify_request(r, ctx);
    EXPECT_EQ(v.reason, RejectReason::StaleAnchor);
    EXPECT_TRUE(v.trigger_sync);
}

TEST_F(RequestRules, StaleTimestamp) {
    auto c = ctx;
    c.now_ms = ctx.now_ms + ctx.freshness_window_ms + 1;
    EXPECT_EQ(verify_request(honest(), c).reason, RejectReason::StaleTimestamp);
    c.now_ms = ctx.now_ms + ctx.freshness_window_ms;
    EXPECT_TRUE(verify_request(honest(), c).accepted());
}

TEST_F(RequestRules, InvalidCoordinatesAndSelf) {
    ProofRequest r{pk(1), GeoLocation{kMaxLatMicrodeg + 5, 0}, store.head(), ctx.now_ms, {}};
    EXPECT_EQ(verify_request(signed_as(r, ident(1)), ctx).reason, RejectReason::InvalidCoordinates);
    auto c = ctx;
    c.local_pk = pk(1);
    EXPECT_EQ(verify_request(honest(), c).reason, RejectReason::SelfProof);
}

class ResponseRules : public ::testing::Test {
protected:
    ChainStore store{ChainParams{5}};
    ValidationContext ctx = context(store, kLocal, {1, 2}, {1, 2});
    ProofRequest req = make_request(ident(kLocal), at_m(0, 0), store.head(), 1000);
    std::set<PublicKey> sent_to{pk(1), pk(2)};
};

TEST_F(ResponseRules, AddressedNeighbourInRange) {
    EXPECT_EQ(verify_response(make_response(req, ident(1), at_m(30, 0), 1005), ctx, sent_to),
              Verdict::accept());
}

TEST_F(ResponseRules, Rule1NotAddressee) {
    const auto r = make_response(req, ident(7), at_m(30, 0), 1005);
    EXPECT_EQ(verify_response(r, ctx, sent_to).reason, RejectReason::NotAddressee);
}

TEST_F(ResponseRules, Rule2BadSignature) {
    auto r = make_response(req, ident(1), at_m(30, 0), 1005);
    r.timestamp_ms += 1;
    EXPECT_EQ(verify_response(r, ctx, sent_to).reason, RejectReason::BadSignature);
    auto embedded = req;
    embedded.location = at_m(1, 0);
    const auto r2 = make_response(embedded, ident(1), at_m(30, 0), 1005);
    EXPECT_EQ(verify_response(r2, ctx, sent_to).reason, RejectReason::BadSignature);
}

TEST_F(ResponseRules, Rule3OutOfRangeAt5km) {
    const auto r = make_response(req, ident(1), at_m(5000, 0), 1005);
    EXPECT_EQ(verify_response(r, ctx, sent_to).reason, RejectReason::OutOfRange);
}

TEST_F(ResponseRules, CoordinatesMustBeValid) {
    ProofResponse r{req, pk(1), GeoLocation{0, kMaxLonMicrodeg}, 1005, {}};
    EXPECT_EQ(verify_response(signed_as(r, ident(1)), ctx, sent_to).reason,
              RejectReason::InvalidCoordinates);
}

/// Local peer 10 at the origin; participants 1 and 2 about 300 m north.
class GossipRules : public ::testing::Test {
protected:
    ChainStore store{ChainParams{3}};
    ValidationContext ctx = context(store, kLocal, {1, 2}, {});
    ProofResponse far_proof(std::uint64_t ts = 1000) {
        return proof(1, 2, store.head(), ts, at_m(300, 0), at_m(310, 0));
    }
};

TEST_F(GossipRules, FreshProofAccepted) {
    EXPECT_EQ(verify_gossiped_proof(far_proof(), ctx), Verdict::accept());
}

TEST_F(GossipRules, SecondCopyIsDuplicate) {
    const auto p = far_proof();
    std::set<ProofId> pending;
    auto c = ctx;
    c.is_pending = [&](const ProofId& id) { return pending.contains(id); };
    ASSERT_TRUE(verify_gossiped_proof(p, c).accepted());
    pending.insert(proof_id(p));
    EXPECT_EQ(verify_gossiped_proof(p, c).reason, RejectReason::DuplicateProof);
}

TEST_F(GossipRules, ConfirmedProofIsDuplicate) {
    const auto p = far_proof();
    store.set_head(put(store, {p}, 5, store.head()));
    auto c = ctx;
    c.chain_head = store.head();
    EXPECT_EQ(verify_gossiped_proof(p, c).reason, RejectReason::DuplicateProof);
}

TEST_F(GossipRules, AnchorMustBeInWindow) {
    const auto p = far_proof();
    auto tip = store.genesis();
    for (std::uint8_t i = 0; i < 3; ++i) tip = put(store, {proof(20 + i, 30 + i, tip)}, 40 + i, tip);
    store.set_head(tip);
    auto c = ctx;
    c.chain_head = tip;
    EXPECT_EQ(verify_gossiped_proof(p, c).reason, RejectReason::StaleAnchor);
    Digest unknown;
    unknown.bytes.fill(0x5a);
    const auto q = proof(1, 2, unknown, 1000, at_m(300, 0), at_m(310, 0));
    const auto v = verify_gossiped_proof(q, c);
    EXPECT_EQ(v.reason, RejectReason::StaleAnchor);
    EXPECT_TRUE(v.trigger_sync);
}

TEST_F(GossipRules, ClaimsMustBeCloseToEachOther) {
    const auto p = proof(1, 2, store.head(), 1000, at_m(300, 0), at_m(600, 0));
    EXPECT_EQ(verify_gossiped_proof(p, ctx).reason, RejectReason::OutOfRange);
}

TEST_F(GossipRules, RadioSilentNeighbourClaimIsCollusion) {
    const auto p = proof(1, 2, store.head(), 1000, at_m(20, 0), at_m(30, 0));
    EXPECT_EQ(verify_gossiped_proof(p, ctx).reason, RejectReason::CollusionSuspect);
    auto c = ctx;
    c.radio_reachable = {pk(1), pk(2)};
    EXPECT_TRUE(verify_gossiped_proof(p, c).accepted());
}

TEST_F(GossipRules, ClaimAwayFromOverlayDeclarationIsCollusion) {
    auto c = ctx;
    c.declared_locations[pk(1)] = at_m(-2000, 0);
    EXPECT_EQ(verify_gossiped_proof(far_proof(), c).reason, RejectReason::CollusionSuspect);
    c.declared_locations[pk(1)] = at_m(320, 0);
    EXPECT_TRUE(verify_gossiped_proof(far_proof(), c).accepted());
}

TEST_F(GossipRules, ReachableParticipantClaimingFarIsCollusion) {
    auto c = ctx;
    c.radio_reachable = {pk(1)};
    EXPECT_EQ(verify_gossiped_proof(far_proof(), c).reason, RejectReason::CollusionSuspect);
}

TEST_F(GossipRules, UnreachableParticipantMayNotBeFirstHop) {
    auto c = ctx;
    c.relay_sender = pk(1);
    EXPECT_EQ(verify_gossiped_proof(far_proof(), c).reason, RejectReason::CollusionSuspect);
    c.relay_sender = pk(7);
    EXPECT_TRUE(verify_gossiped_proof(far_proof(), c).accepted());
}

TEST_F(GossipRules, SelfProofAndForgedSignature) {
    const auto req = make_request(ident(1), at_m(300, 0), store.head(), 1000);
    ProofResponse self{req, pk(1), at_m(310, 0), 1005, {}};
    EXPECT_EQ(verify_gossiped_proof(signed_as(self, ident(1)), ctx).reason, RejectReason::SelfProof);
    ProofResponse forged{req, pk(2), at_m(310, 0), 1005, {}};
    EXPECT_EQ(verify_gossiped_proof(signed_as(forged, ident(9)), ctx).reason, RejectReason::BadSignature);
}

TEST(ValidationProperty, AcceptedGossipNeverExceedsRange) {
    ChainStore store{ChainParams{5}};
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-400, 400);
    int accepted = 0;
    for (int i = 0; i < 3000; ++i) {
        auto ctx = context(store, kLocal, {1, 2}, {});
        if (rng() % 2) ctx.radio_reachable = {pk(1), pk(2)};
        const auto la = at_m(coord(rng), coord(rng));
        const auto lb = at_m(coord(rng), coord(rng));
        auto p = proof(1, 2, store.head(), 1000 + i, la, lb);
        if (rng() % 4 == 0) p.location = at_m(coord(rng), coord(rng));
        const auto v = verify_gossiped_proof(p, ctx);
        EXPECT_EQ(verify_gossiped_proof(p, ctx), v);
        if (!v.accepted()) continue;
        ++accepted;
        EXPECT_LE(distance_m(p.request.location, p.location), ctx.range.max_range_m);
        EXPECT_TRUE(response_signatures_valid(p));
    }
    EXPECT_GT(accepted, 0);
}

TEST(RejectReasons, NamesRoundTrip) {
    std::set<std::string_view> names;
    for (auto r : kAllRejectReasons) {
        names.insert(to_string(r));
        EXPECT_EQ(reject_reason_from_string(to_string(r)), r);
    }
    EXPECT_EQ(names.size(), std::size(kAllRejectReasons));
    EXPECT_FALSE(reject_reason_from_string("Nope"));
}

}  // namespace
