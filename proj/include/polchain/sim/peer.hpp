#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "polchain/chain.hpp"
#include "polchain/overlay.hpp"
#include "polchain/sim/config.hpp"
#include "polchain/sim/network.hpp"

namespace polchain::sim {

using PeerIndex = std::size_t;

struct RequestMsg {
    ProofRequest request;
};
struct ResponseMsg {
    ProofResponse response;
};
struct ProofMsg {
    std::shared_ptr<const ProofResponse> proof;
    ProofId id;
};
struct BlockMsg {
    std::shared_ptr<const Block> block;
    Digest hash;
};
/// "Send me what I am missing": the sender's head and its height.
struct SyncRequestMsg {
    Digest head;
    std::uint64_t height = 0;
};
struct SyncResponseMsg {
    std::shared_ptr<const std::vector<Block>> blocks;
};

using Message =
    std::variant<RequestMsg, ResponseMsg, ProofMsg, BlockMsg, SyncRequestMsg, SyncResponseMsg>;

std::string_view message_name(const Message& m);

ProofMsg make_proof_msg(const ProofResponse& p);
BlockMsg make_block_msg(const Block& b);

/// Radio reaches peers within range of the sender's true location, Overlay
/// reaches its gossip neighbors, Direct is a point-to-point reply.
enum class Channel { Radio, Overlay, Direct };

struct Send {
    PeerIndex from = 0;
    Channel channel = Channel::Overlay;
    /// Recipients; nullopt broadcasts to every neighbor on the channel.
    std::optional<std::vector<PeerIndex>> to;
    Message msg;
};

struct Tick {};
struct MintCheck {};
struct Arrival {
    PeerIndex from = 0;
    Message msg;
};
using PeerEvent = std::variant<Tick, MintCheck, Arrival>;

/// One validation outcome, for statistics and the event log. subject is the
/// request id, proof id or block hash the verdict is about.
struct Observation {
    std::string_view action;
    Verdict verdict;
    std::optional<Digest> subject;
    bool fork_stored = false;
};

struct Actions {
    std::vector<Send> sends;
    std::optional<std::uint64_t> mint_at;
    std::vector<Observation> observations;
    /// Requests, responses and proofs an adversary put on the wire.
    std::vector<Digest> injected;
    /// Proofs an adversary made up itself (replays excluded).
    std::vector<ProofId> fabricated;
};

/// Static view of a peer's surroundings, rebuilt whenever the world changes.
struct Neighborhood {
    std::vector<PeerIndex> radio;
    std::vector<PeerIndex> contacts;
    std::vector<PeerIndex> gossip;
    /// Everything but the chain handle and the clock.
    ValidationContext base;
};

struct StepSettings {
    std::uint64_t now_ms = 0;
    /// False once the scenario duration has elapsed: no new requests or mints.
    bool active = true;
    std::uint64_t mint_delay_ms = 500;
};

struct OutstandingRequest {
    std::set<PublicKey> sent_to;
    std::uint64_t sent_at_ms = 0;
};

struct PeerState {
    PeerIndex index = 0;
    PeerIdentity identity;
    GeoLocation true_location;
    /// Location written into requests and responses.
    GeoLocation claim_location;
    ChainStore store;
    OrphanPool orphans;
    std::map<ProofId, ProofResponse> pending;
    std::map<Digest, OutstandingRequest> outstanding;
    /// Keys this peer exchanged proofs with. Block validation treats them as
    /// known signatories even after they rotate out of the contact list.
    std::set<PublicKey> known_partners;
    /// Last sync message exchanged with each partner.
    std::map<PeerIndex, std::uint64_t> last_sync;
    /// Parents this peer already minted on.
    std::set<Digest> minted_on;
    /// Earlier pseudonyms. They keep the right to mint a block they earned.
    std::vector<PeerIdentity> retired;
    std::uint64_t rotations = 0;

    explicit PeerState(ChainParams params) : store(params) {}
};

/// Attack parameters resolved against the generated world.
struct AdversaryRole {
    AttackKind kind = AttackKind::SpoofOwnLocation;
    std::optional<CollusionCase> collusion_case;
    /// Collusion: the lead fabricates, the partner only co-signs.
    bool collusion_lead = false;
    std::optional<PeerIndex> partner;
    std::optional<PeerIdentity> partner_identity;
    GeoLocation partner_claim;
    std::optional<PeerIndex> victim;
};

Actions honest_peer_step(PeerState& s, const PeerEvent& ev, const World& world,
                         const Neighborhood& nb, const StepSettings& st);

Actions adversary_step(PeerState& s, const AdversaryRole& role, const PeerEvent& ev,
                       const World& world, const Neighborhood& nb, const StepSettings& st,
                       Rng& rng);

/// Fresh key pair from the generator. Outstanding requests and own pending
/// proofs under the old key are abandoned.
void rotate_identity(PeerState& s, Rng& rng);

}  // namespace polchain::sim
