#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "polchain/chain_store.hpp"
#include "polchain/crypto.hpp"
#include "polchain/geo.hpp"
#include "polchain/validation.hpp"

namespace polchain {

class UnknownPeerError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A peer as the simulator sees it. Honest peers declare their true location;
/// adversaries may declare something else.
struct PeerRecord {
    PublicKey pk;
    GeoLocation declared_location;
    GeoLocation true_location;
};

struct OverlayParams {
    std::size_t k_contacts = 8;
};

using World = std::vector<PeerRecord>;

const PeerRecord& find_peer(const World& world, const PublicKey& p);

/// The k peers nearest to p's declared location (by declared locations),
/// excluding p. Distance ties go to the smaller key.
std::set<PublicKey> contacts_of(const World& world, const PublicKey& p, const OverlayParams& params);

/// Peers whose true location is within r of p's true location, excluding p.
std::set<PublicKey> radio_neighbors(const World& world, const PublicKey& p, const RangeParams& r);

/// Overlay links are connections, so they carry traffic both ways: p's
/// contacts plus every peer that lists p as a contact.
std::set<PublicKey> gossip_neighbors(const World& world, const PublicKey& p,
                                     const OverlayParams& params);

struct ContextSettings {
    RangeParams range;
    OverlayParams overlay;
    std::uint64_t now_ms = 0;
    std::uint64_t freshness_window_ms = 30'000;
};

/// Snapshot for p: overlay contacts and their declared locations, radio reach,
/// p's chain head and true location. Copies everything except the chain
/// handle, so later world changes do not leak in.
ValidationContext build_context(const World& world, const PublicKey& p, const ChainStore& store,
                                const ContextSettings& settings);

}  // namespace polchain
