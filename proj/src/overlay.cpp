#include "polchain/overlay.hpp"

#include <algorithm>
#include <utility>

namespace polchain {

const PeerRecord& find_peer(const World& world, const PublicKey& p) {
    auto it = std::find_if(world.begin(), world.end(), [&](const PeerRecord& r) { return r.pk == p; });
    if (it == world.end()) throw UnknownPeerError("peer " + to_hex(p) + " is not in the world");
    return *it;
}

std::set<PublicKey> contacts_of(const World& world, const PublicKey& p, const OverlayParams& params) {
    const auto& self = find_peer(world, p);
    std::vector<std::pair<double, PublicKey>> ranked;
    ranked.reserve(world.size());
    for (const auto& r : world)
        if (r.pk != p) ranked.emplace_back(distance_m(self.declared_location, r.declared_location), r.pk);
    const auto k = std::min(params.k_contacts, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
    std::set<PublicKey> out;
    for (std::size_t i = 0; i < k; ++i) out.insert(ranked[i].second);
    return out;
}

std::set<PublicKey> radio_neighbors(const World& world, const PublicKey& p, const RangeParams& r) {
    const auto& self = find_peer(world, p);
    std::set<PublicKey> out;
    for (const auto& q : world)
        if (q.pk != p && within_range(self.true_location, q.true_location, r)) out.insert(q.pk);
    return out;
}

std::set<PublicKey> gossip_neighbors(const World& world, const PublicKey& p,
                                     const OverlayParams& params) {
    auto out = contacts_of(world, p, params);
    for (const auto& q : world)
        if (q.pk != p && contacts_of(world, q.pk, params).contains(p)) out.insert(q.pk);
    return out;
}

ValidationContext build_context(const World& world, const PublicKey& p, const ChainStore& store,
                                const ContextSettings& settings) {
    const auto& self = find_peer(world, p);
    ValidationContext ctx;
    ctx.local_pk = p;
    ctx.chain_head = store.head();
    ctx.chain_view = &store;
    ctx.overlay_contacts = contacts_of(world, p, settings.overlay);
    ctx.radio_reachable = radio_neighbors(world, p, settings.range);
    for (const auto& c : ctx.overlay_contacts)
        ctx.declared_locations.emplace(c, find_peer(world, c).declared_location);
    ctx.range = settings.range;
    ctx.local_location = self.true_location;
    ctx.now_ms = settings.now_ms;
    ctx.freshness_window_ms = settings.freshness_window_ms;
    return ctx;
}

}  // namespace polchain
