#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "polchain/block.hpp"
#include "polchain/chain.hpp"
#include "polchain/chain_store.hpp"
#include "polchain/geo.hpp"
#include "polchain/messages.hpp"
#include "polchain/validation.hpp"

namespace testing_support {

using namespace polchain;

/// Deterministic identity per small integer; seeds are the byte repeated.
inline const PeerIdentity& ident(std::uint8_t i) {
    static std::map<std::uint8_t, PeerIdentity> cache;
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    Seed s;
    s.bytes.fill(i);
    return cache.emplace(i, generate_identity(s)).first->second;
}

inline const PublicKey& pk(std::uint8_t i) { return ident(i).public_key; }

inline const GeoLocation kOrigin = GeoLocation::from_degrees(44.8015, 10.3279);

inline GeoLocation at_m(double north, double east) { return offset_m(kOrigin, north, east); }

/// Plain haversine, written independently of the library.
inline double haversine_oracle(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kPi = 3.14159265358979323846;
    constexpr double kR = 6'371'000.0;
    const double p1 = lat1 * kPi / 180, p2 = lat2 * kPi / 180;
    const double dp = p2 - p1, dl = (lon2 - lon1) * kPi / 180;
    const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                     std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2 * kR * std::asin(std::sqrt(h));
}

/// Proof between requester a and responder b, both claiming the origin area.
inline ProofResponse proof(std::uint8_t a, std::uint8_t b, const Digest& anchor, std::uint64_t ts = 1000,
                           GeoLocation la = at_m(0, 0), GeoLocation lb = at_m(10, 0)) {
    const auto req = make_request(ident(a), la, anchor, ts);
    return make_response(req, ident(b), lb, ts + 5);
}

/// Inserts without validation and returns the hash.
inline Digest put(ChainStore& s, std::vector<ProofResponse> proofs, std::uint8_t producer,
                  const Digest& prev) {
    return s.insert(make_block(std::move(proofs), ident(producer), prev));
}

/// Context of a bystander that knows everyone in `contacts` and can hear
/// everyone in `radio`.
inline ValidationContext context(const ChainStore& store, std::uint8_t local,
                                 std::vector<std::uint8_t> contacts = {},
                                 std::vector<std::uint8_t> radio = {}) {
    ValidationContext ctx;
    ctx.local_pk = pk(local);
    ctx.chain_head = store.head();
    ctx.chain_view = &store;
    for (auto c : contacts) ctx.overlay_contacts.insert(pk(c));
    for (auto r : radio) ctx.radio_reachable.insert(pk(r));
    ctx.local_location = at_m(0, 0);
    ctx.now_ms = 1000;
    return ctx;
}

}  // namespace testing_support
