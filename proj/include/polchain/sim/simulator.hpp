#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polchain/sim/config.hpp"
#include "polchain/sim/peer.hpp"
#include "polchain/sim/report.hpp"

namespace polchain::sim {

/// One seeded scenario. All randomness comes from a single mt19937_64 seeded
/// with config.seed; events are ordered by (time, sequence number).
class Simulation {
public:
    /// Validates the config (ConfigError) and generates the world.
    explicit Simulation(ScenarioConfig cfg);

    /// Runs until the event queue drains. Ticks, mints and rotations stop at
    /// duration_ms; messages already in flight are still delivered.
    void run();
    SimReport report() const;

    /// Called for every event record as it happens.
    std::function<void(const EventRecord&)> on_event;

    const ScenarioConfig& config() const { return cfg_; }
    const World& world() const { return world_; }
    const std::vector<PeerState>& peers() const { return peers_; }
    const Neighborhood& neighborhood(PeerIndex p) const { return neighborhoods_[p]; }
    bool is_honest(PeerIndex p) const { return !roles_.contains(p); }
    const std::map<PeerIndex, AdversaryRole>& roles() const { return roles_; }
    /// Ground truth: whether the proof attests something that did not happen.
    bool is_fake(const ProofResponse& p) const;

private:
    struct Event {
        std::uint64_t t = 0;
        std::uint64_t seq = 0;
        PeerIndex peer = 0;
        enum Kind { Tick, Mint, Arrive, Rotate } kind = Tick;
        std::optional<Arrival> arrival;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.t != b.t ? a.t > b.t : a.seq > b.seq;
        }
    };

    void generate_world();
    void place_adversaries();
    bool honest_connected() const;
    void rebuild_neighborhoods();
    void schedule(Event e);
    void dispatch(const Event& e);
    void apply(PeerIndex p, Actions&& a);
    void emit(std::uint64_t t, PeerIndex peer, std::string_view action, std::string verdict,
              std::string detail = {});

    ScenarioConfig cfg_;
    Rng rng_;
    World world_;
    std::vector<PeerState> peers_;
    std::vector<Neighborhood> neighborhoods_;
    std::map<PeerIndex, AdversaryRole> roles_;
    std::map<PublicKey, PeerIndex> owner_;

    std::vector<Event> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t now_ = 0;
    std::vector<std::optional<std::uint64_t>> mint_scheduled_;
    std::vector<double> rotation_clock_;

    std::set<Digest> injected_;
    std::set<ProofId> fabricated_;
    SimReport stats_;
};

/// Convenience: construct, run, report.
SimReport run(const ScenarioConfig& cfg);

}  // namespace polchain::sim
