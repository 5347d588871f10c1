#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polchain/sim/config.hpp"
#include "polchain/sim/report.hpp"

namespace polchain::sim {

/// One row of the attack regression suite.
struct AttackFamily {
    std::string name;
    AttackKind kind;
    std::optional<CollusionCase> collusion_case;
};

/// SpoofOwnLocation, SpoofOtherLocation, ReplayProof, Collusion(a..d),
/// IdentityObserver.
const std::vector<AttackFamily>& attack_families();

/// 25 peers, T=5, the adversary (and its partner) on the last indices.
ScenarioConfig attack_scenario(const AttackFamily& f, std::uint64_t seed,
                               bool disable_range_check = false);

struct AttackVerdict {
    bool safe = false;
    /// The attack was exercised: something injected, or for the observer at
    /// least one rotation. Collusion(d) also needs the real proof to reach an
    /// honest peer and CollusionSuspect to fire at least once.
    bool expectation_met = false;
    std::string note;
};

AttackVerdict evaluate_attack(const AttackFamily& f, const SimReport& r);

}  // namespace polchain::sim
