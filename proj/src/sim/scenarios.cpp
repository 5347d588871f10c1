#include "polchain/sim/scenarios.hpp"

namespace polchain::sim {

const std::vector<AttackFamily>& attack_families() {
    static const std::vector<AttackFamily> families = {
        {"SpoofOwnLocation", AttackKind::SpoofOwnLocation, std::nullopt},
        {"SpoofOtherLocation", AttackKind::SpoofOtherLocation, std::nullopt},
        {"ReplayProof", AttackKind::ReplayProof, std::nullopt},
        {"Collusion(a)", AttackKind::Collusion, CollusionCase::A},
        {"Collusion(b)", AttackKind::Collusion, CollusionCase::B},
        {"Collusion(c)", AttackKind::Collusion, CollusionCase::C},
        {"Collusion(d)", AttackKind::Collusion, CollusionCase::D},
        {"IdentityObserver", AttackKind::IdentityObserver, std::nullopt},
    };
    return families;
}

ScenarioConfig attack_scenario(const AttackFamily& f, std::uint64_t seed, bool disable_range_check) {
    ScenarioConfig c;
    c.seed = seed;
    c.n_peers = 25;
    c.T = 5;
    c.duration_ms = 10'000;
    c.disable_range_check = disable_range_check;
    AdversarySpec a;
    a.peer = c.n_peers - 1;
    a.kind = f.kind;
    a.collusion_case = f.collusion_case;
    if (f.kind == AttackKind::Collusion) a.partner = c.n_peers - 2;
    if (f.kind == AttackKind::IdentityObserver) c.pseudonym_rotation_rate_per_hour = 360;
    c.adversaries.push_back(a);
    return c;
}

AttackVerdict evaluate_attack(const AttackFamily& f, const SimReport& r) {
    AttackVerdict v;
    v.safe = r.fake_proofs_confirmed == 0;
    if (f.kind == AttackKind::IdentityObserver) {
        v.expectation_met = r.rotations > 0;
        if (!v.expectation_met) v.note = "no pseudonym rotated";
    } else {
        v.expectation_met = r.attack.injected > 0;
        if (!v.expectation_met) v.note = "attack never injected";
    }
    if (v.expectation_met && f.kind == AttackKind::Collusion && f.collusion_case == CollusionCase::D) {
        const auto it = r.attack.honest_rejects.find("CollusionSuspect");
        const bool suspect = it != r.attack.honest_rejects.end() && it->second > 0;
        v.expectation_met = r.attack.honest_accepts > 0 && suspect;
        if (!v.expectation_met)
            v.note = suspect ? "genuine proof never accepted" : "no CollusionSuspect raised";
    }
    if (!v.safe) v.note = std::to_string(r.fake_proofs_confirmed) + " fake proofs confirmed";
    return v;
}

}  // namespace polchain::sim
