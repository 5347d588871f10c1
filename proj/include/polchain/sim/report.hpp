#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace polchain::sim {

inline constexpr int kReportSchemaVersion = 1;

struct EventRecord {
    std::uint64_t t_ms = 0;
    std::size_t peer = 0;
    std::string action;
    std::string verdict;
    std::string detail;
};

/// How honest peers dealt with adversarial traffic.
struct AttackStats {
    std::uint64_t injected = 0;
    std::uint64_t honest_accepts = 0;
    std::map<std::string, std::uint64_t> honest_rejects;
    /// Adversarial proofs found on any honest main branch.
    std::uint64_t confirmed = 0;
};

/// Linkage guesses an IdentityObserver can draw from its chain.
struct ObserverStats {
    std::uint64_t pseudonyms_observed = 0;
    std::uint64_t links_guessed = 0;
    std::uint64_t links_correct = 0;
};

struct SimReport {
    std::uint64_t seed = 0;
    /// Head digest (hex) per peer index.
    std::vector<std::string> final_heads;
    /// Height of the reference peer's head (lowest-index honest peer).
    std::uint64_t main_height = 0;
    /// Proofs on the reference peer's main branch.
    std::uint64_t confirmed_proofs = 0;
    /// Proofs on any honest main branch whose ground truth is false.
    std::uint64_t fake_proofs_confirmed = 0;
    /// Rejections by honest peers, by reason name.
    std::map<std::string, std::uint64_t> rejections;
    /// All honest heads identical at the end.
    bool convergence = false;
    /// Blocks honest peers stored on a side branch.
    std::uint64_t forks_observed = 0;
    std::uint64_t rotations = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_lost = 0;
    AttackStats attack;
    std::map<std::size_t, ObserverStats> observers;
    std::vector<EventRecord> events;
};

nlohmann::json event_to_json(const EventRecord& e);
/// Report object without the event list.
nlohmann::json report_to_json(const SimReport& r);

}  // namespace polchain::sim
