#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polchain::sim {

/// Carries the offending field name so diagnostics can point at it.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class AttackKind { SpoofOwnLocation, SpoofOtherLocation, ReplayProof, Collusion, IdentityObserver };
enum class CollusionCase { A, B, C, D };

std::string_view to_string(AttackKind k);
std::string_view to_string(CollusionCase c);

struct AdversarySpec {
    std::size_t peer = 0;
    AttackKind kind = AttackKind::SpoofOwnLocation;
    /// Collusion only.
    std::optional<CollusionCase> collusion_case;
    /// Collusion only: the second colluding peer.
    std::optional<std::size_t> partner;
    /// SpoofOwnLocation: claimed offset from the true position (default 10 km).
    /// Collusion a/b/c: how far east of the world the colluders really are
    /// (default 1 km).
    std::optional<double> displacement_m;
    /// SpoofOtherLocation / Collusion: honest peer to impersonate or sit next
    /// to. Chosen from the seed when absent.
    std::optional<std::size_t> victim;
};

struct LatencyRange {
    std::uint64_t min = 10;
    std::uint64_t max = 50;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::size_t n_peers = 25;
    double world_extent_m = 250.0;
    std::uint32_t T = 5;
    double max_range_m = 100.0;
    std::size_t k_contacts = 8;
    std::uint64_t freshness_window_ms = 30'000;
    std::uint64_t duration_ms = 60'000;
    std::uint64_t request_period_ms = 5'000;
    double message_loss_prob = 0.0;
    LatencyRange latency_ms;
    double pseudonym_rotation_rate_per_hour = 0.0;
    std::vector<AdversarySpec> adversaries;

    /// Delay between a head change (or a new pending proof) and the mint attempt.
    std::uint64_t mint_delay_ms = 500;
    /// Peers prune bodies older than 2T.
    bool prune = false;
    double origin_lat = 44.8015;
    double origin_lon = 10.3279;
    /// Test hook: honest peers skip every distance comparison.
    bool disable_range_check = false;
    /// Keep the per-event log in the report.
    bool record_events = false;
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& c);

/// Field names match ScenarioConfig one-to-one. Unknown fields are rejected.
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& c);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace polchain::sim
