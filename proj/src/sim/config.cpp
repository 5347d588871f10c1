#include "polchain/sim/config.hpp"

#include <fstream>
#include <set>

namespace polchain::sim {
namespace {

using nlohmann::json;

constexpr std::string_view kAttackNames[] = {"SpoofOwnLocation", "SpoofOtherLocation",
                                             "ReplayProof", "Collusion", "IdentityObserver"};
constexpr std::string_view kCaseNames[] = {"a", "b", "c", "d"};

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key, std::string("wrong type: ") + e.what());
    }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    T v{};
    read(j, key, v);
    out = v;
}

AttackKind attack_from_string(const std::string& s) {
    for (std::size_t i = 0; i < std::size(kAttackNames); ++i)
        if (kAttackNames[i] == s) return static_cast<AttackKind>(i);
    throw ConfigError("adversaries.kind", "unknown attack kind '" + s + "'");
}

CollusionCase case_from_string(const std::string& s) {
    for (std::size_t i = 0; i < std::size(kCaseNames); ++i)
        if (kCaseNames[i] == s) return static_cast<CollusionCase>(i);
    throw ConfigError("adversaries.case", "unknown collusion case '" + s + "'");
}

}  // namespace

std::string_view to_string(AttackKind k) { return kAttackNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(CollusionCase c) { return kCaseNames[static_cast<std::size_t>(c)]; }

void validate(const ScenarioConfig& c) {
    if (c.n_peers == 0) throw ConfigError("n_peers", "must be positive");
    if (!(c.world_extent_m > 0)) throw ConfigError("world_extent_m", "must be positive");
    if (c.T == 0) throw ConfigError("T", "must be positive");
    if (!(c.max_range_m > 0)) throw ConfigError("max_range_m", "must be positive");
    if (c.k_contacts == 0) throw ConfigError("k_contacts", "must be positive");
    if (c.freshness_window_ms == 0) throw ConfigError("freshness_window_ms", "must be positive");
    if (c.duration_ms == 0) throw ConfigError("duration_ms", "must be positive");
    if (c.request_period_ms == 0) throw ConfigError("request_period_ms", "must be positive");
    if (!(c.message_loss_prob >= 0.0 && c.message_loss_prob <= 1.0))
        throw ConfigError("message_loss_prob", "must lie in [0, 1]");
    if (c.latency_ms.min > c.latency_ms.max) throw ConfigError("latency_ms", "min exceeds max");
    if (!(c.pseudonym_rotation_rate_per_hour >= 0.0))
        throw ConfigError("pseudonym_rotation_rate_per_hour", "must be non-negative");
    if (!(c.origin_lat >= -89.0 && c.origin_lat <= 89.0)) throw ConfigError("origin_lat", "must lie in [-89, 89]");
    if (!(c.origin_lon >= -180.0 && c.origin_lon < 180.0)) throw ConfigError("origin_lon", "must lie in [-180, 180)");

    std::set<std::size_t> used;
    for (const auto& a : c.adversaries) {
        if (a.peer >= c.n_peers) throw ConfigError("adversaries.peer", "index out of range");
        if (!used.insert(a.peer).second) throw ConfigError("adversaries.peer", "peer listed twice");
        if (a.displacement_m && !(*a.displacement_m > 0))
            throw ConfigError("adversaries.displacement_m", "must be positive");
        if (a.victim && *a.victim >= c.n_peers) throw ConfigError("adversaries.victim", "index out of range");
        if (a.kind == AttackKind::Collusion) {
            if (!a.collusion_case) throw ConfigError("adversaries.case", "collusion needs a case");
            if (!a.partner) throw ConfigError("adversaries.partner", "collusion needs at least two colluding peers");
            if (*a.partner >= c.n_peers || *a.partner == a.peer)
                throw ConfigError("adversaries.partner", "must be another peer index");
            if (!used.insert(*a.partner).second)
                throw ConfigError("adversaries.partner", "peer already has an adversarial role");
        }
    }
    for (const auto& a : c.adversaries)
        if (a.victim && used.contains(*a.victim))
            throw ConfigError("adversaries.victim", "victim must be an honest peer");
    if (used.size() >= c.n_peers) throw ConfigError("adversaries", "at least one honest peer is required");
}

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be an object");
    static const std::set<std::string> known = {
        "seed", "n_peers", "world_extent_m", "T", "max_range_m", "k_contacts",
        "freshness_window_ms", "duration_ms", "request_period_ms", "message_loss_prob",
        "latency_ms", "pseudonym_rotation_rate_per_hour", "adversaries", "mint_delay_ms",
        "prune", "origin_lat", "origin_lon", "disable_range_check", "record_events"};
    for (const auto& [k, v] : j.items())
        if (!known.contains(k)) throw ConfigError(k, "unknown field");

    ScenarioConfig c;
    read(j, "seed", c.seed);
    read(j, "n_peers", c.n_peers);
    read(j, "world_extent_m", c.world_extent_m);
    read(j, "T", c.T);
    read(j, "max_range_m", c.max_range_m);
    read(j, "k_contacts", c.k_contacts);
    read(j, "freshness_window_ms", c.freshness_window_ms);
    read(j, "duration_ms", c.duration_ms);
    read(j, "request_period_ms", c.request_period_ms);
    read(j, "message_loss_prob", c.message_loss_prob);
    read(j, "pseudonym_rotation_rate_per_hour", c.pseudonym_rotation_rate_per_hour);
    read(j, "mint_delay_ms", c.mint_delay_ms);
    read(j, "prune", c.prune);
    read(j, "origin_lat", c.origin_lat);
    read(j, "origin_lon", c.origin_lon);
    read(j, "disable_range_check", c.disable_range_check);
    read(j, "record_events", c.record_events);
    if (j.contains("latency_ms")) {
        const auto& l = j.at("latency_ms");
        if (!l.is_object()) throw ConfigError("latency_ms", "must be an object {min, max}");
        read(l, "min", c.latency_ms.min);
        read(l, "max", c.latency_ms.max);
    }
    if (j.contains("adversaries")) {
        const auto& arr = j.at("adversaries");
        if (!arr.is_array()) throw ConfigError("adversaries", "must be an array");
        for (const auto& e : arr) {
            if (!e.is_object()) throw ConfigError("adversaries", "entries must be objects");
            AdversarySpec a;
            if (!e.contains("peer")) throw ConfigError("adversaries.peer", "missing");
            read(e, "peer", a.peer);
            std::string kind;
            read(e, "kind", kind);
            a.kind = attack_from_string(kind);
            if (e.contains("case")) a.collusion_case = case_from_string(e.at("case").get<std::string>());
            read_opt(e, "partner", a.partner);
            read_opt(e, "displacement_m", a.displacement_m);
            read_opt(e, "victim", a.victim);
            c.adversaries.push_back(a);
        }
    }
    validate(c);
    return c;
}

json config_to_json(const ScenarioConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["n_peers"] = c.n_peers;
    j["world_extent_m"] = c.world_extent_m;
    j["T"] = c.T;
    j["max_range_m"] = c.max_range_m;
    j["k_contacts"] = c.k_contacts;
    j["freshness_window_ms"] = c.freshness_window_ms;
    j["duration_ms"] = c.duration_ms;
    j["request_period_ms"] = c.request_period_ms;
    j["message_loss_prob"] = c.message_loss_prob;
    j["latency_ms"] = {{"min", c.latency_ms.min}, {"max", c.latency_ms.max}};
    j["pseudonym_rotation_rate_per_hour"] = c.pseudonym_rotation_rate_per_hour;
    j["mint_delay_ms"] = c.mint_delay_ms;
    j["prune"] = c.prune;
    j["origin_lat"] = c.origin_lat;
    j["origin_lon"] = c.origin_lon;
    j["disable_range_check"] = c.disable_range_check;
    j["record_events"] = c.record_events;
    j["adversaries"] = json::array();
    for (const auto& a : c.adversaries) {
        json e{{"peer", a.peer}, {"kind", std::string(to_string(a.kind))}};
        if (a.collusion_case) e["case"] = std::string(to_string(*a.collusion_case));
        if (a.partner) e["partner"] = *a.partner;
        if (a.displacement_m) e["displacement_m"] = *a.displacement_m;
        if (a.victim) e["victim"] = *a.victim;
        j["adversaries"].push_back(e);
    }
    return j;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace polchain::sim
