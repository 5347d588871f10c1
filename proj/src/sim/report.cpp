#include "polchain/sim/report.hpp"

namespace polchain::sim {

using nlohmann::json;

json event_to_json(const EventRecord& e) {
    json j{{"type", "event"},       {"schema_version", kReportSchemaVersion},
           {"t_ms", e.t_ms},        {"peer", e.peer},
           {"action", e.action},    {"verdict", e.verdict}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

json report_to_json(const SimReport& r) {
    json attack{{"injected", r.attack.injected},
                {"honest_accepts", r.attack.honest_accepts},
                {"honest_rejects", r.attack.honest_rejects},
                {"confirmed", r.attack.confirmed}};
    json observers = json::object();
    for (const auto& [peer, o] : r.observers)
        observers[std::to_string(peer)] = {{"pseudonyms_observed", o.pseudonyms_observed},
                                           {"links_guessed", o.links_guessed},
                                           {"links_correct", o.links_correct}};
    return json{{"type", "report"},
                {"schema_version", kReportSchemaVersion},
                {"seed", r.seed},
                {"final_heads", r.final_heads},
                {"main_height", r.main_height},
                {"confirmed_proofs", r.confirmed_proofs},
                {"fake_proofs_confirmed", r.fake_proofs_confirmed},
                {"rejections", r.rejections},
                {"convergence", r.convergence},
                {"forks_observed", r.forks_observed},
                {"rotations", r.rotations},
                {"messages_sent", r.messages_sent},
                {"messages_lost", r.messages_lost},
                {"attack", attack},
                {"observers", observers}};
}

}  // namespace polchain::sim
