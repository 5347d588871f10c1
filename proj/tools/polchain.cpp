#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polchain/chain.hpp"
#include "polchain/sim/scenarios.hpp"
#include "polchain/sim/simulator.hpp"
#include "polchain/vectors.hpp"

namespace {

using namespace polchain;
using namespace polchain::sim;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

/// stdout, or the file named by --out.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("out", "cannot write " + path);
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    bool events = false;
    std::string out;
    std::string chain_out;
};

int cmd_run(const RunArgs& a) {
    ScenarioConfig cfg;
    try {
        cfg = load_config_file(a.config);
        if (a.seed) cfg.seed = *a.seed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        Output out(a.out);
        auto& os = out.get();
        Simulation sim(cfg);
        if (a.events) sim.on_event = [&os](const EventRecord& e) { os << event_to_json(e).dump() << "\n"; };
        sim.run();
        os << report_to_json(sim.report()).dump() << "\n";
        if (!a.chain_out.empty()) {
            PeerIndex ref = 0;
            while (!sim.is_honest(ref)) ++ref;
            const auto dump = dump_chain(sim.peers()[ref].store);
            std::ofstream f(a.chain_out, std::ios::binary);
            if (!f) throw ConfigError("chain-out", "cannot write " + a.chain_out);
            f.write(reinterpret_cast<const char*>(dump.data()), static_cast<std::streamsize>(dump.size()));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

struct AttackArgs {
    std::uint64_t seeds = 10;
    std::uint64_t first_seed = 1;
    std::string out;
    bool disable_range_check = false;
};

int cmd_attacks(const AttackArgs& a) {
    std::optional<Output> out;
    try {
        out.emplace(a.out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    bool violated = false;
    json summary = json::array();
    std::printf("%-20s %6s %6s %9s %9s %10s %12s\n", "family", "runs", "safe", "injected",
                "accepted", "rejected", "expectation");
    for (const auto& fam : attack_families()) {
        std::uint64_t safe = 0, met = 0, injected = 0, accepted = 0, rejected = 0;
        for (std::uint64_t s = a.first_seed; s < a.first_seed + a.seeds; ++s) {
            const auto report = run(attack_scenario(fam, s, a.disable_range_check));
            const auto v = evaluate_attack(fam, report);
            safe += v.safe;
            met += v.expectation_met;
            injected += report.attack.injected;
            accepted += report.attack.honest_accepts;
            for (const auto& [reason, n] : report.attack.honest_rejects) rejected += n;
            if (!v.safe) {
                violated = true;
                std::cerr << "safety violation: " << fam.name << " seed " << s << ": " << v.note << "\n";
            }
        }
        std::printf("%-20s %6llu %6llu %9llu %9llu %10llu %9llu/%llu\n", fam.name.c_str(),
                    static_cast<unsigned long long>(a.seeds), static_cast<unsigned long long>(safe),
                    static_cast<unsigned long long>(injected), static_cast<unsigned long long>(accepted),
                    static_cast<unsigned long long>(rejected), static_cast<unsigned long long>(met),
                    static_cast<unsigned long long>(a.seeds));
        summary.push_back({{"family", fam.name},
                           {"runs", a.seeds},
                           {"safe_runs", safe},
                           {"expectation_met", met},
                           {"injected", injected},
                           {"honest_accepts", accepted},
                           {"honest_rejects", rejected}});
    }
    std::fflush(stdout);
    if (!a.out.empty())
        out->get() << json{{"type", "attack_summary"}, {"schema_version", kReportSchemaVersion},
                           {"families", summary}, {"violation", violated}}
                          .dump()
                   << "\n";
    return violated ? kExitViolation : kExitOk;
}

int cmd_vectors() {
    for (const auto& v : golden_vectors())
        std::cout << json{{"type", "vector"}, {"schema_version", kReportSchemaVersion},
                          {"name", v.name}, {"length", v.bytes.size()}, {"hex", to_hex(v.bytes)}}
                         .dump()
                  << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proof-of-location chain simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario and print its report");
    run_cmd->add_option("--config", run_args.config, "Scenario config (JSON)")->required();
    run_cmd->add_option("--seed", run_args.seed, "Override the config seed");
    run_cmd->add_flag("--events", run_args.events, "Stream event records before the report");
    run_cmd->add_option("--out", run_args.out, "Write records to this file instead of stdout");
    run_cmd->add_option("--chain-out", run_args.chain_out, "Dump the reference peer's main chain");

    AttackArgs attack_args;
    auto* attacks_cmd = app.add_subcommand("attacks", "Run the attack regression suite");
    attacks_cmd->add_option("--seeds", attack_args.seeds, "Seeds per attack family")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
    attacks_cmd->add_option("--first-seed", attack_args.first_seed, "First seed of the sweep");
    attacks_cmd->add_option("--out", attack_args.out, "Write a JSON summary to this file");
    attacks_cmd->add_flag("--disable-range-check", attack_args.disable_range_check,
                          "Test hook: honest peers skip distance checks");

    app.add_subcommand("vectors", "Print golden encoding vectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (attacks_cmd->parsed()) return cmd_attacks(attack_args);
        return cmd_vectors();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
