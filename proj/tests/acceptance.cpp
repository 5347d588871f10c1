// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

#include "chain_oracle.hpp"
#include "polchain/overlay.hpp"
#include "polchain/sim/scenarios.hpp"
#include "polchain/sim/simulator.hpp"

namespace {

using namespace polchain;
using namespace polchain::sim;
using namespace testing_support;

constexpr std::uint64_t kAttackSeeds = 100;
constexpr std::uint64_t kConvergenceRuns = 50;
constexpr int kMonopolyVariants = 20;
constexpr int kReplayCases = 100;
constexpr int kStakeChains = 1000;
constexpr int kPruneStreamBlocks = 200;
constexpr int kForkSets = 200;
constexpr int kPermutations = 10;
constexpr int kGeoPairs = 10'000;
constexpr double kGeoTolM = 0.01;
constexpr double kAntipodalTolM = 1.0;
constexpr int kDeterminismConfigs = 20;
constexpr int kRotationRuns = 100;
constexpr double kRotationSigmas = 4.0;
constexpr std::uint64_t kRotationSeed = 20'240'601;

struct Criterion {
    bool pass = false;
    std::string detail;
};

ContextFactory neutral() {
    return [](const ChainStore& s) { return neutral_context(s); };
}

Criterion ac1_attack_safety() {
    std::uint64_t runs = 0, unsafe = 0, unmet = 0;
    std::string first_bad;
    for (const auto& fam : attack_families()) {
        if (fam.kind == AttackKind::IdentityObserver) continue;
        for (std::uint64_t seed = 1; seed <= kAttackSeeds; ++seed) {
            const auto report = run(attack_scenario(fam, seed));
            const auto v = evaluate_attack(fam, report);
            ++runs;
            unsafe += !v.safe;
            unmet += !v.expectation_met;
            if ((!v.safe || !v.expectation_met) && first_bad.empty())
                first_bad = fam.name + " seed " + std::to_string(seed) + ": " + v.note;
        }
    }
    return {unsafe == 0 && unmet == 0 && runs == 7 * kAttackSeeds,
            std::to_string(runs) + " runs, " + std::to_string(unsafe) + " with confirmed fakes, " +
                std::to_string(unmet) + " expectation misses" + (first_bad.empty() ? "" : " (" + first_bad + ")")};
}

Criterion ac2_convergence() {
    std::uint64_t converged = 0, min_height = ~0ULL;
    for (std::uint64_t seed = 1; seed <= kConvergenceRuns; ++seed) {
        ScenarioConfig c;
        c.seed = seed;
        c.n_peers = 25;
        c.message_loss_prob = 0;
        c.latency_ms = {10, 50};
        c.duration_ms = 60'000;
        const auto r = run(c);
        converged += r.convergence;
        min_height = std::min(min_height, r.main_height);
    }
    return {converged == kConvergenceRuns && min_height > 0,
            std::to_string(converged) + "/" + std::to_string(kConvergenceRuns) +
                " converged, min main height " + std::to_string(min_height)};
}

Criterion ac3_monopoly_guard() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-40, 40);
    std::uint64_t validators = 0, monopoly = 0, first_accepted = 0;
    for (int v = 0; v < kMonopolyVariants; ++v) {
        constexpr std::uint8_t n = 10;
        World world;
        for (std::uint8_t i = 1; i <= n; ++i) {
            const auto loc = at_m(coord(rng), coord(rng));
            world.push_back(PeerRecord{pk(i), loc, loc});
        }
        const auto dominant = static_cast<std::uint8_t>(1 + rng() % n);
        std::vector<std::uint8_t> others;
        for (std::uint8_t i = 1; i <= n; ++i)
            if (i != dominant) others.push_back(i);
        std::shuffle(others.begin(), others.end(), rng);

        const ChainParams params{10};
        const ContextSettings settings{RangeParams{100}, OverlayParams{n - 1}, 1000, 30'000};
        const auto loc_of = [&](std::uint8_t i) { return world[i - 1].true_location; };
        const auto genesis = ChainStore(params).genesis();
        std::vector<ProofResponse> first;
        for (int k = 0; k < 3; ++k)
            first.push_back(proof(dominant, others[k], genesis, 100 + k, loc_of(dominant), loc_of(others[k])));
        first.push_back(proof(others[3], others[4], genesis, 110, loc_of(others[3]), loc_of(others[4])));
        const auto b1 = make_block(first, ident(dominant), genesis);
        const auto h1 = block_hash(b1);
        const auto b2 = make_block({proof(dominant, others[5], h1, 200, loc_of(dominant), loc_of(others[5]))},
                                   ident(dominant), h1);

        for (auto i : others) {
            ChainStore store(params);
            auto r1 = append(store, b1, build_context(world, pk(i), store, settings));
            first_accepted += r1.status == AppendStatus::Accepted;
            if (compute_stake(store, store.head()).at(pk(dominant)) != 3) return {false, "stake setup broken"};
            const auto r2 = append(store, b2, build_context(world, pk(i), store, settings));
            ++validators;
            monopoly += r2.status == AppendStatus::Rejected && r2.reason == RejectReason::MonopolyViolation;
        }
    }
    return {monopoly == validators && first_accepted == validators,
            std::to_string(monopoly) + "/" + std::to_string(validators) +
                " honest validators rejected the second block with MonopolyViolation"};
}

Criterion ac4_replay_horizon() {
    std::mt19937_64 rng(4);
    const std::vector<std::uint8_t> peers{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::uint64_t checks = 0, stale = 0, controls_ok = 0;
    for (int c = 0; c < kReplayCases; ++c) {
        const auto T = static_cast<std::uint32_t>(1 + rng() % 6);
        ChainStore store{ChainParams{T}};
        std::uint64_t ts = 1;
        const int len = static_cast<int>(T + 1 + rng() % 8);
        std::vector<Digest> path{store.genesis()};
        for (int i = 0; i < len; ++i) {
            auto b = valid_block(rng, store, store.head(), peers, ts);
            if (!b || !append(store, *b, neutral_context(store)).stored()) return {false, "chain setup failed"};
            path.push_back(store.head());
        }
        const auto head_h = store.head_height();
        // Anchors at depth >= T below head are outside the latest-T window.
        const auto depth = T + rng() % (head_h - T + 1);
        const auto& anchor = path[head_h - depth];
        const auto p = proof(1, 2, anchor, 50'000 + c);
        const auto fresh = proof(1, 2, store.head(), 60'000 + c);
        for (std::uint8_t local = 3; local <= 6; ++local) {
            auto ctx = context(store, local, {1, 2}, {1, 2});
            const auto v = verify_gossiped_proof(p, ctx);
            ++checks;
            stale += v.reason == RejectReason::StaleAnchor;
            controls_ok += verify_gossiped_proof(fresh, ctx).accepted();
        }
        const auto r = append(store, make_block({p}, ident(1), store.head()), neutral_context(store));
        ++checks;
        stale += r.reason == RejectReason::StaleAnchor;
    }
    return {stale == checks && controls_ok == 4ULL * kReplayCases,
            std::to_string(stale) + "/" + std::to_string(checks) + " StaleAnchor over " +
                std::to_string(kReplayCases) + " cases, " + std::to_string(controls_ok) + " in-window controls accepted"};
}

Criterion ac5_stake_oracle() {
    std::mt19937_64 rng(5);
    std::uint64_t compared = 0, mismatches = 0;
    for (int c = 0; c < kStakeChains; ++c) {
        TreeOracle o;
        o.window = static_cast<std::uint32_t>(1 + rng() % 6);
        ChainStore s{ChainParams{o.window}};
        std::vector<std::uint8_t> peers;
        for (std::uint8_t i = 1; i <= 2 + rng() % 9; ++i) peers.push_back(i);
        std::vector<Digest> hashes;
        std::uint64_t ts = 1;
        const int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) {
            const int par = rng() % 5 == 0 ? static_cast<int>(rng() % (i + 1)) - 1 : i - 1;
            const auto prev = par < 0 ? s.genesis() : hashes[par];
            auto b = make_block(random_proofs(rng, peers, prev, ts, 4), ident(peers[rng() % peers.size()]), prev);
            hashes.push_back(s.insert(b));
            o.blocks.push_back(std::move(b));
            o.parent.push_back(par);
        }
        for (int i = 0; i < n; ++i) {
            const auto want = o.stake(i);
            ++compared;
            mismatches += compute_stake(s, hashes[i]) != StakeTable(want.begin(), want.end());
        }
    }
    return {mismatches == 0, std::to_string(compared) + " tips over " + std::to_string(kStakeChains) +
                                 " chains, " + std::to_string(mismatches) + " mismatches"};
}

Criterion ac6_pruning() {
    std::mt19937_64 rng(6);
    const std::vector<std::uint8_t> peers{1, 2, 3, 4, 5, 6, 7, 8};
    ChainStore full{ChainParams{2, false}}, pruned{ChainParams{2, true}};
    std::uint64_t ts = 1, diffs = 0, forks = 0, rejects = 0;
    std::vector<Digest> known{full.genesis()};
    for (int i = 0; i < kPruneStreamBlocks; ++i) {
        const auto parent = rng() % 4 == 0 ? known[known.size() - 1 - rng() % std::min<std::size_t>(known.size(), 8)]
                                           : full.head();
        auto b = valid_block(rng, full, parent, peers, ts);
        if (!b) {
            --i;
            continue;
        }
        if (rng() % 10 == 0) b->producer_pk = pk(peers[rng() % peers.size()]);
        const auto a = append(full, *b, neutral_context(full));
        const auto c = append(pruned, *b, neutral_context(pruned));
        diffs += a.status != c.status || a.reason != c.reason || full.head() != pruned.head();
        forks += a.status == AppendStatus::ForkRetained;
        rejects += a.status == AppendStatus::Rejected;
        if (a.stored()) known.push_back(a.block_hash);
    }
    const bool pruned_something = pruned.body_count() < full.body_count();
    return {diffs == 0 && pruned_something && forks > 0 && rejects > 0,
            std::to_string(kPruneStreamBlocks) + " blocks (" + std::to_string(forks) + " forks, " +
                std::to_string(rejects) + " rejects), " + std::to_string(diffs) + " divergences, bodies " +
                std::to_string(pruned.body_count()) + " vs " + std::to_string(full.body_count())};
}

Criterion ac7_fork_choice() {
    std::mt19937_64 rng(7);
    const std::vector<std::uint8_t> peers{1, 2, 3, 4, 5, 6, 7};
    constexpr std::uint32_t T = 4;
    std::uint64_t differing = 0, multi_tip = 0;
    for (int set = 0; set < kForkSets; ++set) {
        ChainStore build{ChainParams{T}};
        std::vector<Block> blocks;
        std::vector<Digest> nodes{build.genesis()};
        std::uint64_t ts = 1;
        const int n = 4 + static_cast<int>(rng() % 12);
        while (static_cast<int>(blocks.size()) < n) {
            const auto parent = nodes[rng() % nodes.size()];
            if (build.height_of(parent) >= T) continue;
            auto b = valid_block(rng, build, parent, peers, ts);
            if (!b) continue;
            nodes.push_back(build.insert(*b));
            blocks.push_back(*b);
        }
        multi_tip += build.tips_at_max_height().size() > 1;
        const auto reference = choose_head(build);
        for (int perm = 0; perm < kPermutations; ++perm) {
            std::shuffle(blocks.begin(), blocks.end(), rng);
            ChainStore s{ChainParams{T}};
            OrphanPool orphans;
            for (const auto& b : blocks) ingest(s, b, orphans, neutral());
            differing += s.size() != blocks.size() + 1 || s.head() != reference || choose_head(s) != reference;
        }
    }
    return {differing == 0, std::to_string(kForkSets) + " sets x " + std::to_string(kPermutations) +
                                " permutations (" + std::to_string(multi_tip) + " with tied tips), " +
                                std::to_string(differing) + " disagreements"};
}

Criterion ac8_geometry() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::int32_t> lat(-kMaxLatMicrodeg, kMaxLatMicrodeg);
    std::uniform_int_distribution<std::int32_t> lon(-kMaxLonMicrodeg, kMaxLonMicrodeg - 1);
    double worst = 0;
    for (int i = 0; i < kGeoPairs; ++i) {
        const GeoLocation a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
        worst = std::max(worst, std::abs(distance_m(a, b) - haversine_oracle(a.lat_deg(), a.lon_deg(),
                                                                               b.lat_deg(), b.lon_deg())));
    }
    const double antipodal = std::abs(distance_m(GeoLocation::from_degrees(0, 0), GeoLocation::from_degrees(0, 180)) -
                                      std::numbers::pi * kEarthRadiusM);
    char buf[160];
    std::snprintf(buf, sizeof buf, "max |error| %.3g m over %d pairs (tol %.2g), antipodal error %.3g m (tol %.1f)",
                  worst, kGeoPairs, kGeoTolM, antipodal, kAntipodalTolM);
    return {worst <= kGeoTolM && antipodal <= kAntipodalTolM, buf};
}

Criterion ac9_determinism() {
    std::mt19937_64 rng(9);
    int identical = 0;
    for (int i = 0; i < kDeterminismConfigs; ++i) {
        ScenarioConfig c;
        c.seed = rng();
        c.n_peers = 3 + rng() % 10;
        c.world_extent_m = 60 + static_cast<double>(rng() % 140);
        c.T = static_cast<std::uint32_t>(1 + rng() % 5);
        c.k_contacts = 2 + rng() % 6;
        c.duration_ms = 8'000 + rng() % 12'000;
        c.message_loss_prob = static_cast<double>(rng() % 20) / 100;
        c.pseudonym_rotation_rate_per_hour = rng() % 3 == 0 ? 120 : 0;
        c.prune = rng() % 2;
        if (rng() % 2 && c.n_peers >= 4) {
            AdversarySpec a;
            a.peer = c.n_peers - 1;
            a.kind = static_cast<AttackKind>(rng() % 3);
            c.adversaries.push_back(a);
        }
        const auto a = report_to_json(run(c)).dump();
        const auto b = report_to_json(run(c)).dump();
        identical += a == b;
    }
    return {identical == kDeterminismConfigs,
            std::to_string(identical) + "/" + std::to_string(kDeterminismConfigs) + " configs byte-identical"};
}

Criterion ac10_rotation() {
    constexpr double rate_per_hour = 360;
    constexpr std::size_t peers = 5;
    constexpr std::uint64_t duration = 60'000;
    const double lambda_d = peers * rate_per_hour * (duration / 3.6e6);
    const double sigma = std::sqrt(lambda_d);
    std::uint64_t total = 0, outside = 0;
    for (int i = 0; i < kRotationRuns; ++i) {
        ScenarioConfig c;
        c.seed = kRotationSeed + i;
        c.n_peers = peers;
        c.world_extent_m = 60;
        c.T = 2;
        c.duration_ms = duration;
        c.request_period_ms = 20'000;
        c.pseudonym_rotation_rate_per_hour = rate_per_hour;
        const auto n = run(c).rotations;
        total += n;
        outside += std::abs(static_cast<double>(n) - lambda_d) > kRotationSigmas * sigma;
    }
    const double mean = static_cast<double>(total) / kRotationRuns;
    const bool mean_ok = std::abs(mean - lambda_d) <= kRotationSigmas * sigma / std::sqrt(double(kRotationRuns));
    char buf[200];
    std::snprintf(buf, sizeof buf, "lambda*D = %.1f, mean %.2f, %llu/%d runs outside %.0f sigma (seed %llu)",
                  lambda_d, mean, static_cast<unsigned long long>(outside), kRotationRuns, kRotationSigmas,
                  static_cast<unsigned long long>(kRotationSeed));
    return {outside == 0 && mean_ok, buf};
}

}  // namespace

// Optional arguments select criteria by id prefix, e.g. `AC4 AC7`.
int main(int argc, char** argv) {
    const std::pair<const char*, std::function<Criterion()>> criteria[] = {
        {"AC1 attack safety", ac1_attack_safety},   {"AC2 convergence", ac2_convergence},
        {"AC3 monopoly guard", ac3_monopoly_guard}, {"AC4 replay horizon", ac4_replay_horizon},
        {"AC5 stake oracle", ac5_stake_oracle},     {"AC6 pruning equivalence", ac6_pruning},
        {"AC7 fork-choice order", ac7_fork_choice}, {"AC8 geometry", ac8_geometry},
        {"AC9 determinism", ac9_determinism},       {"AC10 poisson rotation", ac10_rotation},
    };
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    bool all = true;
    for (const auto& [name, check] : criteria) {
        const std::string_view id = std::string_view(name).substr(0, std::string_view(name).find(' '));
        if (argc > 1 && std::none_of(argv + 1, argv + argc, [&](const char* a) { return id == a; })) continue;
        const auto t0 = clock::now();
        Criterion o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        all &= o.pass;
    }
    std::printf("total %.1fs\n", std::chrono::duration<double>(clock::now() - start).count());
    return all ? 0 : 1;
}
