#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "polchain/crypto.hpp"
#include "polchain/sim/config.hpp"

namespace polchain::sim {

/// Seeded generator with explicit transforms, so streams do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi);
    /// Index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(between(0, n - 1)); }
    bool bernoulli(double p) { return uniform01() < p; }
    /// Exponential with the given rate (events per unit).
    double exponential(double rate);
    Seed seed32();

private:
    std::mt19937_64 engine_;
};

/// Arrival time of one transmission, or nullopt when it is lost.
std::optional<std::uint64_t> deliver(std::uint64_t now_ms, const ScenarioConfig& cfg, Rng& rng);

}  // namespace polchain::sim
