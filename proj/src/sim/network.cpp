#include "polchain/sim/network.hpp"

#include <cmath>

namespace polchain::sim {

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return next();
    return lo + next() % (span + 1);
}

double Rng::exponential(double rate) { return -std::log(1.0 - uniform01()) / rate; }

Seed Rng::seed32() {
    Seed s;
    for (std::size_t i = 0; i < Seed::size; i += 8) {
        const auto v = next();
        for (std::size_t k = 0; k < 8; ++k) s.bytes[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    return s;
}

std::optional<std::uint64_t> deliver(std::uint64_t now_ms, const ScenarioConfig& cfg, Rng& rng) {
    if (rng.bernoulli(cfg.message_loss_prob)) return std::nullopt;
    return now_ms + rng.between(cfg.latency_ms.min, cfg.latency_ms.max);
}

}  // namespace polchain::sim
