#pragma once

// Deterministic random source. std::mt19937_64 has a standard-mandated output
// sequence, but the std::uniform_*_distribution adaptors do not, so every
// mapping from raw 64-bit words to values is implemented here. Identical
// seeds therefore produce bit-identical streams on every platform.

#include <cstdint>
#include <random>

namespace wban {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [low, high); rounding may produce `high` when the span is
    // large, so callers needing a strict bound must reject it themselves.
    double uniform(double low, double high) {
        return low + uniform01() * (high - low);
    }

    // Uniform integer in [0, n). Unbiased via rejection sampling.
    std::uint64_t below(std::uint64_t n);

    // Standard normal via the Box-Muller transform (no cached spare, so the
    // draw count per call is fixed at two words).
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

// Stable per-component sub-seed derivation (SplitMix64 finalizer), so adding
// a consumer never shifts the stream another consumer sees.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace wban
