#pragma once

// Synthetic vital-sign generator backing the test suite, so experiments run
// without any external dataset. Each attribute is an independent stream:
// baseline + slow sinusoid (circadian/activity swing) + AR(1) wander +
// white measurement noise, optionally quantized to the resolution a bedside
// monitor would export.

#include <cstdint>
#include <string>
#include <vector>

#include "wban/rng.hpp"

namespace wban {

struct SyntheticAttribute {
    std::string name;
    double mean = 0.0;
    double sine_amp = 0.0;
    double period_steps = 1.0;  // sinusoid period
    double ar_sigma = 0.0;      // AR(1) innovation std
    double ar_phi = 0.0;        // AR(1) pole, |phi| < 1
    double noise_sigma = 0.0;   // white noise std
    double quant_step = 0.0;    // 0 disables quantization
};

struct SyntheticSpec {
    std::vector<SyntheticAttribute> attributes;
    std::size_t steps = 0;
    std::uint64_t rng_seed = 0;
};

// Six-channel vitals profile (RESP, BP-S, BP-D, SpO2, HR, PULSE) with
// monitor-style quantization. Calm enough that consecutive readings rarely
// clear the default transmit threshold: the regime the filter is built for.
SyntheticSpec vitals_profile(std::size_t steps, std::uint64_t seed);

// Variant dominated by a drift much slower than the filter's reset period
// and without quantization. Reconstruction error degrades smoothly as the
// transmit threshold rises, which is what the epsilon trade-off sweep needs
// to show.
SyntheticSpec drifting_vitals_profile(std::size_t steps, std::uint64_t seed);

// Generates one series per attribute ([dimension][step]). Every attribute
// draws from its own sub-seeded stream, so adding or reordering attributes
// does not disturb the others.
std::vector<std::vector<double>> generate(const SyntheticSpec& spec);

}  // namespace wban
