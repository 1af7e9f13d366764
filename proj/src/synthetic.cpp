#include "wban/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "wban/core.hpp"

namespace wban {

SyntheticSpec vitals_profile(std::size_t steps, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.steps = steps;
    spec.rng_seed = seed;
    // Means and swings sit in adult resting ranges; periods are mutually
    // incommensurate so the channels never lock phase. Quantization steps
    // match typical monitor export resolution (integers; 0.1% for SpO2).
    spec.attributes = {
        {"RESP", 16.0, 3.0, 420.0, 0.06, 0.99, 0.05, 1.0},
        {"BP-S", 120.0, 7.0, 600.0, 0.12, 0.99, 0.10, 1.0},
        {"BP-D", 80.0, 4.0, 600.0, 0.08, 0.99, 0.06, 1.0},
        {"SpO2", 98.0, 0.8, 780.0, 0.015, 0.99, 0.02, 0.1},
        {"HR", 75.0, 8.0, 510.0, 0.10, 0.99, 0.08, 1.0},
        {"PULSE", 75.0, 8.0, 540.0, 0.10, 0.99, 0.08, 1.0},
    };
    return spec;
}

SyntheticSpec drifting_vitals_profile(std::size_t steps, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.steps = steps;
    spec.rng_seed = seed;
    spec.attributes = {
        {"RESP", 16.0, 2.5, 11000.0, 0.02, 0.99, 0.02, 0.0},
        {"BP-S", 120.0, 10.0, 13000.0, 0.06, 0.99, 0.10, 0.0},
        {"BP-D", 80.0, 6.0, 12000.0, 0.04, 0.99, 0.06, 0.0},
        {"SpO2", 98.0, 1.0, 15000.0, 0.008, 0.99, 0.01, 0.0},
        {"HR", 75.0, 7.0, 12500.0, 0.05, 0.99, 0.08, 0.0},
        {"PULSE", 75.0, 7.0, 13500.0, 0.05, 0.99, 0.08, 0.0},
    };
    return spec;
}

std::vector<std::vector<double>> generate(const SyntheticSpec& spec) {
    if (spec.attributes.empty() || spec.steps == 0) {
        throw ConfigError("synthetic spec needs at least one attribute and one step");
    }
    std::vector<std::vector<double>> out(spec.attributes.size());
    for (std::size_t k = 0; k < spec.attributes.size(); ++k) {
        const SyntheticAttribute& a = spec.attributes[k];
        if (!(a.period_steps > 0.0) || !(std::fabs(a.ar_phi) < 1.0)) {
            throw ConfigError("attribute '" + a.name +
                              "': period must be positive and |ar_phi| < 1");
        }
        Rng rng(derive_seed(spec.rng_seed, k));
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        // Start the AR component from its stationary distribution so the
        // series has no settling transient.
        double ar = rng.normal(0.0, a.ar_sigma / std::sqrt(1.0 - a.ar_phi * a.ar_phi));

        std::vector<double>& series = out[k];
        series.resize(spec.steps);
        for (std::size_t t = 0; t < spec.steps; ++t) {
            ar = a.ar_phi * ar + rng.normal(0.0, a.ar_sigma);
            double v = a.mean +
                       a.sine_amp * std::sin(2.0 * std::numbers::pi *
                                                 static_cast<double>(t) / a.period_steps +
                                             phase) +
                       ar + rng.normal(0.0, a.noise_sigma);
            if (a.quant_step > 0.0) {
                v = std::round(v / a.quant_step) * a.quant_step;
            }
            series[t] = v;
        }
    }
    return out;
}

}  // namespace wban
