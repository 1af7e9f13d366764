#include "wban/tier1.hpp"

#include <cmath>
#include <string>

namespace wban {

void FilterParams::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be finite and non-negative");
    }
    if (!(low_z < high_z)) {
        throw ConfigError("plausibility band requires low_z < high_z");
    }
    if (reset_period_steps <= 0) {
        throw ConfigError("reset_period_steps must be positive");
    }
    if (warmup_count < 2) {
        throw ConfigError("warmup_count must be at least 2");
    }
    if (!(variance_floor > 0.0)) {
        throw ConfigError("variance_floor must be positive");
    }
    if (ack_interval_steps <= 0) {
        throw ConfigError("ack_interval_steps must be positive");
    }
}

double z_score(const FilterState& s, double x, double variance_floor) {
    if (s.variance < variance_floor) {
        throw VarianceDegenerate("variance " + std::to_string(s.variance) +
                                 " below floor " + std::to_string(variance_floor));
    }
    return (x - s.mean) / std::sqrt(s.variance);
}

FilterState update_stats(FilterState s, double x) {
    const std::int64_t n = s.count + 1;
    const double delta = x - s.mean;
    s.mean += delta / static_cast<double>(n);
    s.variance = (static_cast<double>(n - 1) / static_cast<double>(n)) *
                 (s.variance + delta * delta / static_cast<double>(n));
    s.count = n;
    return s;
}

Assessment assess(FilterState s, const FilterParams& p, double x) {
    Decision decision;
    if (s.count < p.warmup_count || s.variance < p.variance_floor) {
        // Statistics not trustworthy yet: transmit everything, learn from it.
        decision = Decision::Transmit;
        s = update_stats(s, x);
    } else {
        const double z = z_score(s, x, p.variance_floor);
        if (z < p.low_z || z > p.high_z) {
            // Implausible reading: drop it and keep it out of the statistics.
            decision = Decision::DiscardFaulty;
        } else if (std::fabs(z - s.z_prev) >= p.epsilon) {
            decision = Decision::Transmit;
            s = update_stats(s, x);
        } else {
            decision = Decision::DiscardUninteresting;
        }
        s.z_prev = z;
    }

    s.steps_since_reset += 1;
    if (s.steps_since_reset >= p.reset_period_steps) {
        s = FilterState{};
    }
    return Assessment{decision, s};
}

std::int64_t ack_schedule(const FilterParams& p) {
    return p.ack_interval_steps;
}

}  // namespace wban
