#pragma once

// Sensor-side energy filter. Each attribute stream keeps O(1) running
// statistics and transmits a reading only when its standardized value moved
// enough since the last assessment; implausible values are dropped outright.
// All functions are pure (state in, state out) so a caller can replay or
// branch histories freely.

#include <cstdint>

#include "wban/core.hpp"

namespace wban {

struct FilterParams {
    // Minimum shift in z-score between consecutive readings for a reading to
    // be worth transmitting.
    double epsilon = 0.2;

    // Plausibility band in z-score units; readings outside are faulty.
    double low_z = -4.0;
    double high_z = 4.0;

    // Full statistics reset cadence, in sample steps (2 h at 1 Hz). Keeps the
    // running mean from ossifying as the wearer's baseline drifts.
    std::int64_t reset_period_steps = 7200;

    // Readings transmitted unconditionally while statistics warm up.
    std::int64_t warmup_count = 30;

    // Below this running variance a z-score is meaningless; stay in warm-up.
    double variance_floor = 1e-12;

    // Gateway liveness acknowledgement cadence, in sample steps.
    std::int64_t ack_interval_steps = 60;

    void validate() const;  // throws ConfigError
};

// Complete per-attribute filter memory. Fixed size by design: the sensor
// never buffers readings.
struct FilterState {
    double mean = 0.0;
    double variance = 0.0;  // population variance of all ingested readings
    std::int64_t count = 0;
    double z_prev = 0.0;
    std::int64_t steps_since_reset = 0;
};

static_assert(sizeof(FilterState) == 40, "filter memory must stay O(1)");

// Standardized deviation of x under the current statistics.
// Throws VarianceDegenerate when variance < variance_floor.
double z_score(const FilterState& s, double x, double variance_floor = 1e-12);

// Folds x into the running mean/variance. Equivalent to recomputing the
// population statistics of the full ingested sequence, without storing it.
FilterState update_stats(FilterState s, double x);

struct Assessment {
    Decision decision = Decision::Transmit;
    FilterState state;
};

// One filter step: decide the fate of reading x and advance the state.
//
//   warm-up (count or variance too low)  -> Transmit, ingest x
//   z outside [low_z, high_z]            -> DiscardFaulty, do not ingest
//   |z - z_prev| >= epsilon              -> Transmit, ingest x
//   otherwise                            -> DiscardUninteresting, do not ingest
//
// z_prev tracks the latest computed z-score in every non-warm-up branch,
// including both discard branches. The periodic reset fires after the
// decision, wiping the state back to empty.
Assessment assess(FilterState s, const FilterParams& p, double x);

// Keepalive cadence: a sensor that is discarding readings still transmits
// one acknowledgement byte every this many steps so the gateway can tell
// silence from death. Returns the configured interval.
std::int64_t ack_schedule(const FilterParams& p);

}  // namespace wban
