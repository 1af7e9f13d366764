#pragma once

// End-to-end experiment orchestration: load or generate the input, run every
// reading through the sensor filter, reconstruct the stream at the gateway,
// score it with the detector, account the energy, and write all artifacts
// into the output directory.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wban/config.hpp"
#include "wban/csv.hpp"
#include "wban/energy.hpp"
#include "wban/evaluation.hpp"
#include "wban/iforest.hpp"

namespace wban {

struct AttributeReport {
    std::string name;
    std::int64_t total = 0;
    std::int64_t transmitted = 0;
    std::int64_t uninteresting = 0;
    std::int64_t faulty = 0;

    // Share of readings not transmitted, either kind of discard.
    double discard_pct() const;
};

struct DetectionReport {
    ConfusionCounts counts;
    PrfMetrics metrics;
    std::optional<double> auc;  // absent when scores are single-class
};

struct RunReport {
    std::vector<AttributeReport> attributes;
    SavingsReport energy;
    std::optional<DetectionReport> detection;  // present when labels exist
    std::vector<std::pair<std::int64_t, std::int64_t>> alarms;  // inclusive runs
    std::int64_t scored_points = 0;
    std::int64_t first_scored_step = 0;
    std::vector<std::string> notes;  // diagnostics (e.g. stream too short)
    double wall_seconds = 0.0;       // printed, never written to artifacts
};

// Synthetic generation or file ingestion, per config.
Dataset load_input(const ExperimentConfig& config);

// Full pipeline run. Writes report.json, energy.json, scores.csv,
// alarms.csv, decisions.csv (optional) and roc.csv (when labels allow) into
// config.out_dir.
RunReport run_experiment(const ExperimentConfig& config);

// Same pipeline with the filter bypassed (every reading transmits, no
// assessment instructions, no keepalive bytes): the energy denominator.
RunReport baseline_run(const ExperimentConfig& config);

// Filter + reconstruction trade-off across config.sweep_grid; writes
// sweep.csv.
std::vector<SweepRow> sweep_experiment(const ExperimentConfig& config);

// Writes the corrupted copy of the input (corrupted.csv, wide layout) and
// its ground-truth labels (labels.csv) without running the pipeline.
InjectionResult inject_experiment(const ExperimentConfig& config);

}  // namespace wban
