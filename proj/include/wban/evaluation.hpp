#pragma once

// Ground-truth tooling and metrics: synthetic anomaly injection, MAD-based
// fault labeling, confusion/precision/recall/F1, ROC-AUC, normalized MSE for
// reconstruction fidelity, and the epsilon trade-off sweep.

#include <cstdint>
#include <span>
#include <vector>

#include "wban/core.hpp"
#include "wban/tier1.hpp"

namespace wban {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

struct InjectionSpec {
    double rate = 0.05;           // fraction of steps to corrupt
    double magnitude_sigma = 6.0; // offset in per-dimension standard deviations
    std::size_t dims_per_event = 2;
    std::uint64_t rng_seed = 0;

    void validate(std::size_t dimensions) const;  // throws ConfigError
};

struct InjectionResult {
    std::vector<std::vector<double>> series;  // [dimension][step]
    std::vector<std::uint8_t> labels;         // 1 where a step was corrupted
};

// Corrupts floor(rate * T) distinct steps, chosen uniformly. At each, a
// fresh set of dims_per_event dimensions is offset by exactly
// +-magnitude_sigma standard deviations of that dimension's original series
// (sign random). A step is labeled positive when any of its dimensions was
// corrupted. Bit-reproducible for a fixed seed.
InjectionResult inject_anomalies(const std::vector<std::vector<double>>& series,
                                 const InjectionSpec& spec);

// Flags x where |x - median| > k * MAD, with MAD the median absolute
// deviation from the median. When MAD collapses to zero (at least half the
// values identical) the rule degenerates to flagging any deviation from the
// median at all.
std::vector<std::uint8_t> label_faults_mad(std::span<const double> series, double k = 3.0);

// Throws LengthMismatch when flags and labels differ in length.
ConfusionCounts confusion(std::span<const std::uint8_t> flags,
                          std::span<const std::uint8_t> labels);

struct PrfMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // some denominator was zero; that metric is 0
};

PrfMetrics precision_recall_f1(const ConfusionCounts& c);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // one per distinct score, plus the (0,0) origin
    double auc = 0.0;
};

// Sweeps a decision threshold over the distinct score values (ties move as a
// block) and integrates the curve with the trapezoidal rule, which makes the
// AUC equal to the normalized Mann-Whitney U statistic with half credit for
// ties. Throws SingleClass unless both classes are present.
RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Mean squared error normalized by the MSE of the constant-mean predictor on
// `original`, clamped to [0, 1]: 0 = perfect reconstruction, 1 = no better
// than predicting the mean. A constant original degenerates to 0 when the
// reconstruction matches it exactly and 1 otherwise.
double nmse(std::span<const double> original, std::span<const double> reconstructed);

// Spearman rank correlation (average ranks for ties).
double spearman_rho(std::span<const double> a, std::span<const double> b);

struct SweepRow {
    double epsilon = 0.0;
    double discard_pct = 0.0;  // share of readings dropped as uninteresting
    double nmse = 0.0;         // mean over dimensions, reconstruction vs original
};

// Runs the sensor filter plus carry-forward reconstruction once per epsilon
// in the grid, holding every other filter parameter fixed.
std::vector<SweepRow> epsilon_sweep(const std::vector<std::vector<double>>& series,
                                    const FilterParams& base, std::span<const double> grid);

}  // namespace wban
