#include "wban/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wban/rng.hpp"

namespace wban {

namespace {

double population_std(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / n);
}

double median_of(std::vector<double> xs) {
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double hi = xs[mid];
    if (xs.size() % 2 == 1) return hi;
    double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// First n entries of a partial Fisher-Yates shuffle: n distinct draws from
// [0, total), uniform over subsets, deterministic in the rng stream.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t total, Rng& rng) {
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
}

std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j - 1) + 1.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    if (da == 0.0 || db == 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

void check_rectangular(const std::vector<std::vector<double>>& series) {
    if (series.empty() || series.front().empty()) {
        throw EmptyInput("series must have at least one dimension and one step");
    }
    for (const auto& dim : series) {
        if (dim.size() != series.front().size()) {
            throw LengthMismatch("dimensions differ in length");
        }
    }
}

}  // namespace

void InjectionSpec::validate(std::size_t dimensions) const {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw ConfigError("injection rate must lie in [0, 1]");
    }
    if (!(magnitude_sigma > 0.0)) {
        throw ConfigError("magnitude_sigma must be positive");
    }
    if (dims_per_event < 1 || dims_per_event > dimensions) {
        throw ConfigError("dims_per_event must lie in [1, dimensions]");
    }
}

InjectionResult inject_anomalies(const std::vector<std::vector<double>>& series,
                                 const InjectionSpec& spec) {
    check_rectangular(series);
    const std::size_t dims = series.size();
    const std::size_t steps = series.front().size();
    spec.validate(dims);

    InjectionResult out;
    out.series = series;
    out.labels.assign(steps, 0);

    const auto n_events = static_cast<std::size_t>(spec.rate * static_cast<double>(steps));
    if (n_events == 0) return out;

    std::vector<double> sigma(dims);
    for (std::size_t d = 0; d < dims; ++d) sigma[d] = population_std(series[d]);

    Rng rng(spec.rng_seed);
    const auto chosen_steps = sample_distinct(n_events, steps, rng);
    for (std::size_t t : chosen_steps) {
        const auto chosen_dims = sample_distinct(spec.dims_per_event, dims, rng);
        for (std::size_t d : chosen_dims) {
            const double sign = rng.uniform01() < 0.5 ? 1.0 : -1.0;
            out.series[d][t] += sign * spec.magnitude_sigma * sigma[d];
        }
        out.labels[t] = 1;
    }
    return out;
}

std::vector<std::uint8_t> label_faults_mad(std::span<const double> series, double k) {
    if (series.size() < 3) {
        throw EmptyInput("MAD labeling needs at least 3 points");
    }
    const double med = median_of({series.begin(), series.end()});
    std::vector<double> abs_dev(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) abs_dev[i] = std::fabs(series[i] - med);
    const double mad = median_of(abs_dev);

    std::vector<std::uint8_t> mask(series.size(), 0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        // MAD of zero (half the values identical) collapses the threshold;
        // fall back to flagging any deviation from the median.
        mask[i] = (mad > 0.0 ? abs_dev[i] > k * mad : abs_dev[i] > 0.0) ? 1 : 0;
    }
    return mask;
}

ConfusionCounts confusion(std::span<const std::uint8_t> flags,
                          std::span<const std::uint8_t> labels) {
    if (flags.size() != labels.size()) {
        throw LengthMismatch("flags length " + std::to_string(flags.size()) +
                             " vs labels length " + std::to_string(labels.size()));
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (labels[i]) {
            (flags[i] ? c.tp : c.fn) += 1;
        } else {
            (flags[i] ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

PrfMetrics precision_recall_f1(const ConfusionCounts& c) {
    PrfMetrics m;
    const double tp = static_cast<double>(c.tp);
    if (c.tp + c.fp > 0) {
        m.precision = tp / static_cast<double>(c.tp + c.fp);
    } else {
        m.degenerate = true;
    }
    if (c.tp + c.fn > 0) {
        m.recall = tp / static_cast<double>(c.tp + c.fn);
    } else {
        m.degenerate = true;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.degenerate = true;
    }
    return m;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) {
        throw LengthMismatch("scores length " + std::to_string(scores.size()) +
                             " vs labels length " + std::to_string(labels.size()));
    }
    std::int64_t positives = 0;
    for (std::uint8_t l : labels) positives += l ? 1 : 0;
    const std::int64_t negatives = static_cast<std::int64_t>(labels.size()) - positives;
    if (positives == 0 || negatives == 0) {
        throw SingleClass("ROC needs both classes; got " + std::to_string(positives) +
                          " positives of " + std::to_string(labels.size()));
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::int64_t tp = 0, fp = 0;
    double auc = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        // All points sharing this score flip together: one threshold each.
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            (labels[order[k]] ? tp : fp) += 1;
        }
        const RocPoint prev = curve.points.back();
        const RocPoint next{static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)};
        auc += (next.fpr - prev.fpr) * 0.5 * (prev.tpr + next.tpr);
        curve.points.push_back(next);
        i = j;
    }
    curve.auc = auc;
    return curve;
}

double nmse(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size()) {
        throw LengthMismatch("original length " + std::to_string(original.size()) +
                             " vs reconstructed length " + std::to_string(reconstructed.size()));
    }
    if (original.empty()) {
        throw EmptyInput("nmse needs at least one point");
    }
    const double n = static_cast<double>(original.size());
    const double mean = std::accumulate(original.begin(), original.end(), 0.0) / n;
    double var = 0.0, mse = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        var += (original[i] - mean) * (original[i] - mean);
        mse += (original[i] - reconstructed[i]) * (original[i] - reconstructed[i]);
    }
    var /= n;
    mse /= n;
    if (var == 0.0) {
        // Constant signal: any error at all is as bad as it gets.
        return mse == 0.0 ? 0.0 : 1.0;
    }
    return std::clamp(mse / var, 0.0, 1.0);
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw LengthMismatch("rank correlation needs equal lengths");
    }
    if (a.size() < 2) {
        throw EmptyInput("rank correlation needs at least 2 points");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

std::vector<SweepRow> epsilon_sweep(const std::vector<std::vector<double>>& series,
                                    const FilterParams& base, std::span<const double> grid) {
    check_rectangular(series);
    if (grid.empty()) {
        throw ConfigError("epsilon grid must be non-empty");
    }
    const std::size_t dims = series.size();
    const std::size_t steps = series.front().size();

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double epsilon : grid) {
        FilterParams params = base;
        params.epsilon = epsilon;
        params.validate();

        std::int64_t uninteresting = 0;
        double nmse_sum = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            FilterState state;
            std::vector<double> recon(steps, 0.0);
            double last = 0.0;
            for (std::size_t t = 0; t < steps; ++t) {
                const Assessment a = assess(state, params, series[d][t]);
                state = a.state;
                if (a.decision == Decision::Transmit) {
                    last = series[d][t];  // first step always transmits (warm-up)
                } else if (a.decision == Decision::DiscardUninteresting) {
                    uninteresting += 1;
                }
                recon[t] = last;
            }
            nmse_sum += nmse(series[d], recon);
        }

        SweepRow row;
        row.epsilon = epsilon;
        row.discard_pct =
            100.0 * static_cast<double>(uninteresting) / static_cast<double>(dims * steps);
        row.nmse = nmse_sum / static_cast<double>(dims);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wban
