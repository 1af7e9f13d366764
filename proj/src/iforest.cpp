#include "wban/iforest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "wban/lpu.hpp"

namespace wban {

namespace {

constexpr double kEulerGamma = 0.5772156649;

// True when at least one double lies strictly between lo and hi, i.e. the
// open interval (lo, hi) is a usable split range.
bool splittable(double lo, double hi) {
    return std::nextafter(lo, std::numeric_limits<double>::infinity()) < hi;
}

struct TreeBuilder {
    std::span<const std::vector<double>> data;
    std::size_t height_limit;
    Rng& rng;
    std::vector<IsolationTree::Node> nodes;

    std::int32_t grow(std::span<std::uint32_t> idx, std::size_t depth) {
        const auto node_id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].size = static_cast<std::uint32_t>(idx.size());
        if (idx.size() <= 1 || depth >= height_limit) {
            return node_id;
        }

        const std::size_t dims = data[idx.front()].size();
        auto range_of = [&](std::size_t d) {
            double lo = data[idx.front()][d], hi = lo;
            for (std::uint32_t i : idx) {
                lo = std::min(lo, data[i][d]);
                hi = std::max(hi, data[i][d]);
            }
            return std::pair{lo, hi};
        };

        std::size_t dim = rng.below(dims);
        auto [lo, hi] = range_of(dim);
        if (!splittable(lo, hi)) {
            // Re-draw uniformly among the dimensions that can still split.
            std::vector<std::size_t> usable;
            for (std::size_t d = 0; d < dims; ++d) {
                auto [dlo, dhi] = range_of(d);
                if (splittable(dlo, dhi)) usable.push_back(d);
            }
            if (usable.empty()) {
                return node_id;  // all points identical: external
            }
            dim = usable[rng.below(usable.size())];
            std::tie(lo, hi) = range_of(dim);
        }

        // Uniform in the open interval; endpoints can occur through rounding
        // and would produce an empty side, so reject them.
        double split;
        do {
            split = rng.uniform(lo, hi);
        } while (!(lo < split && split < hi));

        auto mid = std::partition(idx.begin(), idx.end(),
                                  [&](std::uint32_t i) { return data[i][dim] < split; });
        const auto left_count = static_cast<std::size_t>(mid - idx.begin());

        nodes[node_id].split_dim = static_cast<std::int32_t>(dim);
        nodes[node_id].split_value = split;
        const std::int32_t left = grow(idx.first(left_count), depth + 1);
        nodes[node_id].left = left;
        const std::int32_t right = grow(idx.subspan(left_count), depth + 1);
        nodes[node_id].right = right;
        return node_id;
    }
};

}  // namespace

std::size_t Tier2Params::height_limit() const {
    return static_cast<std::size_t>(std::bit_width(omega - 1));
}

void Tier2Params::validate() const {
    if (omega < 2) {
        throw ConfigError("window length omega must be at least 2");
    }
    if (n_tree < 1) {
        throw ConfigError("n_tree must be at least 1");
    }
    if (k_tree < 1 || k_tree > n_tree) {
        throw ConfigError("k_tree must be in [1, n_tree]");
    }
    if (!(score_threshold > 0.0 && score_threshold < 1.0)) {
        throw ConfigError("score_threshold must lie in (0, 1)");
    }
}

double avg_path_d(std::size_t n) {
    if (n <= 1) return 0.0;
    if (n == 2) return 1.0;
    const double nd = static_cast<double>(n);
    return 2.0 * (std::log(nd - 1.0) + kEulerGamma) - 2.0 * (nd - 1.0) / nd;
}

double anomaly_score(double mean_path, std::size_t n) {
    return std::exp2(-mean_path / avg_path_d(n));
}

double IsolationTree::path_length(std::span<const double> x) const {
    std::size_t depth = 0;
    const Node* node = &nodes_.front();
    while (!node->is_external()) {
        node = x[static_cast<std::size_t>(node->split_dim)] < node->split_value
                   ? &nodes_[static_cast<std::size_t>(node->left)]
                   : &nodes_[static_cast<std::size_t>(node->right)];
        ++depth;
    }
    return static_cast<double>(depth) + avg_path_d(node->size);
}

IsolationTree build_itree(std::span<const std::vector<double>> sample,
                          std::size_t height_limit, Rng& rng) {
    if (sample.empty()) {
        throw DegenerateSample("cannot build a tree from an empty sample");
    }
    std::vector<std::uint32_t> idx(sample.size());
    std::iota(idx.begin(), idx.end(), 0u);
    TreeBuilder builder{sample, height_limit, rng, {}};
    builder.nodes.reserve(2 * sample.size());
    builder.grow(idx, 0);
    IsolationTree tree;
    tree.nodes_ = std::move(builder.nodes);
    tree.sample_size_ = sample.size();
    return tree;
}

ForestBuffer ForestBuffer::build(std::span<const std::vector<double>> window,
                                 const Tier2Params& p, Rng& rng) {
    ForestBuffer forest;
    forest.trees_.reserve(p.n_tree);
    for (std::size_t i = 0; i < p.n_tree; ++i) {
        forest.trees_.push_back(build_itree(window, p.height_limit(), rng));
    }
    return forest;
}

void ForestBuffer::refresh(std::span<const std::vector<double>> window,
                           const Tier2Params& p, Rng& rng) {
    for (std::size_t i = 0; i < p.k_tree; ++i) {
        trees_[next_] = build_itree(window, p.height_limit(), rng);
        next_ = (next_ + 1) % trees_.size();
    }
}

double ForestBuffer::mean_path_length(std::span<const double> x) const {
    double sum = 0.0;
    for (const IsolationTree& tree : trees_) {
        sum += tree.path_length(x);
    }
    return sum / static_cast<double>(trees_.size());
}

std::vector<ScoredPoint> score_window(const ForestBuffer& forest,
                                      std::span<const std::vector<double>> normalized,
                                      std::int64_t row_t0, const Tier2Params& p) {
    std::vector<ScoredPoint> out;
    out.reserve(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        ScoredPoint sp;
        sp.t = row_t0 + static_cast<std::int64_t>(i);
        sp.mean_path = forest.mean_path_length(normalized[i]);
        sp.score = anomaly_score(sp.mean_path, p.omega);
        sp.is_anomaly = sp.score > p.score_threshold;
        out.push_back(sp);
    }
    return out;
}

std::vector<ScoredPoint> process_stream(std::span<const TimeStepVector> stream,
                                        const Tier2Params& p) {
    p.validate();
    if (stream.size() < p.omega) {
        throw StreamTooShort("stream of " + std::to_string(stream.size()) +
                             " vectors is shorter than one window of " +
                             std::to_string(p.omega));
    }

    Rng rng(p.rng_seed);
    std::vector<ScoredPoint> scores;
    scores.reserve(stream.size());

    ForestBuffer forest;
    const std::size_t full_windows = stream.size() / p.omega;
    for (std::size_t w = 0; w < full_windows; ++w) {
        const auto window = stream.subspan(w * p.omega, p.omega);
        const auto normalized = normalize_window(window);
        if (w == 0) {
            forest = ForestBuffer::build(normalized, p, rng);
            const auto scored = score_window(forest, normalized, window.front().t, p);
            scores.insert(scores.end(), scored.begin(), scored.end());
        } else {
            const auto scored = score_window(forest, normalized, window.front().t, p);
            scores.insert(scores.end(), scored.begin(), scored.end());
            forest.refresh(normalized, p, rng);
        }
    }

    const std::size_t tail = stream.size() % p.omega;
    if (tail > 0) {
        const auto window = stream.subspan(full_windows * p.omega, tail);
        const auto normalized = normalize_window(window);
        const auto scored = score_window(forest, normalized, window.front().t, p);
        scores.insert(scores.end(), scored.begin(), scored.end());
    }
    return scores;
}

}  // namespace wban
