#pragma once

// Gateway-side anomaly detector: a forest of random isolation trees over a
// sliding window of reconstructed time-step vectors. Anomalous points are
// separated from the rest by fewer random axis-parallel splits, so their
// average path length across the forest is short. The forest tracks the
// stream by rebuilding a fixed quota of its oldest trees each time a new
// window completes, instead of rebuilding from scratch.

#include <cstdint>
#include <span>
#include <vector>

#include "wban/core.hpp"
#include "wban/rng.hpp"

namespace wban {

struct Tier2Params {
    std::size_t omega = 1024;      // sliding-window length (points per window)
    std::size_t n_tree = 100;      // forest size
    std::size_t k_tree = 20;       // trees rebuilt per completed window
    double score_threshold = 0.5;  // scores above this raise an alarm
    std::uint64_t rng_seed = 0;

    // Trees stop splitting at this depth; most points isolate far earlier.
    std::size_t height_limit() const;

    void validate() const;  // throws ConfigError
};

// Expected path length of an unsuccessful BST search over n points: the
// normalizer that makes isolation depths comparable across sizes, and the
// credit an external node contributes for the points it did not split.
double avg_path_d(std::size_t n);

// Maps a mean isolation depth over a window of n points onto (0, 1]:
// 0.5 is the indifference point, scores near 1 mean early isolation.
double anomaly_score(double mean_path, std::size_t n);

// One random isolation tree, stored as a flat node arena (root at index 0).
class IsolationTree {
public:
    struct Node {
        double split_value = 0.0;
        std::int32_t split_dim = -1;  // -1 marks an external node
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t size = 0;  // points that reached this node during build

        bool is_external() const { return split_dim < 0; }
    };

    // Isolation depth of x: edges walked to the external node it lands in,
    // plus avg_path_d of that node's size (the splits a full tree would have
    // needed for the points the depth cap left unseparated).
    double path_length(std::span<const double> x) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t sample_size() const { return sample_size_; }

    friend IsolationTree build_itree(std::span<const std::vector<double>> sample,
                                     std::size_t height_limit, Rng& rng);

private:
    std::vector<Node> nodes_;
    std::size_t sample_size_ = 0;
};

// Grows one tree over the sample. At each node a split dimension is drawn
// uniformly; if it is constant within the node, a replacement is drawn
// uniformly among the non-constant dimensions (none left: the node becomes
// external). The split value is drawn uniformly from the open interval
// between the node's min and max in that dimension, points with
// value < split go left, the rest go right. Splitting stops when a node
// holds a single point or the height limit is reached.
// Throws DegenerateSample on an empty sample.
IsolationTree build_itree(std::span<const std::vector<double>> sample,
                          std::size_t height_limit, Rng& rng);

// Fixed-capacity forest with circular replacement: refresh() rebuilds the
// k oldest trees from the newest window, leaving the rest untouched.
class ForestBuffer {
public:
    static ForestBuffer build(std::span<const std::vector<double>> window,
                              const Tier2Params& p, Rng& rng);

    void refresh(std::span<const std::vector<double>> window, const Tier2Params& p, Rng& rng);

    double mean_path_length(std::span<const double> x) const;

    const std::vector<IsolationTree>& trees() const { return trees_; }
    std::size_t next_replacement_slot() const { return next_; }

private:
    std::vector<IsolationTree> trees_;
    std::size_t next_ = 0;
};

// One scored stream point.
struct ScoredPoint {
    std::int64_t t = 0;
    double score = 0.0;
    double mean_path = 0.0;
    bool is_anomaly = false;
};

// Scores every row of a normalized window against the forest. row_t0 is the
// stream time of the first row; n is the window length the score normalizer
// assumes (the nominal omega, even for a shorter final window).
std::vector<ScoredPoint> score_window(const ForestBuffer& forest,
                                      std::span<const std::vector<double>> normalized,
                                      std::int64_t row_t0, const Tier2Params& p);

// Full streaming pass: cut the stream into consecutive windows of omega
// vectors; build the forest from the first window and score it, then for
// each later window score first and refresh after. A final short window is
// scored against the current forest without a refresh. Each window is
// min-max normalized independently. Throws StreamTooShort if the stream is
// shorter than one window.
std::vector<ScoredPoint> process_stream(std::span<const TimeStepVector> stream,
                                        const Tier2Params& p);

}  // namespace wban
