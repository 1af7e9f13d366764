#pragma once

#include <wban/iforest.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace testkit {

// Two-pass population statistics; reference implementation kept independent
// of the streaming update under test.
inline std::pair<double, double> batch_mean_var(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size());
    return {m, v};
}

// Recursive path-length evaluation, deliberately structured differently from
// the iterative walk in the library so the two can cross-check each other.
inline double recursive_path(const wban::IsolationTree& tree, int node,
                             std::span<const double> point, int depth) {
    const auto& nodes = tree.nodes();
    const auto& nd = nodes[static_cast<std::size_t>(node)];
    if (nd.is_external())
        return depth + wban::avg_path_d(nd.size);
    int next = point[static_cast<std::size_t>(nd.split_dim)] < nd.split_value ? nd.left : nd.right;
    return recursive_path(tree, next, point, depth + 1);
}

inline double brute_force_score(const std::vector<wban::IsolationTree>& trees,
                                std::span<const double> point, int omega) {
    double sum = 0.0;
    for (const auto& t : trees) sum += recursive_path(t, 0, point, 0);
    return wban::anomaly_score(sum / static_cast<double>(trees.size()), omega);
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
    static std::mt19937_64 eng{std::random_device{}()};
    auto dir = std::filesystem::temp_directory_path() /
               (tag + "-" + std::to_string(eng()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

}  // namespace testkit
