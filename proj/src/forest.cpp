#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "auditkit/error.hpp"
#include "auditkit/models.hpp"
#include "auditkit/rng.hpp"

namespace auditkit {

namespace {

double gini(std::size_t ones, std::size_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(ones) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
    const Matrix& X;
    const std::vector<int>& y;
    std::size_t mtry;
    int max_depth;
    std::size_t min_leaf;
    Rng& rng;
    DecisionTree tree;

    int build(std::vector<std::size_t>& rows, int depth) {
        const std::size_t n = rows.size();
        std::size_t ones = 0;
        for (const std::size_t r : rows) ones += static_cast<std::size_t>(y[r]);

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().sample_count = n;
        tree.nodes.back().leaf_fraction = n ? static_cast<double>(ones) / static_cast<double>(n) : 0.0;

        const double impurity = gini(ones, n);
        const bool depth_ok = max_depth == 0 || depth < max_depth;
        if (impurity <= 0.0 || n < 2 * min_leaf || !depth_ok) return node_id;

        // Candidate features: mtry sampled without replacement, scanned in
        // ascending index order so equal gains break ties deterministically.
        const std::size_t d = X.cols;
        std::vector<std::size_t> features(d);
        std::iota(features.begin(), features.end(), std::size_t{0});
        for (std::size_t i = 0; i < std::min(mtry, d); ++i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(d) - 1));
            std::swap(features[i], features[j]);
        }
        features.resize(std::min(mtry, d));
        std::sort(features.begin(), features.end());

        double best_gain = 0.0;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        std::vector<std::size_t> order(rows);
        for (const std::size_t f : features) {
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return X(a, f) < X(b, f); });
            std::size_t left_ones = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_ones += static_cast<std::size_t>(y[order[k]]);
                const double v = X(order[k], f);
                const double next = X(order[k + 1], f);
                if (v == next) continue;
                const std::size_t nl = k + 1;
                const std::size_t nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double child =
                    (static_cast<double>(nl) * gini(left_ones, nl) +
                     static_cast<double>(nr) * gini(ones - left_ones, nr)) /
                    static_cast<double>(n);
                const double gain = impurity - child;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = 0.5 * (v + next);
                    found = true;
                }
            }
        }
        if (!found) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        for (const std::size_t r : rows) {
            (X(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        tree.nodes[static_cast<std::size_t>(node_id)].feature = static_cast<int>(best_feature);
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        tree.nodes[static_cast<std::size_t>(node_id)].impurity_decrease = best_gain;
        const int left_id = build(left_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        const int right_id = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

FittedForest fit_random_forest(const Dataset& train, const ForestConfig& cfg) {
    if (cfg.n_trees < 1) fail("ConfigError", "n_trees must be >= 1");
    if (train.n() == 0) fail("EmptyDataset", "cannot train a forest on an empty dataset");

    FittedForest forest;
    forest.feature_names = train.schema.feature_names;
    forest.seed = cfg.seed;
    forest.features_per_split = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(train.n_features()))));
    if (forest.features_per_split == 0) forest.features_per_split = 1;

    const std::size_t n = train.n();
    forest.trees.reserve(cfg.n_trees);
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        Rng rng(derive_seed(cfg.seed, "tree/" + std::to_string(t)));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        }
        TreeBuilder builder{train.X, train.y, forest.features_per_split,
                            cfg.max_depth, cfg.min_leaf, rng, {}};
        builder.build(rows, 0);
        forest.trees.push_back(std::move(builder.tree));
    }
    return forest;
}

std::vector<double> vim(const FittedForest& forest) {
    const std::size_t d = forest.feature_names.size();
    std::vector<double> total(d, 0.0);
    std::size_t trees_with_splits = 0;
    for (const DecisionTree& tree : forest.trees) {
        std::vector<double> imp(d, 0.0);
        double sum = 0.0;
        for (const TreeNode& node : tree.nodes) {
            if (node.feature < 0) continue;
            const double contribution =
                static_cast<double>(node.sample_count) * node.impurity_decrease;
            imp[static_cast<std::size_t>(node.feature)] += contribution;
            sum += contribution;
        }
        if (sum <= 0.0) continue;
        ++trees_with_splits;
        for (std::size_t f = 0; f < d; ++f) total[f] += imp[f] / sum;
    }
    if (trees_with_splits == 0) {
        // Degenerate forest (e.g. pure training data): fall back to uniform so
        // the sum-to-one contract holds.
        return std::vector<double>(d, d ? 1.0 / static_cast<double>(d) : 0.0);
    }
    double grand = 0.0;
    for (const double v : total) grand += v;
    for (double& v : total) v /= grand;
    return total;
}

}  // namespace auditkit
