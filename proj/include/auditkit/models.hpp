#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "auditkit/dataset.hpp"

namespace auditkit {

struct ParamEstimate {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
};

struct TrainingSummary {
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

struct FittedLogistic {
    std::vector<ParamEstimate> coefficients;  // [0] intercept, then one per feature
    std::vector<std::string> feature_names;
    TrainingSummary summary;
};

struct MlogrmHyper {
    double mu_alpha = 0.0;
    double sigma_alpha = 0.0;
    std::vector<double> mu_beta;
    std::vector<double> sigma_beta;
};

// Random intercept and slope multilevel logistic model: one coefficient set
// per group, tied together by shared normal hyper-distributions.
struct FittedMlogrm {
    std::vector<std::vector<ParamEstimate>> group_coefficients;  // by encoded group, [0] intercept
    std::vector<std::string> group_names;
    MlogrmHyper hyper;
    std::vector<std::string> feature_names;
    TrainingSummary summary;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double leaf_fraction = 0.0;       // class-1 fraction of the training subsample
    std::size_t sample_count = 0;
    double impurity_decrease = 0.0;   // Gini gain at this node (unweighted)
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> row) const {
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
            i = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(i)].leaf_fraction;
    }
};

struct FittedForest {
    std::vector<DecisionTree> trees;
    std::size_t features_per_split = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
};

struct ForestConfig {
    std::size_t n_trees = 200;
    int max_depth = 0;  // 0 = unbounded
    std::size_t min_leaf = 1;
    std::uint64_t seed = 0;
};

// Uniform contract consumed by the KPI modules: probability prediction,
// optional parameter estimates, optional intrinsic attributions.
class Model {
public:
    enum class Kind { logistic, mlogrm, random_forest };

    Model() = default;
    explicit Model(FittedLogistic m) : impl_(std::move(m)) {}
    explicit Model(FittedMlogrm m) : impl_(std::move(m)) {}
    explicit Model(FittedForest m) : impl_(std::move(m)) {}

    Kind kind() const { return static_cast<Kind>(impl_.index()); }
    bool parametric() const { return kind() != Kind::random_forest; }

    const std::vector<std::string>& feature_names() const;

    // Linear predictor in log-odds space; parametric models only. group -1
    // routes through the hyper-means for MLogRM.
    double linear_predictor(std::span<const double> row, int group = -1) const;

    double predict_one(std::span<const double> row, int group = -1) const;
    std::vector<double> predict_proba(const Matrix& X, const std::vector<int>* groups = nullptr) const;
    std::vector<double> predict_proba(const Dataset& d) const;

    // Flattened estimates; nullopt for forests (no model parameters).
    std::optional<std::vector<ParamEstimate>> parameters() const;

    const FittedLogistic& logistic() const { return std::get<FittedLogistic>(impl_); }
    const FittedMlogrm& mlogrm() const { return std::get<FittedMlogrm>(impl_); }
    const FittedForest& forest() const { return std::get<FittedForest>(impl_); }

private:
    std::variant<FittedLogistic, FittedMlogrm, FittedForest> impl_;
};

FittedLogistic fit_logistic(const Dataset& train, int max_iter = 100, double tol = 1e-8);
FittedMlogrm fit_mlogrm(const Dataset& train, int max_iter = 200, double tol = 1e-6);
FittedForest fit_random_forest(const Dataset& train, const ForestConfig& cfg);

// Gini-importance per feature, normalized to sum to 1.
std::vector<double> vim(const FittedForest& forest);

std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

}  // namespace auditkit
