#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auditkit/dataset.hpp"
#include "auditkit/models.hpp"

namespace auditkit {

struct GroupFairnessInput {
    std::vector<int> y_true;
    std::vector<int> y_pred;
    std::vector<int> sensitive;           // 1 = privileged
    std::optional<std::vector<int>> groups;
};

// |P(Y_hat=1 | S=1) - P(Y_hat=1 | S!=1)|
double statistical_parity(const GroupFairnessInput& inp);

struct DisparateImpact {
    double reported = 0.0;               // min(ratio, 1/ratio); sign-convention proof
    double unprivileged_over_privileged = 0.0;
    double privileged_over_unprivileged = 0.0;
};
DisparateImpact disparate_impact(const GroupFairnessInput& inp);

struct EqualizedOdds {
    std::map<std::string, double> per_group;  // key "all" when no groups supplied
    double mean = 0.0;
    std::vector<std::string> skipped;         // slices with an empty (S, Y) cell
};
// 1/2 (|FPR_1 - FPR_0| + |TPR_1 - TPR_0|), per group slice plus the mean over
// usable slices.
EqualizedOdds equalized_odds(const GroupFairnessInput& inp, const std::vector<std::string>& group_names);

struct SimilarPair {
    std::size_t i = 0;
    std::size_t j = 0;
    double distance = 0.0;
    bool same_group = true;
};

enum class PairMode { intra, inter };

// Pairs of individuals within epsilon in z-scored feature space (sensitive
// column itself never enters the distance). intra pairs share a group, inter
// pairs cross groups; with no group labels every pair counts as intra.
std::vector<SimilarPair> find_similar_pairs(const Dataset& d, double epsilon, PairMode mode);

// |P_i / P_j - 1| for the target class y under the audited model.
double diff_ind(const Model& model, std::span<const double> xi, int group_i,
                std::span<const double> xj, int group_j, int target_class);

}  // namespace auditkit
