#include "auditkit/fairness.hpp"

#include <algorithm>
#include <cmath>

#include "auditkit/error.hpp"
#include "auditkit/numerics.hpp"

namespace auditkit {

namespace {

struct Rates {
    double privileged = 0.0;
    double unprivileged = 0.0;
};

Rates positive_rates(const GroupFairnessInput& inp) {
    if (inp.y_pred.size() != inp.sensitive.size()) fail("LengthMismatch", "y_pred and sensitive differ");
    std::size_t n1 = 0, p1 = 0, n0 = 0, p0 = 0;
    for (std::size_t i = 0; i < inp.y_pred.size(); ++i) {
        if (inp.sensitive[i] == 1) {
            ++n1;
            p1 += static_cast<std::size_t>(inp.y_pred[i] == 1);
        } else {
            ++n0;
            p0 += static_cast<std::size_t>(inp.y_pred[i] == 1);
        }
    }
    if (n1 == 0 || n0 == 0) fail("EmptyGroup", "both sensitive groups must be non-empty");
    return {static_cast<double>(p1) / static_cast<double>(n1),
            static_cast<double>(p0) / static_cast<double>(n0)};
}

}  // namespace

double statistical_parity(const GroupFairnessInput& inp) {
    const Rates r = positive_rates(inp);
    return std::abs(r.privileged - r.unprivileged);
}

DisparateImpact disparate_impact(const GroupFairnessInput& inp) {
    const Rates r = positive_rates(inp);
    if (r.privileged <= 0.0 || r.unprivileged <= 0.0) {
        fail("ZeroDenominator", "a sensitive group has no positive predictions");
    }
    DisparateImpact di;
    di.unprivileged_over_privileged = r.unprivileged / r.privileged;
    di.privileged_over_unprivileged = r.privileged / r.unprivileged;
    di.reported = std::min(di.unprivileged_over_privileged, di.privileged_over_unprivileged);
    return di;
}

EqualizedOdds equalized_odds(const GroupFairnessInput& inp, const std::vector<std::string>& group_names) {
    if (inp.y_true.size() != inp.y_pred.size() || inp.y_true.size() != inp.sensitive.size()) {
        fail("LengthMismatch", "fairness input vectors differ in length");
    }

    std::map<std::string, std::vector<std::size_t>> slices;
    if (inp.groups) {
        for (std::size_t i = 0; i < inp.y_true.size(); ++i) {
            slices[group_names[static_cast<std::size_t>((*inp.groups)[i])]].push_back(i);
        }
    } else {
        std::vector<std::size_t> all(inp.y_true.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        slices["all"] = std::move(all);
    }

    EqualizedOdds out;
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& [name, rows] : slices) {
        // Confusion counts per sensitive value.
        std::size_t fp[2] = {0, 0}, tn[2] = {0, 0}, tp[2] = {0, 0}, fn[2] = {0, 0};
        for (const std::size_t r : rows) {
            const int s = inp.sensitive[r] == 1 ? 1 : 0;
            if (inp.y_true[r] == 1) {
                (inp.y_pred[r] == 1 ? tp[s] : fn[s]) += 1;
            } else {
                (inp.y_pred[r] == 1 ? fp[s] : tn[s]) += 1;
            }
        }
        bool usable = true;
        double fpr[2], tpr[2];
        for (int s = 0; s < 2 && usable; ++s) {
            const std::size_t neg = fp[s] + tn[s];
            const std::size_t pos = tp[s] + fn[s];
            if (neg == 0 || pos == 0) {
                usable = false;
                break;
            }
            fpr[s] = static_cast<double>(fp[s]) / static_cast<double>(neg);
            tpr[s] = static_cast<double>(tp[s]) / static_cast<double>(pos);
        }
        if (!usable) {
            out.skipped.push_back(name);
            continue;
        }
        const double value = 0.5 * (std::abs(fpr[1] - fpr[0]) + std::abs(tpr[1] - tpr[0]));
        out.per_group[name] = value;
        sum += value;
        ++used;
    }
    if (used == 0) fail("EmptyCell", "every group slice has an empty (S, Y) conditioning cell");
    out.mean = sum / static_cast<double>(used);
    return out;
}

std::vector<SimilarPair> find_similar_pairs(const Dataset& d, double epsilon, PairMode mode) {
    if (epsilon <= 0.0) fail("ConfigError", "epsilon must be positive");
    const std::size_t n = d.n();
    const std::size_t k = d.n_features();

    // z-scoring per feature; constant features contribute nothing.
    std::vector<double> mu(k, 0.0), sd(k, 1.0);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = d.X(i, f);
        mu[f] = mean(col);
        const double v = population_variance(col);
        sd[f] = v > 0.0 ? std::sqrt(v) : 1.0;
    }

    std::vector<SimilarPair> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same = !d.groups || (*d.groups)[i] == (*d.groups)[j];
            if (mode == PairMode::intra && !same) continue;
            if (mode == PairMode::inter && same) continue;
            double dist2 = 0.0;
            for (std::size_t f = 0; f < k; ++f) {
                const double delta = (d.X(i, f) - d.X(j, f)) / sd[f];
                dist2 += delta * delta;
                if (dist2 > epsilon * epsilon) break;
            }
            const double dist = std::sqrt(dist2);
            if (dist <= epsilon) out.push_back({i, j, dist, same});
        }
    }
    std::sort(out.begin(), out.end(), [](const SimilarPair& a, const SimilarPair& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    return out;
}

double diff_ind(const Model& model, std::span<const double> xi, int group_i,
                std::span<const double> xj, int group_j, int target_class) {
    const double pi_raw = model.predict_one(xi, group_i);
    const double pj_raw = model.predict_one(xj, group_j);
    const double pi = target_class == 1 ? pi_raw : 1.0 - pi_raw;
    const double pj = target_class == 1 ? pj_raw : 1.0 - pj_raw;
    if (pj < 1e-12) fail("ZeroDenominator", "reference individual has zero probability for the target class");
    return std::abs(pi / pj - 1.0);
}

}  // namespace auditkit
