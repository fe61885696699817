#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "auditkit/dataset.hpp"
#include "auditkit/models.hpp"

namespace auditkit {

// Variance inflation factors. Each feature is regressed on the remaining
// features without an intercept and VIF_j = 1 / (1 - R^2_j) with the
// uncentered R^2, the convention the audit benchmarks were produced with.
// Exact collinearity yields the +inf sentinel.
std::vector<double> vif(const Matrix& X);

constexpr double kVifInfinite = std::numeric_limits<double>::infinity();

// Pearson residuals (y - p) / sqrt(p (1 - p)) of a parametric classifier.
std::vector<double> pearson_residuals(const Model& model, const Dataset& d);

// Shapiro-Wilk p-value of the model's Pearson residuals. Samples above 5000
// rows are subsampled deterministically. Parametric models only.
double swt_residuals(const Model& model, const Dataset& d);

// Breusch-Pagan p-value: squared Pearson residuals regressed on the model
// features plus intercept, LM = n R^2 against chi-square(d_features).
double bpt_residuals(const Model& model, const Dataset& d);

// Probability that a random positive outranks a random negative, ties 1/2.
double auc_roc(std::span<const int> y, std::span<const double> scores);

double f1_score(std::span<const int> y, std::span<const int> y_hat);

struct SensitivityConfig {
    int samples_per_parameter = 100;
};

// First-order sensitivity index of one parameter: variance of the predicted
// probability at the mean test row while the parameter sweeps its +-1 SE
// interval, over the variance of predictions across the test rows.
// Throws AuditError("ZeroOutputVariance") when the denominator vanishes.
double sobol_first_order(const Model& model, std::span<const ParamEstimate> params, std::size_t j,
                         std::span<const double> x_mean, double denominator, int group,
                         const SensitivityConfig& cfg);

// Sum of first-order indices per MLM-group (single entry "all" for a plain
// logistic model). Group entries whose prediction variance vanishes are
// reported under details by the caller.
std::map<std::string, double> tsvr(const Model& model, const Dataset& test, const SensitivityConfig& cfg);

// Near-duplicate pairs straddling the inflection point, per group when the
// dataset carries groups (key "all" otherwise).
std::map<std::string, int> csvp(const Model& model, const Dataset& test, double band_halfwidth = 0.01,
                                double delta = 0.1);

}  // namespace auditkit
