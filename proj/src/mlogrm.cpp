#include <algorithm>
#include <cmath>

#include "auditkit/error.hpp"
#include "auditkit/models.hpp"
#include "glm_internal.hpp"

namespace auditkit {

namespace {

constexpr double kMinPriorVariance = 1e-6;  // keeps the penalty finite when groups coincide

}  // namespace

// MAP estimation: alternate (a) per-group penalized IRLS under the current
// N(mu, sigma^2) prior and (b) moment-matching of (mu, sigma) across groups.
FittedMlogrm fit_mlogrm(const Dataset& train, int max_iter, double tol) {
    if (!train.groups) fail("ConfigError", "fit_mlogrm requires a group column");
    const std::size_t n_groups = train.group_names.size();

    FittedMlogrm model;
    model.feature_names = train.schema.feature_names;
    model.group_names = train.group_names;
    if (n_groups == 1) {
        model.summary.warnings.push_back("SingleGroup: one MLM-group, model degenerates to plain logistic");
    }

    const auto std_izer = detail::Standardizer::fit(train.X);
    const Eigen::MatrixXd D_all = std_izer.design(train.X);
    const auto p = static_cast<Eigen::Index>(train.n_features()) + 1;

    // Per-group design slices.
    std::vector<std::vector<std::size_t>> rows_of(n_groups);
    for (std::size_t i = 0; i < train.n(); ++i) {
        rows_of[static_cast<std::size_t>((*train.groups)[i])].push_back(i);
    }
    std::vector<Eigen::MatrixXd> D_g(n_groups);
    std::vector<std::vector<int>> y_g(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (rows_of[g].empty()) fail("GroupTooSmall", "group '" + train.group_names[g] + "' has no rows");
        D_g[g].resize(static_cast<Eigen::Index>(rows_of[g].size()), p);
        for (std::size_t k = 0; k < rows_of[g].size(); ++k) {
            D_g[g].row(static_cast<Eigen::Index>(k)) = D_all.row(static_cast<Eigen::Index>(rows_of[g][k]));
        }
        y_g[g].reserve(rows_of[g].size());
        for (const std::size_t r : rows_of[g]) y_g[g].push_back(train.y[r]);
        const auto ones = std::count(y_g[g].begin(), y_g[g].end(), 1);
        if (ones == 0 || static_cast<std::size_t>(ones) == y_g[g].size()) {
            model.summary.warnings.push_back("group '" + train.group_names[g] +
                                             "' has a single class; coefficients shrink to the hyper-mean");
        }
    }

    // Initialize the hyper-mean from the pooled fit.
    Eigen::VectorXd mu;
    {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
        const auto pooled = detail::irls_logistic(D_all, train.y, max_iter, tol, zero, zero);
        mu = pooled.beta;
    }
    Eigen::VectorXd var = Eigen::VectorXd::Ones(p);

    std::vector<Eigen::VectorXd> beta(n_groups, mu);
    std::vector<Eigen::MatrixXd> cov(n_groups, Eigen::MatrixXd::Identity(p, p));

    int outer = 0;
    bool converged = false;
    for (outer = 1; outer <= max_iter; ++outer) {
        double max_change = 0.0;
        for (std::size_t g = 0; g < n_groups; ++g) {
            const Eigen::VectorXd precision = var.cwiseInverse();
            const auto fit = detail::irls_logistic(D_g[g], y_g[g], 50, tol, mu, precision);
            max_change = std::max(max_change, (fit.beta - beta[g]).lpNorm<Eigen::Infinity>());
            beta[g] = fit.beta;
            cov[g] = fit.cov;
        }

        Eigen::VectorXd new_mu = Eigen::VectorXd::Zero(p);
        for (const auto& b : beta) new_mu += b;
        new_mu /= static_cast<double>(n_groups);
        Eigen::VectorXd new_var = Eigen::VectorXd::Zero(p);
        for (const auto& b : beta) new_var += (b - new_mu).cwiseAbs2();
        new_var /= static_cast<double>(n_groups);
        new_var = new_var.cwiseMax(kMinPriorVariance);

        max_change = std::max(max_change, (new_mu - mu).lpNorm<Eigen::Infinity>());
        max_change = std::max(max_change, (new_var - var).lpNorm<Eigen::Infinity>());
        mu = new_mu;
        var = new_var;
        if (max_change < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        fail("DidNotConverge", "MLogRM alternating MAP did not converge in " + std::to_string(max_iter) +
                                   " outer iterations");
    }

    const Eigen::MatrixXd A = std_izer.back_transform();
    model.group_coefficients.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        const Eigen::VectorXd b_orig = A * beta[g];
        const Eigen::MatrixXd c_orig = A * cov[g] * A.transpose();
        model.group_coefficients[g] =
            detail::to_estimates(b_orig, c_orig, model.feature_names, "[" + train.group_names[g] + "]");
    }

    // Hyper-parameters in original units. The intercept picks up variance from
    // every slope through the de-standardization map (diagonal prior assumed).
    const Eigen::VectorXd mu_orig = A * mu;
    model.hyper.mu_alpha = mu_orig(0);
    model.hyper.mu_beta.resize(train.n_features());
    model.hyper.sigma_beta.resize(train.n_features());
    double var_alpha = var(0);
    for (std::size_t j = 0; j < train.n_features(); ++j) {
        const double scale = std_izer.sigma[j];
        model.hyper.mu_beta[j] = mu(static_cast<Eigen::Index>(j) + 1) / scale;
        model.hyper.sigma_beta[j] = std::sqrt(var(static_cast<Eigen::Index>(j) + 1)) / scale;
        const double shift = std_izer.mu[j] / scale;
        var_alpha += shift * shift * var(static_cast<Eigen::Index>(j) + 1);
    }
    model.hyper.sigma_alpha = std::sqrt(var_alpha);

    model.summary.iterations = outer;
    model.summary.converged = true;
    return model;
}

}  // namespace auditkit
