#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "auditkit/dataset.hpp"
#include "auditkit/error.hpp"
#include "auditkit/models.hpp"

namespace auditkit::detail {

struct Standardizer {
    std::vector<double> mu;
    std::vector<double> sigma;  // zero-variance columns get sigma 1

    static Standardizer fit(const Matrix& X) {
        Standardizer s;
        s.mu.resize(X.cols);
        s.sigma.resize(X.cols);
        for (std::size_t j = 0; j < X.cols; ++j) {
            std::vector<double> col(X.rows);
            for (std::size_t i = 0; i < X.rows; ++i) col[i] = X(i, j);
            s.mu[j] = mean(col);
            const double sd = std::sqrt(population_variance(col));
            s.sigma[j] = sd > 0.0 ? sd : 1.0;
        }
        return s;
    }

    // Design matrix with intercept column followed by z-scored features.
    Eigen::MatrixXd design(const Matrix& X) const {
        Eigen::MatrixXd D(X.rows, X.cols + 1);
        for (std::size_t i = 0; i < X.rows; ++i) {
            D(static_cast<Eigen::Index>(i), 0) = 1.0;
            for (std::size_t j = 0; j < X.cols; ++j) {
                D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j) + 1) =
                    (X(i, j) - mu[j]) / sigma[j];
            }
        }
        return D;
    }

    // Linear map from standardized coefficients (intercept first) to
    // original-unit coefficients: a = b0 - sum b_j mu_j / sigma_j, beta_j = b_j / sigma_j.
    Eigen::MatrixXd back_transform() const {
        const auto d = static_cast<Eigen::Index>(mu.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 1, d + 1);
        A(0, 0) = 1.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            A(0, j + 1) = -mu[static_cast<std::size_t>(j)] / sigma[static_cast<std::size_t>(j)];
            A(j + 1, j + 1) = 1.0 / sigma[static_cast<std::size_t>(j)];
        }
        return A;
    }
};

struct IrlsResult {
    Eigen::VectorXd beta;      // standardized-space coefficients
    Eigen::MatrixXd cov;       // inverse (penalized) Fisher information
    int iterations = 0;
    bool converged = false;
};

// Newton/IRLS for penalized logistic log-likelihood with Gaussian prior
// N(prior_mean, diag(prior_var)). Zero prior precision = plain maximum
// likelihood. Throws PerfectSeparation when coefficients diverge.
inline IrlsResult irls_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y, int max_iter,
                                double tol, const Eigen::VectorXd& prior_mean,
                                const Eigen::VectorXd& prior_precision) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    Eigen::VectorXd beta = prior_mean;
    if (prior_precision.isZero(0.0)) {
        beta.setZero();
        double y_mean = 0.0;
        for (const int v : y) y_mean += v;
        y_mean /= static_cast<double>(y.size());
        y_mean = std::min(std::max(y_mean, 1e-6), 1.0 - 1e-6);
        beta(0) = std::log(y_mean / (1.0 - y_mean));
    }

    IrlsResult out;
    Eigen::MatrixXd H(p, p);
    for (int iter = 1; iter <= max_iter; ++iter) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd prob(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            prob(i) = sigmoid(eta(i));
            w(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-10);
        }
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
        for (Eigen::Index i = 0; i < n; ++i) {
            grad += (static_cast<double>(y[static_cast<std::size_t>(i)]) - prob(i)) * X.row(i).transpose();
        }
        grad -= prior_precision.cwiseProduct(beta - prior_mean);
        H = X.transpose() * w.asDiagonal() * X;
        H.diagonal() += prior_precision;
        const Eigen::VectorXd delta = H.ldlt().solve(grad);
        beta += delta;
        out.iterations = iter;
        if (beta.lpNorm<Eigen::Infinity>() > 1e4) {
            fail("PerfectSeparation", "coefficients diverged; classes appear separable");
        }
        if (delta.lpNorm<Eigen::Infinity>() < tol) {
            out.converged = true;
            break;
        }
    }
    // Refresh the information matrix at the final coefficients.
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double pr = sigmoid(eta(i));
        w(i) = std::max(pr * (1.0 - pr), 1e-10);
    }
    H = X.transpose() * w.asDiagonal() * X;
    H.diagonal() += prior_precision;
    out.beta = beta;
    out.cov = H.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    return out;
}

inline std::vector<ParamEstimate> to_estimates(const Eigen::VectorXd& beta_orig,
                                               const Eigen::MatrixXd& cov_orig,
                                               const std::vector<std::string>& feature_names,
                                               const std::string& group_suffix) {
    std::vector<ParamEstimate> out;
    out.reserve(static_cast<std::size_t>(beta_orig.size()));
    for (Eigen::Index k = 0; k < beta_orig.size(); ++k) {
        ParamEstimate e;
        e.name = k == 0 ? "alpha" : "beta_" + feature_names[static_cast<std::size_t>(k - 1)];
        e.name += group_suffix;
        e.value = beta_orig(k);
        e.std_error = std::sqrt(std::max(cov_orig(k, k), 0.0));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace auditkit::detail
