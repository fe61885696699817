#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace auditkit {

// Dense row-major matrix. Rows are observations, columns are features.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major, rows*cols entries

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * cols, cols);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(values.data() + i * cols, cols);
    }
};

struct OlsFit {
    std::vector<double> coefficients;  // one per column of X
    double r_squared = 0.0;            // centered R^2; 0 for a constant target
    std::vector<double> residuals;     // y - X beta, one per observation
};

// Least squares via SVD. Throws AuditError("RankDeficient") when the relative
// singular value ratio drops below 1e-10.
OlsFit solve_ols(const Matrix& X, const std::vector<double>& y);

// Minimizes sum_i w_i (y_i - x_i' beta)^2. Requires at least cols(X) strictly
// positive weights.
std::vector<double> weighted_least_squares(const Matrix& X, const std::vector<double>& y,
                                           const std::vector<double>& w);

// Pearson correlation of average ranks (ties get their mean rank). Returns 0
// when either vector is constant.
double spearman_rho(std::span<const double> a, std::span<const double> b);

double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Upper-tail probability of the chi-square distribution with df degrees of
// freedom.
double chi_square_sf(double x, int df);

double normal_cdf(double z);
double normal_quantile(double p);

struct ShapiroWilkResult {
    double w = 0.0;
    double p_value = 0.0;
};

// Shapiro-Wilk normality test, AS R94 approximation; valid for 3 <= n <= 5000.
ShapiroWilkResult shapiro_wilk(std::span<const double> x);

// Average ranks with ties resolved to the mean rank (1-based).
std::vector<double> average_ranks(std::span<const double> x);

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double mean(std::span<const double> x);
double population_variance(std::span<const double> x);

}  // namespace auditkit
