#include "auditkit/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "auditkit/error.hpp"

namespace auditkit {

namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::MatrixXd to_eigen(const Matrix& m) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m.values.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

Eigen::VectorXd svd_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0 || s(s.size() - 1) / s(0) < kRankTolerance) {
        fail("RankDeficient", "design matrix is rank deficient within tolerance 1e-10");
    }
    return svd.solve(y);
}

double poly(const double* c, int n, double x) {
    double r = c[0];
    double p = 1.0;
    for (int i = 1; i < n; ++i) {
        p *= x;
        r += c[i] * p;
    }
    return r;
}

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (const double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

OlsFit solve_ols(const Matrix& X, const std::vector<double>& y) {
    if (X.rows != y.size()) fail("LengthMismatch", "rows(X) != len(y)");
    if (X.rows <= X.cols) fail("RankDeficient", "need more observations than regressors");

    const Eigen::MatrixXd A = to_eigen(X);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd beta = svd_solve(A, b);
    const Eigen::VectorXd resid = b - A * beta;

    OlsFit fit;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.residuals.assign(resid.data(), resid.data() + resid.size());

    const double y_mean = b.mean();
    const double ss_tot = (b.array() - y_mean).square().sum();
    const double ss_res = resid.squaredNorm();
    if (ss_tot <= 0.0) {
        fit.r_squared = 0.0;
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    }
    return fit;
}

std::vector<double> weighted_least_squares(const Matrix& X, const std::vector<double>& y,
                                           const std::vector<double>& w) {
    if (X.rows != y.size() || X.rows != w.size()) fail("LengthMismatch", "rows(X), len(y), len(w) differ");
    std::size_t positive = 0;
    for (const double wi : w) {
        if (wi < 0.0) fail("LengthMismatch", "weights must be nonnegative");
        if (wi > 0.0) ++positive;
    }
    if (positive < X.cols) fail("RankDeficient", "fewer positive weights than regressors");

    Eigen::MatrixXd A = to_eigen(X);
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double s = std::sqrt(w[static_cast<std::size_t>(i)]);
        A.row(i) *= s;
        b(i) *= s;
    }
    const Eigen::VectorXd beta = svd_solve(A, b);
    return std::vector<double>(beta.data(), beta.data() + beta.size());
}

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // mean of 1-based ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) fail("LengthMismatch", "vectors differ in length");
    if (a.size() < 2) fail("LengthMismatch", "need at least two observations");

    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    const double ma = mean(ra);
    const double mb = mean(rb);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - ma;
        const double db = rb[i] - mb;
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) fail("LengthMismatch", "vectors differ in length");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu <= 0.0 || nv <= 0.0) fail("ZeroVector", "cosine similarity undefined for the zero vector");
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (p <= 0.0) return -HUGE_VAL;
    if (p >= 1.0) return HUGE_VAL;
    // Acklam's rational approximation, then one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

// Regularized incomplete gamma: series for P(a,x), continued fraction for Q(a,x).
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_sf(double x, int df) {
    if (x < 0.0 || df < 1) fail("LengthMismatch", "chi_square_sf requires x >= 0 and df >= 1");
    if (x == 0.0) return 1.0;
    const double a = 0.5 * static_cast<double>(df);
    const double t = 0.5 * x;
    double q;
    if (t < a + 1.0) {
        q = 1.0 - gamma_p_series(a, t);
    } else {
        q = gamma_q_cf(a, t);
    }
    return std::clamp(q, 0.0, 1.0);
}

ShapiroWilkResult shapiro_wilk(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3 || n > 5000) fail("SampleSizeOutOfRange", "shapiro_wilk requires 3 <= n <= 5000");

    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    if (s.front() == s.back()) fail("DegenerateSample", "all sample values are equal");

    const std::size_t half = n / 2;
    const double an = static_cast<double>(n);

    // Coefficients for the lower half (negative quantiles), AS R94.
    std::vector<double> coef(half, 0.0);
    if (n == 3) {
        coef[0] = std::numbers::sqrt2 / 2.0;
    } else {
        std::vector<double> m(half);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < half; ++i) {
            m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
        static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;
        std::size_t first_plain;
        double fac;
        if (n > 5) {
            const double a2 = poly(c2, 6, rsn) - m[1] / ssumm2;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            coef[1] = a2;
            first_plain = 2;
        } else {
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
            first_plain = 1;
        }
        coef[0] = a1;
        for (std::size_t i = first_plain; i < half; ++i) coef[i] = -m[i] / fac;
    }

    // Full antisymmetric coefficient vector: -coef for the lower half, +coef
    // mirrored for the upper half, 0 in the middle for odd n.
    std::vector<double> a_full(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        a_full[i] = -coef[i];
        a_full[n - 1 - i] = coef[i];
    }

    const double x_mean = mean(s);
    double sax = 0.0, ssa = 0.0, ssx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = s[i] - x_mean;
        sax += a_full[i] * dx;
        ssa += a_full[i] * a_full[i];
        ssx += dx * dx;
    }
    const double w = std::clamp((sax * sax) / (ssa * ssx), 0.0, 1.0);

    ShapiroWilkResult out;
    out.w = w;
    if (n == 3) {
        const double pi6 = 6.0 / std::numbers::pi;
        const double stqr = std::asin(std::sqrt(0.75));
        out.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
        return out;
    }

    double y = std::log(1.0 - w);
    double mu, sigma;
    if (n <= 11) {
        static const double g[2] = {-2.273, 0.459};
        static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
        static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = poly(g, 2, an);
        if (y >= gamma) {
            out.p_value = 1e-19;
            return out;
        }
        y = -std::log(gamma - y);
        mu = poly(c3, 4, an);
        sigma = std::exp(poly(c4, 4, an));
    } else {
        static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
        const double ln_n = std::log(an);
        mu = poly(c5, 4, ln_n);
        sigma = std::exp(poly(c6, 3, ln_n));
    }
    out.p_value = std::clamp(1.0 - normal_cdf((y - mu) / sigma), 0.0, 1.0);
    return out;
}

}  // namespace auditkit
