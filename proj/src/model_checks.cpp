#include "auditkit/model_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "auditkit/error.hpp"
#include "auditkit/numerics.hpp"
#include "auditkit/rng.hpp"

namespace auditkit {

std::vector<double> vif(const Matrix& X) {
    if (X.rows < 3) fail("LengthMismatch", "vif needs at least 3 rows");
    if (X.cols < 2) fail("LengthMismatch", "vif needs at least 2 features");

    std::vector<double> out(X.cols, kVifInfinite);
    for (std::size_t j = 0; j < X.cols; ++j) {
        Matrix others(X.rows, X.cols - 1);
        std::vector<double> target(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) {
            target[i] = X(i, j);
            std::size_t c = 0;
            for (std::size_t k = 0; k < X.cols; ++k) {
                if (k != j) others(i, c++) = X(i, k);
            }
        }
        double ss_tot = 0.0;
        for (const double v : target) ss_tot += v * v;
        if (ss_tot <= 0.0) continue;  // constant-zero column: sentinel
        try {
            const OlsFit fit = solve_ols(others, target);
            double ss_res = 0.0;
            for (const double r : fit.residuals) ss_res += r * r;
            const double r2 = 1.0 - ss_res / ss_tot;
            if (r2 >= 1.0 - 1e-12) continue;  // numerically exact collinearity
            out[j] = 1.0 / (1.0 - std::max(r2, 0.0));
        } catch (const AuditError& e) {
            if (e.code() != "RankDeficient") throw;
            // sentinel stays
        }
    }
    return out;
}

std::vector<double> pearson_residuals(const Model& model, const Dataset& d) {
    if (!model.parametric()) {
        fail("NotApplicable", "random forests have no model assumptions to test");
    }
    const std::vector<double> p = model.predict_proba(d);
    std::vector<double> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = std::clamp(p[i], 1e-12, 1.0 - 1e-12);
        r[i] = (static_cast<double>(d.y[i]) - pi) / std::sqrt(pi * (1.0 - pi));
    }
    return r;
}

namespace {

std::vector<double> subsample_if_needed(std::vector<double> v, std::size_t cap) {
    if (v.size() <= cap) return v;
    Rng rng(derive_seed(0x51c7u, "residual_subsample"));
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    std::vector<double> out(cap);
    for (std::size_t i = 0; i < cap; ++i) out[i] = v[idx[i]];
    return out;
}

}  // namespace

double swt_residuals(const Model& model, const Dataset& d) {
    const std::vector<double> r = subsample_if_needed(pearson_residuals(model, d), 5000);
    return shapiro_wilk(r).p_value;
}

double bpt_residuals(const Model& model, const Dataset& d) {
    const std::vector<double> r = pearson_residuals(model, d);
    const std::size_t n = d.n();
    const std::size_t k = d.n_features();
    Matrix design(n, k + 1);
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) design(i, j + 1) = d.X(i, j);
        target[i] = r[i] * r[i];
    }
    const OlsFit fit = solve_ols(design, target);
    const double lm = static_cast<double>(n) * fit.r_squared;
    return chi_square_sf(lm, static_cast<int>(k));
}

double auc_roc(std::span<const int> y, std::span<const double> scores) {
    if (y.size() != scores.size()) fail("LengthMismatch", "labels and scores differ in length");
    std::size_t n_pos = 0;
    for (const int v : y) n_pos += static_cast<std::size_t>(v);
    const std::size_t n_neg = y.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) fail("OneClassOnly", "auc_roc needs both classes present");

    const std::vector<double> ranks = average_ranks(scores);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1) rank_sum += ranks[i];
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double f1_score(std::span<const int> y, std::span<const int> y_hat) {
    if (y.size() != y_hat.size()) fail("LengthMismatch", "labels and predictions differ in length");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y_hat[i] == 1 && y[i] == 1) ++tp;
        if (y_hat[i] == 1 && y[i] == 0) ++fp;
        if (y_hat[i] == 0 && y[i] == 1) ++fn;
    }
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

double sobol_first_order(const Model& model, std::span<const ParamEstimate> params, std::size_t j,
                         std::span<const double> x_mean, double denominator, int /*group*/,
                         const SensitivityConfig& cfg) {
    if (!model.parametric()) fail("NotApplicable", "random forests have no model parameters");
    if (denominator < 1e-12) {
        fail("ZeroOutputVariance", "prediction variance over the test rows is zero");
    }
    if (cfg.samples_per_parameter < 2) fail("ConfigError", "samples_per_parameter must be >= 2");

    // Linear predictor at the mean test row with all parameters at their
    // estimates; sweeping parameter j shifts it by delta * (x component).
    double eta0 = params[0].value;
    for (std::size_t k = 0; k < x_mean.size(); ++k) eta0 += params[k + 1].value * x_mean[k];
    const double slope = j == 0 ? 1.0 : x_mean[j - 1];
    const double se = params[j].std_error;

    const int m = cfg.samples_per_parameter;
    std::vector<double> outputs(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        const double u = -se + 2.0 * se * static_cast<double>(t) / static_cast<double>(m - 1);
        outputs[static_cast<std::size_t>(t)] = sigmoid(eta0 + slope * u);
    }
    return population_variance(outputs) / denominator;
}

namespace {

// Mean feature vector and prediction variance over one slice of test rows.
struct SliceSummary {
    std::vector<double> x_mean;
    double pred_variance = 0.0;
};

SliceSummary summarize_slice(const Model& model, const Dataset& test,
                             const std::vector<std::size_t>& rows, int group) {
    SliceSummary s;
    s.x_mean.assign(test.n_features(), 0.0);
    std::vector<double> preds;
    preds.reserve(rows.size());
    for (const std::size_t r : rows) {
        for (std::size_t j = 0; j < test.n_features(); ++j) s.x_mean[j] += test.X(r, j);
        preds.push_back(model.predict_one(test.X.row(r), group));
    }
    for (double& v : s.x_mean) v /= static_cast<double>(rows.size());
    s.pred_variance = population_variance(preds);
    return s;
}

}  // namespace

std::map<std::string, double> tsvr(const Model& model, const Dataset& test, const SensitivityConfig& cfg) {
    if (!model.parametric()) fail("NotApplicable", "random forests have no model parameters");
    std::map<std::string, double> out;

    if (model.kind() == Model::Kind::mlogrm) {
        const auto& ml = model.mlogrm();
        for (std::size_t g = 0; g < ml.group_names.size(); ++g) {
            std::vector<std::size_t> rows;
            if (test.groups) {
                for (std::size_t i = 0; i < test.n(); ++i) {
                    if ((*test.groups)[i] == static_cast<int>(g)) rows.push_back(i);
                }
            }
            if (rows.empty()) continue;
            const SliceSummary s = summarize_slice(model, test, rows, static_cast<int>(g));
            const auto& params = ml.group_coefficients[g];
            double total = 0.0;
            for (std::size_t j = 0; j < params.size(); ++j) {
                total += sobol_first_order(model, params, j, s.x_mean, s.pred_variance,
                                           static_cast<int>(g), cfg);
            }
            out[ml.group_names[g]] = total;
        }
        return out;
    }

    std::vector<std::size_t> rows(test.n());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const SliceSummary s = summarize_slice(model, test, rows, -1);
    const auto& params = model.logistic().coefficients;
    double total = 0.0;
    for (std::size_t j = 0; j < params.size(); ++j) {
        total += sobol_first_order(model, params, j, s.x_mean, s.pred_variance, -1, cfg);
    }
    out["all"] = total;
    return out;
}

std::map<std::string, int> csvp(const Model& model, const Dataset& test, double band_halfwidth,
                                double delta) {
    if (test.n() == 0) fail("EmptyDataset", "csvp on an empty test set");
    const std::vector<double> p = model.predict_proba(test);

    std::map<std::string, std::vector<std::size_t>> slices;
    if (test.groups) {
        for (std::size_t i = 0; i < test.n(); ++i) {
            slices[test.group_names[static_cast<std::size_t>((*test.groups)[i])]].push_back(i);
        }
    } else {
        std::vector<std::size_t> all(test.n());
        std::iota(all.begin(), all.end(), std::size_t{0});
        slices["all"] = std::move(all);
    }

    std::map<std::string, int> out;
    for (const auto& [name, rows] : slices) {
        std::vector<std::size_t> band;
        for (const std::size_t r : rows) {
            if (p[r] >= 0.5 - band_halfwidth && p[r] <= 0.5 + band_halfwidth) band.push_back(r);
        }
        int count = 0;
        for (std::size_t a = 0; a < band.size(); ++a) {
            for (std::size_t b = a + 1; b < band.size(); ++b) {
                const bool class_a = p[band[a]] >= 0.5;
                const bool class_b = p[band[b]] >= 0.5;
                if (class_a == class_b) continue;
                const auto u = test.X.row(band[a]);
                const auto v = test.X.row(band[b]);
                double nu = 0.0, nv = 0.0;
                for (std::size_t k = 0; k < u.size(); ++k) {
                    nu += u[k] * u[k];
                    nv += v[k] * v[k];
                }
                if (nu <= 0.0 || nv <= 0.0) continue;  // zero vectors carry no direction
                if (cosine_similarity(u, v) > 1.0 - delta) ++count;
            }
        }
        out[name] = count;
    }
    return out;
}

}  // namespace auditkit
