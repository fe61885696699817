#include "auditkit/models.hpp"

#include "auditkit/error.hpp"

namespace auditkit {

const std::vector<std::string>& Model::feature_names() const {
    switch (kind()) {
        case Kind::logistic: return logistic().feature_names;
        case Kind::mlogrm: return mlogrm().feature_names;
        default: return forest().feature_names;
    }
}

double Model::linear_predictor(std::span<const double> row, int group) const {
    if (kind() == Kind::logistic) {
        const auto& coef = logistic().coefficients;
        double eta = coef[0].value;
        for (std::size_t j = 0; j < row.size(); ++j) eta += coef[j + 1].value * row[j];
        return eta;
    }
    if (kind() == Kind::mlogrm) {
        const auto& m = mlogrm();
        if (group >= 0 && static_cast<std::size_t>(group) < m.group_coefficients.size()) {
            const auto& coef = m.group_coefficients[static_cast<std::size_t>(group)];
            double eta = coef[0].value;
            for (std::size_t j = 0; j < row.size(); ++j) eta += coef[j + 1].value * row[j];
            return eta;
        }
        // Unseen group: route through the hyper-means.
        double eta = m.hyper.mu_alpha;
        for (std::size_t j = 0; j < row.size(); ++j) eta += m.hyper.mu_beta[j] * row[j];
        return eta;
    }
    fail("TrainingError", "linear_predictor is undefined for random forests");
}

double Model::predict_one(std::span<const double> row, int group) const {
    if (kind() == Kind::random_forest) {
        const auto& trees = forest().trees;
        double acc = 0.0;
        for (const DecisionTree& t : trees) acc += t.predict(row);
        return acc / static_cast<double>(trees.size());
    }
    return sigmoid(linear_predictor(row, group));
}

std::vector<double> Model::predict_proba(const Matrix& X, const std::vector<int>* groups) const {
    if (X.cols != feature_names().size()) {
        fail("LengthMismatch", "input column count does not match training features");
    }
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const int g = groups ? (*groups)[i] : -1;
        out[i] = predict_one(X.row(i), g);
    }
    return out;
}

std::vector<double> Model::predict_proba(const Dataset& d) const {
    return predict_proba(d.X, d.groups ? &*d.groups : nullptr);
}

std::optional<std::vector<ParamEstimate>> Model::parameters() const {
    if (kind() == Kind::logistic) return logistic().coefficients;
    if (kind() == Kind::mlogrm) {
        std::vector<ParamEstimate> flat;
        for (const auto& coefs : mlogrm().group_coefficients) {
            flat.insert(flat.end(), coefs.begin(), coefs.end());
        }
        return flat;
    }
    return std::nullopt;  // forests have no model parameters
}

}  // namespace auditkit
