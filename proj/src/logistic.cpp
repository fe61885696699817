#include <algorithm>

#include "auditkit/error.hpp"
#include "auditkit/models.hpp"
#include "glm_internal.hpp"

namespace auditkit {

FittedLogistic fit_logistic(const Dataset& train, int max_iter, double tol) {
    const std::size_t ones = static_cast<std::size_t>(std::count(train.y.begin(), train.y.end(), 1));
    const std::size_t zeros = train.y.size() - ones;
    if (ones < 2 || zeros < 2) fail("OneClassOnly", "need at least 2 rows per class");

    const auto std_izer = detail::Standardizer::fit(train.X);
    const Eigen::MatrixXd D = std_izer.design(train.X);
    const auto p = static_cast<Eigen::Index>(train.n_features()) + 1;
    const Eigen::VectorXd zero_mean = Eigen::VectorXd::Zero(p);
    const Eigen::VectorXd zero_prec = Eigen::VectorXd::Zero(p);

    const auto fit = detail::irls_logistic(D, train.y, max_iter, tol, zero_mean, zero_prec);
    if (!fit.converged) {
        fail("DidNotConverge", "IRLS did not converge in " + std::to_string(fit.iterations) + " iterations");
    }

    const Eigen::MatrixXd A = std_izer.back_transform();
    const Eigen::VectorXd beta_orig = A * fit.beta;
    const Eigen::MatrixXd cov_orig = A * fit.cov * A.transpose();

    FittedLogistic model;
    model.feature_names = train.schema.feature_names;
    model.coefficients = detail::to_estimates(beta_orig, cov_orig, model.feature_names, "");
    model.summary.iterations = fit.iterations;
    model.summary.converged = true;
    return model;
}

}  // namespace auditkit
