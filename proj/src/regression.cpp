#include "fcp/regression.hpp"

#include <string>

#include "fcp/error.hpp"

namespace fcp {

ConcurrentFit fit_concurrent_ols(const PairedFunctionalSample& sample) {
    const Matrix& x = sample.x();
    const Matrix& y = sample.y();
    const auto n = x.rows();
    const auto size = x.cols();
    const double var_floor = 1e-12 * static_cast<double>(n);

    ConcurrentFit fit;
    fit.grid = sample.grid_ptr();
    fit.mu_x = x.colwise().mean().transpose();
    fit.mu_y = y.colwise().mean().transpose();
    fit.centered_x = x.rowwise() - fit.mu_x.transpose();
    fit.gamma_hat.resize(size);
    fit.alpha_hat.resize(size);
    fit.residuals.resize(n, size);

    for (Eigen::Index j = 0; j < size; ++j) {
        const auto xc = fit.centered_x.col(j);
        const double sxx = xc.squaredNorm();
        if (!(sxx > var_floor)) {
            throw Error(ErrorKind::DegenerateRegressor,
                        "regressor has (near) zero variance at grid index " + std::to_string(j) + " (t = " +
                            std::to_string(sample.grid().point(static_cast<std::size_t>(j))) + ")",
                        static_cast<std::size_t>(j));
        }
        const Vector yc = y.col(j).array() - fit.mu_y[j];
        const double slope = xc.dot(yc) / sxx;
        fit.gamma_hat[j] = slope;
        fit.alpha_hat[j] = fit.mu_y[j] - slope * fit.mu_x[j];
        // Y - gamma X - alpha, evaluated on centered columns to avoid cancellation.
        fit.residuals.col(j) = yc - slope * xc;
    }
    return fit;
}

}  // namespace fcp
