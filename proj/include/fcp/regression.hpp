#pragma once

#include "fcp/grid.hpp"

namespace fcp {

/// Pointwise OLS fit of Y_i(t) = alpha(t) + gamma(t) X_i(t) + eps_i(t) over the full sample.
struct ConcurrentFit {
    GridPtr grid;
    Vector mu_x;
    Vector mu_y;
    Vector gamma_hat;
    Vector alpha_hat;
    Matrix residuals;   // n x T
    Matrix centered_x;  // n x T, X_i(t_j) - mu_x(t_j)

    std::size_t n() const noexcept { return static_cast<std::size_t>(residuals.rows()); }
    std::size_t grid_size() const noexcept { return static_cast<std::size_t>(residuals.cols()); }

    Curve slope() const { return {grid, gamma_hat}; }
    Curve intercept() const { return {grid, alpha_hat}; }
};

/**
 * Fits slope and intercept independently at every grid point.
 *
 * Column moments use a two-pass scheme (means first, then centered cross
 * products). Throws Error{DegenerateRegressor} carrying the grid index when the
 * centered sum of squares of X at some t_j is at most 1e-12 * n.
 */
ConcurrentFit fit_concurrent_ols(const PairedFunctionalSample& sample);

}  // namespace fcp
