#pragma once

#include <cstddef>
#include <string_view>

#include "fcp/regression.hpp"

namespace fcp {

/// Z_i(t_j) = (X_i(t_j) - mu_x(t_j)) * eps_i(t_j), rows are curves.
struct ScoreMatrix {
    GridPtr grid;
    Matrix values;  // n x T

    std::size_t n() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

enum class WeightWindow { QuadraticSpectral, Bartlett };

std::string_view to_string(WeightWindow window) noexcept;
WeightWindow parse_weight_window(std::string_view text);

/// Long-run covariance kernel C(t_j, t_k) on the score grid.
struct LongRunKernel {
    GridPtr grid;
    Matrix c_hat;  // T x T, symmetric
    double bandwidth_h = 1.0;
    std::size_t max_lag = 0;
    WeightWindow window = WeightWindow::QuadraticSpectral;
};

ScoreMatrix compute_scores(const ConcurrentFit& fit);

/// Quadratic-Spectral lag window; w(0) = 1, symmetric, unbounded support.
double qs_weight(double x) noexcept;

/// Bartlett lag window max(0, 1 - |x|).
double bartlett_weight(double x) noexcept;

double lag_weight(WeightWindow window, double x) noexcept;

/// ceil(n^{1/4})
double default_bandwidth(std::size_t n);

/// min(n - 1, ceil(3h))
std::size_t default_max_lag(std::size_t n, double bandwidth);

/**
 * Lag-window estimate C = c_0 + sum_{l=1}^{max_lag} w(l/h) (c_l + c_l^T), where
 * c_l(s,t) = n^{-1} sum_{k=1}^{n-l} Z_k(s) Z_{k+l}(t).
 *
 * The result is symmetric by construction but not necessarily positive
 * semidefinite. Throws InvalidBandwidth for h <= 0 and InvalidArgument when
 * max_lag >= n.
 */
LongRunKernel estimate_longrun_kernel(const ScoreMatrix& scores, double bandwidth, std::size_t max_lag,
                                      WeightWindow window = WeightWindow::QuadraticSpectral);

}  // namespace fcp
