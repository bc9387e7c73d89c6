#pragma once

// Test-only helpers: random inputs and brute-force oracles that share no code
// with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fcp/grid.hpp"
#include "fcp/regression.hpp"

namespace fcp::testing {

inline PairedFunctionalSample random_sample(std::size_t n, std::size_t size, std::uint64_t seed,
                                            double x_shift = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(size));
    Matrix y(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            x(i, j) = x_shift + 2.0 * normal(rng);
            y(i, j) = 1.0 + 0.7 * x(i, j) + normal(rng);
        }
    }
    return {make_uniform_grid(size), std::move(x), std::move(y)};
}

/// Q(i/n, t_j) by explicit double loop over i and k <= i.
inline Matrix brute_force_cusum(const ConcurrentFit& fit) {
    const auto n = fit.residuals.rows();
    const auto size = fit.residuals.cols();
    Matrix out = Matrix::Zero(n + 1, size);
    for (Eigen::Index i = 0; i <= n; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            double sum = 0.0;
            for (Eigen::Index k = 0; k < i; ++k) {
                sum += fit.centered_x(k, j) * fit.residuals(k, j);
            }
            out(i, j) = sum / std::sqrt(static_cast<double>(n));
        }
    }
    return out;
}

/// Slope at column j from a separate two-pass mean / covariance computation.
inline double two_pass_slope(const Matrix& x, const Matrix& y, Eigen::Index j) {
    const auto n = static_cast<double>(x.rows());
    double mx = 0.0, my = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        mx += x(i, j);
        my += y(i, j);
    }
    mx /= n;
    my /= n;
    double cov = 0.0, var = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        cov += (x(i, j) - mx) * (y(i, j) - my);
        var += (x(i, j) - mx) * (x(i, j) - mx);
    }
    return cov / var;
}

/// Kolmogorov distribution function P(sup|B| <= x) by its alternating series.
inline double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return 1.0 - 2.0 * sum;
}

/// Sup distance between the empirical CDF of `values` and `cdf`.
template <typename Cdf>
double ks_distance(std::vector<double> values, Cdf cdf) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

}  // namespace fcp::testing
