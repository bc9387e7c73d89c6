#include "fcp/longrun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fcp/error.hpp"

namespace fcp {

std::string_view to_string(WeightWindow window) noexcept {
    return window == WeightWindow::Bartlett ? "bartlett" : "qs";
}

WeightWindow parse_weight_window(std::string_view text) {
    if (text == "qs" || text == "quadratic_spectral") {
        return WeightWindow::QuadraticSpectral;
    }
    if (text == "bartlett") {
        return WeightWindow::Bartlett;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown weight window '" + std::string(text) + "'");
}

ScoreMatrix compute_scores(const ConcurrentFit& fit) {
    return {fit.grid, fit.centered_x.cwiseProduct(fit.residuals)};
}

double qs_weight(double x) noexcept {
    if (x == 0.0) {
        return 1.0;
    }
    constexpr double pi = std::numbers::pi;
    const double arg = 6.0 * pi * x / 5.0;
    if (std::abs(arg) < 1e-2) {
        // series of 3 (sin z / z - cos z) / z^2; the closed form cancels badly here
        const double z2 = arg * arg;
        return 1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0;
    }
    return 25.0 / (12.0 * pi * pi * x * x) * (std::sin(arg) / arg - std::cos(arg));
}

double bartlett_weight(double x) noexcept { return std::max(0.0, 1.0 - std::abs(x)); }

double lag_weight(WeightWindow window, double x) noexcept {
    return window == WeightWindow::Bartlett ? bartlett_weight(x) : qs_weight(x);
}

double default_bandwidth(std::size_t n) { return std::ceil(std::pow(static_cast<double>(n), 0.25)); }

std::size_t default_max_lag(std::size_t n, double bandwidth) {
    const auto lag = static_cast<std::size_t>(std::ceil(3.0 * bandwidth));
    return std::min(n - 1, lag);
}

LongRunKernel estimate_longrun_kernel(const ScoreMatrix& scores, double bandwidth, std::size_t max_lag,
                                      WeightWindow window) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw Error(ErrorKind::InvalidBandwidth, "bandwidth must be positive, got " + std::to_string(bandwidth));
    }
    const auto n = scores.values.rows();
    if (max_lag >= static_cast<std::size_t>(n)) {
        throw Error(ErrorKind::InvalidArgument,
                    "max_lag " + std::to_string(max_lag) + " must be below n = " + std::to_string(n));
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const Matrix& z = scores.values;

    Matrix c_hat = inv_n * (z.transpose() * z);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        const double w = lag_weight(window, static_cast<double>(lag) / bandwidth);
        if (w == 0.0) {
            continue;
        }
        const auto l = static_cast<Eigen::Index>(lag);
        const Matrix c_lag = inv_n * (z.topRows(n - l).transpose() * z.bottomRows(n - l));
        c_hat.noalias() += w * (c_lag + c_lag.transpose());
    }
    // z^T z is only symmetric up to rounding in the blocked product.
    c_hat = 0.5 * (c_hat + c_hat.transpose()).eval();

    return {scores.grid, std::move(c_hat), bandwidth, max_lag, window};
}

}  // namespace fcp
