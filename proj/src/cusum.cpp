#include "fcp/cusum.hpp"

#include <cmath>

#include "fcp/error.hpp"

namespace fcp {

CusumField::CusumField(GridPtr grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_ || static_cast<std::size_t>(values_.cols()) != grid_->size()) {
        throw Error(ErrorKind::InvalidArgument, "cusum field width does not match grid size");
    }
    if (values_.rows() < 2) {
        throw Error(ErrorKind::InvalidArgument, "cusum field needs rows 0..n with n >= 1");
    }
}

CusumField compute_cusum_field(const ConcurrentFit& fit) {
    const auto n = fit.residuals.rows();
    const auto size = fit.residuals.cols();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    Matrix values = Matrix::Zero(n + 1, size);
    for (Eigen::Index j = 0; j < size; ++j) {
        double running = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            running += fit.centered_x(i, j) * fit.residuals(i, j);
            values(i + 1, j) = scale * running;
        }
    }
    return {fit.grid, std::move(values)};
}

CusumStatistics compute_statistics(const CusumField& field) {
    const Matrix& values = field.values();
    const auto weights = field.grid().weight_vector();

    CusumStatistics stats;
    for (Eigen::Index i = 1; i < values.rows(); ++i) {
        const auto row = values.row(i);
        const double row_sup = row.cwiseAbs().maxCoeff();
        const double row_l2 = std::sqrt((row.array().square() * weights.transpose().array()).sum());
        if (row_sup > stats.stat_sup) {
            stats.stat_sup = row_sup;
            stats.k_sup = static_cast<std::size_t>(i);
        }
        if (row_l2 > stats.stat_l2) {
            stats.stat_l2 = row_l2;
            stats.k_l2 = static_cast<std::size_t>(i);
        }
    }
    return stats;
}

}  // namespace fcp
