#pragma once

#include "fcp/regression.hpp"

namespace fcp {

/**
 * Weighted residual CUSUM process evaluated at the jump points z = i/n.
 *
 * Row i (0..n) holds n^{-1/2} sum_{k<=i} (X_k(t) - mu_x(t)) eps_k(t). Row 0 is the
 * empty sum and row n vanishes by the normal equations of the null fit.
 */
class CusumField {
public:
    CusumField(GridPtr grid, Matrix values);

    const SampleGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const Matrix& values() const noexcept { return values_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()) - 1; }

private:
    GridPtr grid_;
    Matrix values_;  // (n+1) x T
};

struct CusumStatistics {
    double stat_sup = 0.0;
    std::size_t k_sup = 1;  // in 1..n
    double stat_l2 = 0.0;
    std::size_t k_l2 = 1;   // in 1..n
};

CusumField compute_cusum_field(const ConcurrentFit& fit);

/// Sup and L2 functionals over rows 1..n with smallest-index maximizers.
CusumStatistics compute_statistics(const CusumField& field);

}  // namespace fcp
