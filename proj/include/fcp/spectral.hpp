#pragma once

#include <cstddef>

#include "fcp/longrun.hpp"

namespace fcp {

/**
 * Discretized Mercer eigenpairs of a long-run kernel.
 *
 * Eigenfunctions are orthonormal in the quadrature inner product
 * sum_j w_j phi_a(t_j) phi_b(t_j). Eigenvalues are sorted descending and
 * clipped at zero. `trace` is the quadrature integral of the kernel diagonal,
 * which can exceed the clipped eigenvalue mass when the kernel is indefinite.
 */
struct EigenSystem {
    GridPtr grid;
    Vector eigenvalues;      // descending, >= 0
    Matrix eigenfunctions;   // T x K, column l is phi_l
    double trace = 0.0;
    double negative_mass = 0.0;  // sum of |lambda| over clipped eigenvalues
    std::size_t m = 0;           // truncation level, 0 while unset
    double explained_fraction = 0.0;

    std::size_t positive_count() const noexcept;
};

EigenSystem eigendecompose(const LongRunKernel& kernel);

struct TruncationChoice {
    std::size_t m = 0;
    double explained_fraction = 0.0;
    bool target_reached = false;
};

/**
 * Smallest M whose leading eigenvalue mass reaches fraction * trace.
 *
 * If clipping makes the target unreachable, returns the number of strictly
 * positive eigenvalues with target_reached = false. Throws ZeroTrace when the
 * trace is at most 1e-14 * reference_scale.
 */
TruncationChoice choose_truncation(const EigenSystem& eigs, double fraction = 0.85, double reference_scale = 1.0);

/// Copy of `eigs` with m and explained_fraction filled in by choose_truncation.
EigenSystem truncate(EigenSystem eigs, double fraction = 0.85, double reference_scale = 1.0);

/// sum_l lambda_l phi_l(s) phi_l(t) over the first `terms` eigenpairs.
Matrix reconstruct_kernel(const EigenSystem& eigs, std::size_t terms);

}  // namespace fcp
