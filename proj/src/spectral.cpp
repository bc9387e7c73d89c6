#include "fcp/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fcp/error.hpp"

namespace fcp {

std::size_t EigenSystem::positive_count() const noexcept {
    std::size_t count = 0;
    for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
        if (eigenvalues[l] > 0.0) {
            ++count;
        }
    }
    return count;
}

EigenSystem eigendecompose(const LongRunKernel& kernel) {
    const auto weights = kernel.grid->weight_vector();
    const Vector sqrt_w = weights.cwiseSqrt();
    const auto size = kernel.c_hat.rows();

    // M = W^{1/2} C W^{1/2}
    const Matrix weighted = sqrt_w.asDiagonal() * kernel.c_hat * sqrt_w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(weighted);
    if (solver.info() != Eigen::Success) {
        const char* reason = solver.info() == Eigen::NoConvergence ? "no convergence" : "numerical issue";
        throw Error(ErrorKind::EigenFailure, std::string("symmetric eigensolver failed: ") + reason);
    }

    EigenSystem out;
    out.grid = kernel.grid;
    out.eigenvalues.resize(size);
    out.eigenfunctions.resize(size, size);
    out.trace = weights.dot(kernel.c_hat.diagonal());

    // Solver returns ascending order.
    for (Eigen::Index l = 0; l < size; ++l) {
        const Eigen::Index src = size - 1 - l;
        const double lambda = solver.eigenvalues()[src];
        if (lambda < 0.0) {
            out.negative_mass -= lambda;
        }
        out.eigenvalues[l] = std::max(lambda, 0.0);

        Vector phi = solver.eigenvectors().col(src);
        for (Eigen::Index j = 0; j < size; ++j) {
            phi[j] = sqrt_w[j] > 0.0 ? phi[j] / sqrt_w[j] : 0.0;
        }
        Eigen::Index peak = 0;
        phi.cwiseAbs().maxCoeff(&peak);
        if (phi[peak] < 0.0) {
            phi = -phi;
        }
        out.eigenfunctions.col(l) = phi;
    }
    return out;
}

TruncationChoice choose_truncation(const EigenSystem& eigs, double fraction, double reference_scale) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "truncation fraction must lie in (0,1), got " + std::to_string(fraction));
    }
    if (!(eigs.trace > 1e-14 * reference_scale)) {
        throw Error(ErrorKind::ZeroTrace, "long-run kernel trace " + std::to_string(eigs.trace) +
                                              " is numerically zero; residual scores carry no variation");
    }
    const double target = fraction * eigs.trace;
    double cumulative = 0.0;
    for (Eigen::Index l = 0; l < eigs.eigenvalues.size(); ++l) {
        cumulative += eigs.eigenvalues[l];
        if (cumulative >= target) {
            return {static_cast<std::size_t>(l + 1), cumulative / eigs.trace, true};
        }
    }
    const std::size_t positive = eigs.positive_count();
    return {positive, cumulative / eigs.trace, false};
}

EigenSystem truncate(EigenSystem eigs, double fraction, double reference_scale) {
    const TruncationChoice choice = choose_truncation(eigs, fraction, reference_scale);
    eigs.m = choice.m;
    eigs.explained_fraction = choice.explained_fraction;
    return eigs;
}

Matrix reconstruct_kernel(const EigenSystem& eigs, std::size_t terms) {
    const auto k = static_cast<Eigen::Index>(terms);
    const auto phi = eigs.eigenfunctions.leftCols(k);
    return phi * eigs.eigenvalues.head(k).asDiagonal() * phi.transpose();
}

}  // namespace fcp
