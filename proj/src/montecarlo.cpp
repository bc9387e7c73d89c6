#include "fcp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "fcp/error.hpp"
#include "fcp/parallel.hpp"

namespace fcp {

std::string_view to_string(Norm norm) noexcept { return norm == Norm::Sup ? "sup" : "l2"; }

Vector simulate_bridge(std::size_t z_resolution, Engine& rng) {
    if (z_resolution < 2) {
        throw Error(ErrorKind::InvalidArgument, "bridge needs z_resolution >= 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto steps = static_cast<Eigen::Index>(z_resolution);
    const double step_scale = 1.0 / std::sqrt(static_cast<double>(z_resolution));

    Vector walk(steps + 1);
    walk[0] = 0.0;
    double running = 0.0;
    for (Eigen::Index k = 1; k <= steps; ++k) {
        running += normal(rng);
        walk[k] = step_scale * running;
    }
    const double end = walk[steps];
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const double z = static_cast<double>(k) / static_cast<double>(steps);
        walk[k] -= z * end;
    }
    return walk;
}

namespace {

void check_inputs(const EigenSystem& eigs, std::size_t replications, std::size_t z_resolution) {
    if (eigs.m == 0 || eigs.m > eigs.positive_count()) {
        throw Error(ErrorKind::InvalidTruncation, "truncation level m = " + std::to_string(eigs.m) +
                                                      " must be in 1.." + std::to_string(eigs.positive_count()) +
                                                      " (number of positive eigenvalues)");
    }
    if (replications == 0) {
        throw Error(ErrorKind::InvalidArgument, "Monte Carlo size must be positive");
    }
    if (z_resolution < 2) {
        throw Error(ErrorKind::InvalidArgument, "z_resolution must be at least 2");
    }
}

struct DrawRequest {
    bool sup = false;
    bool l2 = false;
};

void simulate(const EigenSystem& eigs, std::size_t replications, std::size_t z_resolution, std::uint64_t seed,
              unsigned threads, DrawRequest request, std::vector<double>* sup_out, std::vector<double>* l2_out) {
    check_inputs(eigs, replications, z_resolution);
    const auto m = static_cast<Eigen::Index>(eigs.m);
    const Vector lambda = eigs.eigenvalues.head(m);
    // Column l is sqrt(lambda_l) phi_l; a bridge row times its transpose gives the
    // limiting process over t.
    const Matrix loadings = eigs.eigenfunctions.leftCols(m) * lambda.cwiseSqrt().asDiagonal();

    if (request.sup) sup_out->assign(replications, 0.0);
    if (request.l2) l2_out->assign(replications, 0.0);

    parallel_for(replications, threads, [&](std::size_t r) {
        Engine rng = make_engine(seed, r);
        Matrix bridges(static_cast<Eigen::Index>(z_resolution) + 1, m);
        for (Eigen::Index l = 0; l < m; ++l) {
            bridges.col(l) = simulate_bridge(z_resolution, rng);
        }
        if (request.sup) {
            const Matrix process = bridges * loadings.transpose();
            (*sup_out)[r] = process.cwiseAbs().maxCoeff();
        }
        if (request.l2) {
            const Vector energy = bridges.cwiseAbs2() * lambda;
            (*l2_out)[r] = std::sqrt(energy.maxCoeff());
        }
    });
}

}  // namespace

LimitDraws draw_limit_distribution(const EigenSystem& eigs, Norm norm, std::size_t replications,
                                   std::size_t z_resolution, std::uint64_t seed, unsigned threads) {
    LimitDraws out{norm, {}, z_resolution, seed};
    if (norm == Norm::Sup) {
        simulate(eigs, replications, z_resolution, seed, threads, {true, false}, &out.draws, nullptr);
    } else {
        simulate(eigs, replications, z_resolution, seed, threads, {false, true}, nullptr, &out.draws);
    }
    return out;
}

PairedLimitDraws draw_limit_distributions(const EigenSystem& eigs, std::size_t replications,
                                          std::size_t z_resolution, std::uint64_t seed, unsigned threads) {
    PairedLimitDraws out{{Norm::Sup, {}, z_resolution, seed}, {Norm::L2, {}, z_resolution, seed}};
    simulate(eigs, replications, z_resolution, seed, threads, {true, true}, &out.sup.draws, &out.l2.draws);
    return out;
}

double critical_value(const LimitDraws& draws, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "significance level must lie in (0,1)");
    }
    if (draws.draws.empty()) {
        throw Error(ErrorKind::InvalidArgument, "no Monte Carlo draws");
    }
    const auto count = static_cast<double>(draws.draws.size());
    // Guard against (1 - rho) * R landing a rounding error above an integer.
    const double rank = std::ceil((1.0 - rho) * count - 1e-9 * count);
    const auto index = static_cast<std::size_t>(std::clamp(rank, 1.0, count)) - 1;

    std::vector<double> sorted = draws.draws;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(index), sorted.end());
    return sorted[index];
}

double p_value(const LimitDraws& draws, double stat) {
    const auto exceed = std::count_if(draws.draws.begin(), draws.draws.end(), [stat](double d) { return d >= stat; });
    return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(draws.draws.size()) + 1.0);
}

}  // namespace fcp
