#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fcp/rng.hpp"
#include "fcp/spectral.hpp"

namespace fcp {

enum class Norm { Sup, L2 };

std::string_view to_string(Norm norm) noexcept;

/// Monte Carlo draws from the truncated limiting null distribution of one functional.
struct LimitDraws {
    Norm norm = Norm::Sup;
    std::vector<double> draws;
    std::size_t z_resolution = 0;
    std::uint64_t seed = 0;

    std::size_t replications() const noexcept { return draws.size(); }
};

struct PairedLimitDraws {
    LimitDraws sup;
    LimitDraws l2;
};

inline constexpr std::size_t kDefaultZResolution = 1000;
inline constexpr std::size_t kDefaultReplications = 1000;

/**
 * Standard Brownian bridge at z_k = k / z_resolution, k = 0..z_resolution.
 *
 * Built from the random walk B(z_k) = z_resolution^{-1/2} sum_{j<=k} g_j by
 * subtracting z_k B(1); both endpoints are exactly zero.
 */
Vector simulate_bridge(std::size_t z_resolution, Engine& rng);

/**
 * Draws T^(r), r = 1..R, for the first eigs.m eigenpairs.
 *
 * Replication r uses its own engine seeded from (seed, r) and draws the m
 * bridges in eigen order, so results do not depend on the thread count.
 * Throws InvalidTruncation if m is zero or exceeds the positive eigenvalues.
 */
LimitDraws draw_limit_distribution(const EigenSystem& eigs, Norm norm, std::size_t replications,
                                   std::size_t z_resolution, std::uint64_t seed, unsigned threads = 1);

/// Both functionals evaluated on the same bridges of every replication.
PairedLimitDraws draw_limit_distributions(const EigenSystem& eigs, std::size_t replications,
                                          std::size_t z_resolution, std::uint64_t seed, unsigned threads = 1);

/// ceil((1 - rho) R)-th order statistic of the draws.
double critical_value(const LimitDraws& draws, double rho);

/// (1 + #{T^(r) >= stat}) / (R + 1)
double p_value(const LimitDraws& draws, double stat);

}  // namespace fcp
