#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fcp/cusum.hpp"
#include "fcp/montecarlo.hpp"

namespace fcp {

enum class NormSelection { Sup, L2, Both };

std::string_view to_string(NormSelection norms) noexcept;
NormSelection parse_norm_selection(std::string_view text);

struct TestConfig {
    NormSelection norm = NormSelection::Both;
    double rho = 0.05;
    std::size_t replications = kDefaultReplications;
    std::uint64_t seed = 0;
    std::optional<double> bandwidth;      // default ceil(n^{1/4})
    std::optional<std::size_t> max_lag;   // default min(n-1, ceil(3h))
    WeightWindow window = WeightWindow::QuadraticSpectral;
    double truncation_fraction = 0.85;
    std::size_t z_resolution = kDefaultZResolution;
    unsigned threads = 1;
};

struct TestDiagnostics {
    double bandwidth = 0.0;
    std::size_t max_lag = 0;
    WeightWindow window = WeightWindow::QuadraticSpectral;
    double trace = 0.0;
    double negative_mass = 0.0;
    bool truncation_target_reached = true;
    std::vector<double> top_eigenvalues;
};

struct TestResult {
    Norm norm = Norm::Sup;
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::size_t change_index = 1;   // 1..n, number of curves before the estimated break
    double change_fraction = 0.0;   // change_index / n
    std::size_t m_used = 0;
    double explained_fraction = 0.0;
    std::size_t n = 0;
    TestDiagnostics diagnostics;
};

/// Intermediate products of one pipeline run, kept for export and inspection.
struct TestRun {
    ConcurrentFit fit;
    CusumField field;
    CusumStatistics statistics;
    LongRunKernel kernel;
    EigenSystem spectrum;
    std::vector<TestResult> results;  // one per requested norm, sup first
};

/**
 * Fit, CUSUM, long-run kernel, spectrum, truncation, Monte Carlo quantiles and
 * decision, in that order. Errors are rethrown tagged with the failing stage.
 */
TestRun run_test_detailed(const PairedFunctionalSample& sample, const TestConfig& config);

std::vector<TestResult> run_test(const PairedFunctionalSample& sample, const TestConfig& config);

/// Scale used to decide whether the kernel trace is numerically zero.
double trace_reference_scale(const ConcurrentFit& fit);

/// floor(fraction * n), tolerant of products that round just below an integer.
inline std::size_t floor_fraction(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

/// Drops the first floor(head n) and last floor(tail n) curve pairs.
PairedFunctionalSample trim_sample(const PairedFunctionalSample& sample, double head_fraction, double tail_fraction);

}  // namespace fcp
