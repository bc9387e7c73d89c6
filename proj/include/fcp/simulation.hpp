#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fcp/detector.hpp"

namespace fcp {

enum class Design { Iid, Ar1 };

std::string_view to_string(Design design) noexcept;
Design parse_design(std::string_view text);

struct Alternative {
    enum class Kind { None, Scaled, Spiked };
    Kind kind = Kind::None;
    double delta = 0.5;  // only used by Scaled

    static Alternative none() { return {Kind::None, 0.5}; }
    static Alternative scaled(double delta) { return {Kind::Scaled, delta}; }
    static Alternative spiked() { return {Kind::Spiked, 0.5}; }

    /// "none", "scaled:<delta>" or "spiked".
    std::string label() const;
    /// Row label of the rejection table: "H", "delta=<delta>" or "spike".
    std::string setting() const;
};

Alternative parse_alternative(std::string_view text);

struct DgpConfig {
    std::size_t n = 300;
    std::size_t grid_size = 101;
    Design design = Design::Iid;
    Alternative alternative = Alternative::none();
    double change_fraction = 0.5;
    std::size_t basis_size = 12;  // D
    double ar_coef = 0.8;
    double sigma = 4.0;           // AR innovation scale, sigma_l = sigma / l
    double iid_coef_sd = 2.0;     // IID regressor coefficients ~ N(0, 4)
    std::size_t burn_in = 200;
    std::uint64_t seed = 0;
};

void validate(const DgpConfig& config);

/// Low-frequency regressor basis: sin(2 pi k t), cos(2 pi k t) for l = 2k-1, 2k (l is 1-based).
double regressor_basis(std::size_t l, double t);
/// High-frequency error basis: sin(12 pi k t), cos(12 pi k t) for l = 2k-1, 2k.
double error_basis(std::size_t l, double t);

/// 9 exp(-100 (t - 0.5)^2)
double mean_function(double t);
/// gamma_0(t) = t^2 (3 - 2 t^3)
double null_slope(double t);
/// alpha_0(t) = (1 - t)^2 + (3 - 2 (1 - t))
double null_intercept(double t);
/// 0.5 exp(-0.5 ((t - 0.5) / 0.02)^2)
double spike(double t);
/// Post-change slope for the given alternative.
double post_change_slope(const Alternative& alternative, double t);

struct GeneratedDataset {
    PairedFunctionalSample sample;
    Matrix errors;              // eps_i(t_j)
    std::size_t change_index;   // k* = floor(change_fraction n); curves i >= k* (1-based) are post-change
    bool has_change;
};

/// Deterministic in the config, including the seed.
GeneratedDataset generate_dataset(const DgpConfig& config);

/// AR(1) regressor coefficient streams F_{i,l} after burn-in, n x D.
Matrix generate_ar_coefficients(const DgpConfig& config);

struct ReplicationOutcome {
    std::vector<TestResult> results;
    std::size_t true_change_index = 0;
};

/**
 * Simulates `replications` datasets from `dgp` and tests each one.
 *
 * Replication r uses seed derive_seed(base_seed, r); the dataset and the
 * Monte Carlo draws get independent sub-streams of it. Outcomes are ordered by r.
 */
std::vector<ReplicationOutcome> simulate_replications(const DgpConfig& dgp, const TestConfig& test,
                                                      std::size_t replications, std::uint64_t base_seed,
                                                      unsigned threads);

struct StudyCell {
    std::size_t n = 0;
    Design design = Design::Iid;
    Alternative alternative;
    double rejection_rate_sup = 0.0;
    double rejection_rate_l2 = 0.0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

struct StudyConfig {
    std::vector<DgpConfig> cells;
    TestConfig test;
    std::size_t replications = 1000;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
};

/// n in {100, 300} with 300 replications, R = 100.
StudyConfig table1_desk_preset();
/// n in {100, 300, 500, 1000} with 1000 replications, R = 100.
StudyConfig table1_full_preset();
/// Cells laid out like the rejection table: for each n, settings H / scaled / spike, IID then AR(1).
std::vector<DgpConfig> table1_cells(const std::vector<std::size_t>& sizes);

using CellCallback = std::function<void(std::size_t cell_index, const StudyCell& cell)>;

/// Runs every cell in order; `on_cell` fires as soon as a cell completes.
std::vector<StudyCell> run_study(const StudyConfig& config, const CellCallback& on_cell = {});

}  // namespace fcp
