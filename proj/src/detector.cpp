#include "fcp/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcp/error.hpp"

namespace fcp {

std::string_view to_string(NormSelection norms) noexcept {
    switch (norms) {
        case NormSelection::Sup: return "sup";
        case NormSelection::L2: return "l2";
        case NormSelection::Both: return "both";
    }
    return "both";
}

NormSelection parse_norm_selection(std::string_view text) {
    if (text == "sup") return NormSelection::Sup;
    if (text == "l2" || text == "L2") return NormSelection::L2;
    if (text == "both") return NormSelection::Both;
    throw Error(ErrorKind::InvalidArgument, "unknown norm '" + std::string(text) + "' (expected sup, l2 or both)");
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw e.at_stage(name);
    }
}

void validate(const TestConfig& config) {
    if (!(config.rho > 0.0 && config.rho < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "significance level must lie in (0,1)");
    }
    if (config.replications == 0) {
        throw Error(ErrorKind::InvalidArgument, "Monte Carlo size must be positive");
    }
    if (!(config.truncation_fraction > 0.0 && config.truncation_fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "truncation fraction must lie in (0,1)");
    }
    if (config.z_resolution < 2) {
        throw Error(ErrorKind::InvalidArgument, "z_resolution must be at least 2");
    }
}

TestResult make_result(Norm norm, double statistic, std::size_t change_index, const LimitDraws& draws,
                       const TestConfig& config, const EigenSystem& spectrum, const TruncationChoice& choice,
                       const LongRunKernel& kernel, std::size_t n) {
    TestResult result;
    result.norm = norm;
    result.statistic = statistic;
    result.critical_value = critical_value(draws, config.rho);
    result.p_value = p_value(draws, statistic);
    result.reject = statistic > result.critical_value;
    result.change_index = change_index;
    result.change_fraction = static_cast<double>(change_index) / static_cast<double>(n);
    result.m_used = spectrum.m;
    result.explained_fraction = spectrum.explained_fraction;
    result.n = n;

    auto& diag = result.diagnostics;
    diag.bandwidth = kernel.bandwidth_h;
    diag.max_lag = kernel.max_lag;
    diag.window = kernel.window;
    diag.trace = spectrum.trace;
    diag.negative_mass = spectrum.negative_mass;
    diag.truncation_target_reached = choice.target_reached;
    const auto top = std::min<Eigen::Index>(spectrum.eigenvalues.size(), std::max<Eigen::Index>(5, spectrum.m));
    diag.top_eigenvalues.assign(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + top);
    return result;
}

}  // namespace

double trace_reference_scale(const ConcurrentFit& fit) {
    // Mean square of centered X times mean square of the centered response,
    // i.e. the score variance if the model explained nothing.
    const double n = static_cast<double>(fit.n());
    const Matrix fitted = fit.centered_x * fit.gamma_hat.asDiagonal();
    const double x_ms = fit.centered_x.squaredNorm() / (n * static_cast<double>(fit.grid_size()));
    const double y_ms = (fitted + fit.residuals).squaredNorm() / (n * static_cast<double>(fit.grid_size()));
    return x_ms * y_ms;
}

TestRun run_test_detailed(const PairedFunctionalSample& sample, const TestConfig& config) {
    stage("config", [&] { validate(config); });
    const std::size_t n = sample.n();

    ConcurrentFit fit = stage("regression", [&] { return fit_concurrent_ols(sample); });
    CusumField field = stage("cusum", [&] { return compute_cusum_field(fit); });
    const CusumStatistics stats = compute_statistics(field);

    LongRunKernel kernel = stage("longrun", [&] {
        const double h = config.bandwidth.value_or(default_bandwidth(n));
        const std::size_t max_lag = config.max_lag.value_or(default_max_lag(n, h));
        return estimate_longrun_kernel(compute_scores(fit), h, max_lag, config.window);
    });

    EigenSystem spectrum = stage("spectral", [&] { return eigendecompose(kernel); });
    const TruncationChoice choice = stage("truncation", [&] {
        return choose_truncation(spectrum, config.truncation_fraction, trace_reference_scale(fit));
    });
    spectrum.m = choice.m;
    spectrum.explained_fraction = choice.explained_fraction;

    TestRun run{std::move(fit), std::move(field), stats, std::move(kernel), std::move(spectrum), {}};

    stage("montecarlo", [&] {
        const bool want_sup = config.norm != NormSelection::L2;
        const bool want_l2 = config.norm != NormSelection::Sup;
        if (want_sup && want_l2) {
            const PairedLimitDraws draws = draw_limit_distributions(run.spectrum, config.replications,
                                                                    config.z_resolution, config.seed, config.threads);
            run.results.push_back(make_result(Norm::Sup, stats.stat_sup, stats.k_sup, draws.sup, config, run.spectrum,
                                              choice, run.kernel, n));
            run.results.push_back(make_result(Norm::L2, stats.stat_l2, stats.k_l2, draws.l2, config, run.spectrum,
                                              choice, run.kernel, n));
        } else {
            const Norm norm = want_sup ? Norm::Sup : Norm::L2;
            const LimitDraws draws = draw_limit_distribution(run.spectrum, norm, config.replications,
                                                             config.z_resolution, config.seed, config.threads);
            run.results.push_back(want_sup ? make_result(norm, stats.stat_sup, stats.k_sup, draws, config,
                                                         run.spectrum, choice, run.kernel, n)
                                           : make_result(norm, stats.stat_l2, stats.k_l2, draws, config,
                                                         run.spectrum, choice, run.kernel, n));
        }
    });
    return run;
}

std::vector<TestResult> run_test(const PairedFunctionalSample& sample, const TestConfig& config) {
    return run_test_detailed(sample, config).results;
}

PairedFunctionalSample trim_sample(const PairedFunctionalSample& sample, double head_fraction, double tail_fraction) {
    if (!(head_fraction >= 0.0 && tail_fraction >= 0.0 && head_fraction <= 1.0 && tail_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "trim fractions must lie in [0,1]");
    }
    const std::size_t n = sample.n();
    const std::size_t head = floor_fraction(head_fraction, n);
    const std::size_t tail = floor_fraction(tail_fraction, n);
    if (head_fraction + tail_fraction >= 1.0 || head + tail + 3 > n) {
        throw Error(ErrorKind::TooFewCurves, "trimming " + std::to_string(head) + " + " + std::to_string(tail) +
                                                 " of " + std::to_string(n) + " curves leaves fewer than 3");
    }
    const auto keep = static_cast<Eigen::Index>(n - head - tail);
    const auto start = static_cast<Eigen::Index>(head);
    return {sample.grid_ptr(), sample.x().middleRows(start, keep), sample.y().middleRows(start, keep)};
}

}  // namespace fcp
