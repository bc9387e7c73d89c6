// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fcp/cusum.hpp"
#include "fcp/detector.hpp"
#include "fcp/parallel.hpp"
#include "fcp/rng.hpp"
#include "fcp/simulation.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace fcp;

namespace {

constexpr std::uint64_t kSeed = 20240917;
const unsigned kThreads = default_thread_count();

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int digits = 3) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
    return buffer;
}

std::string sci(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2e", v);
    return buffer;
}

struct Rates {
    double sup = 0.0;
    double l2 = 0.0;
};

Rates rejection_rates(const std::vector<ReplicationOutcome>& outcomes) {
    Rates rates;
    for (const auto& o : outcomes) {
        rates.sup += o.results[0].reject ? 1.0 : 0.0;
        rates.l2 += o.results[1].reject ? 1.0 : 0.0;
    }
    rates.sup /= static_cast<double>(outcomes.size());
    rates.l2 /= static_cast<double>(outcomes.size());
    return rates;
}

std::vector<ReplicationOutcome> simulate(std::size_t n, Design design, Alternative alternative,
                                         std::size_t replications, std::uint64_t stream) {
    DgpConfig dgp;
    dgp.n = n;
    dgp.design = design;
    dgp.alternative = alternative;
    TestConfig test;
    test.replications = 100;
    return simulate_replications(dgp, test, replications, derive_seed(kSeed, stream), kThreads);
}

std::string rates_text(const Rates& r) { return "sup " + fmt(r.sup) + ", l2 " + fmt(r.l2); }

Verdict size_under_null() {
    const Rates r = rejection_rates(simulate(300, Design::Iid, Alternative::none(), 500, 1));
    const auto inside = [](double v) { return v >= 0.02 && v <= 0.08; };
    return {inside(r.sup) && inside(r.l2), rates_text(r) + " (need both in [0.02, 0.08])"};
}

Verdict global_power() {
    const Rates r = rejection_rates(simulate(300, Design::Iid, Alternative::scaled(0.5), 300, 2));
    return {r.sup >= 0.95 && r.l2 >= 0.95, rates_text(r) + " (need both >= 0.95)"};
}

Verdict spike_dissociation() {
    const Rates r = rejection_rates(simulate(1000, Design::Iid, Alternative::spiked(), 300, 3));
    return {r.sup >= 0.70 && r.l2 <= 0.35 && r.sup - r.l2 >= 0.3,
            rates_text(r) + " (need sup >= 0.70, l2 <= 0.35, gap >= 0.3)"};
}

Verdict ar_spike_power() {
    const Rates r = rejection_rates(simulate(500, Design::Ar1, Alternative::spiked(), 300, 4));
    return {r.sup >= 0.9 && r.sup >= r.l2, rates_text(r) + " (need sup >= 0.9 and sup >= l2)"};
}

Verdict kolmogorov_oracle() {
    EigenSystem e;
    e.grid = make_uniform_grid(11);
    e.eigenvalues = Vector::Ones(1);
    e.eigenfunctions = Matrix::Ones(11, 1);
    e.trace = 1.0;
    e.m = 1;
    const LimitDraws draws = draw_limit_distribution(e, Norm::Sup, 20000, 1000, derive_seed(kSeed, 5), kThreads);
    const double q = critical_value(draws, 0.05);
    return {std::abs(q - 1.3581) <= 0.02, "95% quantile " + fmt(q, 4) + " (need within 0.02 of 1.3581)"};
}

Verdict min_kernel_spectrum() {
    const GridPtr grid = make_uniform_grid(201);
    LongRunKernel kernel;
    kernel.grid = grid;
    kernel.c_hat.resize(201, 201);
    for (Eigen::Index s = 0; s < 201; ++s)
        for (Eigen::Index t = 0; t < 201; ++t)
            kernel.c_hat(s, t) = std::min(grid->point(static_cast<std::size_t>(s)), grid->point(static_cast<std::size_t>(t)));
    const EigenSystem e = eigendecompose(kernel);
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double truth = 4.0 / ((2.0 * k - 1.0) * (2.0 * k - 1.0) * std::numbers::pi * std::numbers::pi);
        worst = std::max(worst, std::abs(e.eigenvalues[k - 1] - truth) / truth);
    }
    return {worst <= 0.01, "largest relative error " + fmt(100.0 * worst, 4) + "% (need <= 1%)"};
}

Verdict bridge_structure() {
    std::mt19937_64 rng(derive_seed(kSeed, 7));
    std::uniform_int_distribution<std::size_t> n_dist(3, 200), t_dist(2, 101), small_n(3, 50);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    double worst_end = 0.0, worst_brute = 0.0;
    std::size_t brute_cases = 0;
    for (std::size_t c = 0; c < 1000; ++c) {
        const std::size_t n = c % 2 == 0 ? small_n(rng) : n_dist(rng);
        const auto sample = testing::random_sample(n, t_dist(rng), rng(), shift(rng));
        const ConcurrentFit fit = fit_concurrent_ols(sample);
        const CusumField field = compute_cusum_field(fit);
        const Matrix& q = field.values();
        const auto terms = (fit.centered_x.array() * fit.residuals.array()).abs();
        for (Eigen::Index j = 0; j < q.cols(); ++j) {
            const double scale = terms.col(j).sum() / std::sqrt(static_cast<double>(n));
            worst_end = std::max(worst_end, std::abs(q(q.rows() - 1, j)) / scale);
        }
        if (n <= 50) {
            ++brute_cases;
            worst_brute = std::max(worst_brute, (q - testing::brute_force_cusum(fit)).cwiseAbs().maxCoeff());
        }
    }
    return {worst_end <= 1e-8 && worst_brute <= 1e-12,
            "max |Q(1,t)|/scale " + sci(worst_end) + ", prefix vs brute force " + sci(worst_brute) + " over " + std::to_string(brute_cases) + " small cases"};
}

Verdict decision_invariance() {
    std::mt19937_64 rng(derive_seed(kSeed, 8));
    std::uniform_int_distribution<std::size_t> n_dist(20, 120), t_dist(5, 41);
    std::size_t mismatches = 0;
    TestConfig config;
    config.replications = 200;
    config.z_resolution = 200;
    for (std::size_t c = 0; c < 100; ++c) {
        const auto sample = testing::random_sample(n_dist(rng), t_dist(rng), rng());
        config.seed = rng();
        const Matrix y = (3.0 * sample.y().array() + 7.0).matrix();
        const Matrix x = (-2.0 * sample.x().array() + 1.0).matrix();
        const auto base = run_test(sample, config);
        const std::vector<PairedFunctionalSample> mapped{{sample.grid_ptr(), sample.x(), y},
                                                         {sample.grid_ptr(), x, sample.y()},
                                                         {sample.grid_ptr(), x, y}};
        bool same = true;
        for (const auto& m : mapped) {
            const auto r = run_test(m, config);
            for (std::size_t k = 0; k < base.size(); ++k) {
                same = same && r[k].reject == base[k].reject && r[k].p_value == base[k].p_value &&
                       r[k].change_index == base[k].change_index;
            }
        }
        mismatches += same ? 0 : 1;
    }
    return {mismatches == 0, std::to_string(mismatches) + " of 100 cases changed reject, p_value or change_index"};
}

Verdict change_localization() {
    const auto outcomes = simulate(500, Design::Iid, Alternative::scaled(0.5), 200, 9);
    std::string detail;
    bool pass = true;
    for (std::size_t k = 0; k < 2; ++k) {
        std::size_t rejections = 0, located = 0;
        for (const auto& o : outcomes) {
            const TestResult& r = o.results[k];
            if (!r.reject) continue;
            ++rejections;
            located += (r.change_fraction >= 0.4 && r.change_fraction <= 0.6) ? 1 : 0;
        }
        const double share = rejections ? static_cast<double>(located) / static_cast<double>(rejections) : 0.0;
        pass = pass && rejections > 0 && share >= 0.9;
        detail += std::string(k ? ", " : "") + std::string(to_string(outcomes[0].results[k].norm)) + " " +
                  fmt(share) + " of " + std::to_string(rejections) + " rejections";
    }
    return {pass, detail + " (need >= 0.90 within [0.4, 0.6])"};
}

double median_sup_statistic(std::size_t n, std::uint64_t stream) {
    std::vector<double> stats(200);
    parallel_for(stats.size(), kThreads, [&](std::size_t r) {
        DgpConfig dgp;
        dgp.n = n;
        dgp.alternative = Alternative::scaled(0.5);
        dgp.seed = derive_seed(derive_seed(kSeed, stream), r);
        const auto data = generate_dataset(dgp);
        stats[r] = compute_statistics(compute_cusum_field(fit_concurrent_ols(data.sample))).stat_sup;
    });
    std::sort(stats.begin(), stats.end());
    return 0.5 * (stats[99] + stats[100]);
}

Verdict sqrt_n_drift() {
    const double small = median_sup_statistic(200, 10);
    const double large = median_sup_statistic(800, 11);
    const double ratio = large / small;
    return {ratio >= 1.6 && ratio <= 2.4, "median ratio " + fmt(ratio) + " (need in [1.6, 2.4])"};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        files[fs::relative(entry.path(), dir).string()] = buffer.str();
    }
    return files;
}

Verdict cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / "fcp_acceptance_cli";
    const auto p = [&](const char* name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--n", "120", "--alternative", "spiked", "--design", "ar1", "-T", "41", "--seed", "17",
         "--out-dir", dir.string(), "--prefix", "sim"},
        {"test", p("sim_x.csv"), p("sim_y.csv"), "--reps", "300", "--seed", "5", "--trim-head", "0.1", "--out",
         p("test.json"), "--emit-cusum", p("cusum.csv"), "--emit-spectrum", p("spectrum.json")},
        {"quantile", "--x", p("sim_x.csv"), "--y", p("sim_y.csv"), "--alpha", "0.1,0.05", "--reps", "300", "--seed",
         "5", "--out", p("quantile.json"), "--emit-spectrum", p("quantile_spectrum.json")},
        {"quantile", "--eigensystem", p("spectrum.json"), "--reps", "300", "--seed", "5", "--out",
         p("quantile_stored.json")},
        {"study", "--n", "60", "--replications", "3", "--reps", "30", "--grid-size", "31", "--seed", "2",
         "--out-dir", p("study")},
    };
    std::vector<std::map<std::string, std::string>> runs;
    for (int pass = 0; pass < 2; ++pass) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        for (const auto& args : commands) {
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) {
                return {false, args.front() + " failed: " + err.str()};
            }
        }
        runs.push_back(snapshot(dir));
    }
    std::size_t differing = 0;
    for (const auto& [name, contents] : runs[0]) {
        const auto other = runs[1].find(name);
        differing += (other == runs[1].end() || other->second != contents) ? 1 : 0;
    }
    const bool pass = differing == 0 && runs[0].size() == runs[1].size();
    fs::remove_all(dir);
    return {pass, std::to_string(runs[0].size()) + " files from " + std::to_string(commands.size()) +
                      " commands, " + std::to_string(differing) + " differ between runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"size under the null, IID n=300", size_under_null},
        {"power against a global change, IID n=300", global_power},
        {"sup/L2 dissociation on spikes, IID n=1000", spike_dissociation},
        {"spike power ordering, AR(1) n=500", ar_spike_power},
        {"Kolmogorov quantile oracle", kolmogorov_oracle},
        {"min-kernel spectrum oracle", min_kernel_spectrum},
        {"CUSUM bridge structure", bridge_structure},
        {"decision invariance under affine maps", decision_invariance},
        {"change localization, n=500", change_localization},
        {"sqrt(n) drift of the sup statistic", sqrt_n_drift},
        {"CLI determinism", cli_determinism},
    };
    std::size_t failed = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[c].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += v.pass ? 0 : 1;
        std::printf("criterion %2zu %s: %s: %s [%.1f s]\n", c + 1, v.pass ? "PASS" : "FAIL", criteria[c].first.c_str(),
                    v.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
