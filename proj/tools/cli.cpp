#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcp/error.hpp"
#include "fcp/io.hpp"

namespace fcp::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct TestOptions {
    std::string x_file;
    std::string y_file;
    std::string norm = "both";
    double alpha = 0.05;
    std::size_t reps = kDefaultReplications;
    std::optional<std::uint64_t> seed;
    std::optional<double> bandwidth;
    std::optional<std::size_t> max_lag;
    std::string window = "qs";
    double truncation_fraction = 0.85;
    std::size_t z_resolution = kDefaultZResolution;
    double trim_head = 0.0;
    double trim_tail = 0.0;
    std::string out;
    std::string emit_cusum;
    std::string emit_spectrum;
    bool json = false;
    unsigned threads = 1;
};

struct SimulateOptions {
    std::string design = "iid";
    std::size_t n = 300;
    std::size_t grid_size = 101;
    std::string alternative = "none";
    double change_fraction = 0.5;
    std::size_t basis_size = 12;
    double ar_coef = 0.8;
    double sigma = 4.0;
    std::size_t burn_in = 200;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string prefix = "sample";
};

struct StudyOptions {
    std::string preset;
    std::vector<std::size_t> sizes;
    std::vector<std::string> designs;
    std::vector<std::string> alternatives;
    std::optional<std::size_t> replications;
    std::size_t reps = 100;
    double alpha = 0.05;
    std::size_t grid_size = 101;
    std::size_t z_resolution = kDefaultZResolution;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "study_out";
    bool timing = false;
    unsigned threads = 1;
};

struct QuantileOptions {
    std::string x_file;
    std::string y_file;
    std::string eigensystem;
    std::vector<double> alphas{0.05};
    std::string norm = "both";
    std::size_t reps = kDefaultReplications;
    std::optional<std::uint64_t> seed;
    std::optional<double> bandwidth;
    std::optional<std::size_t> max_lag;
    std::string window = "qs";
    double truncation_fraction = 0.85;
    std::size_t z_resolution = kDefaultZResolution;
    std::string out;
    std::string emit_spectrum;
    unsigned threads = 1;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("FCP_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long value = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return value;
            }
        } catch (const std::exception&) {
        }
        throw Error(ErrorKind::InvalidArgument, std::string("FCP_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json header(const char* command) { return Json{{"tool", "fcp"}, {"version", kVersion}, {"command", command}}; }

void print_result(std::ostream& out, const TestResult& r) {
    out << std::left << std::setw(4) << to_string(r.norm) << " statistic " << io::format_double(r.statistic)
        << "  critical " << io::format_double(r.critical_value) << "  p " << io::format_double(r.p_value) << "  "
        << (r.reject ? "REJECT" : "no rejection") << "\n"
        << "     change at curve " << r.change_index << " of " << r.n << " (" << io::format_double(100.0 * r.change_fraction)
        << "%)" << (r.reject ? "" : " [not significant]") << "\n";
}

// ---------------------------------------------------------------- test

void add_pipeline_flags(CLI::App& cmd, std::optional<double>& bandwidth, std::optional<std::size_t>& max_lag,
                        std::string& window, double& fraction, std::size_t& z_resolution, std::size_t& reps,
                        std::optional<std::uint64_t>& seed, unsigned& threads) {
    cmd.add_option("--reps", reps, "Monte Carlo size R")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "Random seed (falls back to FCP_SEED, then 0)");
    cmd.add_option("--bandwidth", bandwidth, "Lag-window bandwidth h (default ceil(n^(1/4)))")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--max-lag", max_lag, "Largest autocovariance lag (default min(n-1, ceil(3h)))");
    cmd.add_option("--window", window, "Lag window")->check(CLI::IsMember({"qs", "bartlett"}));
    cmd.add_option("--truncation-fraction", fraction, "Explained-variance target for m")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--z-resolution", z_resolution, "Bridge time steps")->check(CLI::Range(2, 1000000));
    cmd.add_option("--threads", threads, "Worker threads for Monte Carlo (0 = all cores)");
}

TestConfig make_test_config(const std::string& norm, double alpha, std::size_t reps, std::uint64_t seed,
                            std::optional<double> bandwidth, std::optional<std::size_t> max_lag,
                            const std::string& window, double fraction, std::size_t z_resolution, unsigned threads) {
    TestConfig config;
    config.norm = parse_norm_selection(norm);
    config.rho = alpha;
    config.replications = reps;
    config.seed = seed;
    config.bandwidth = bandwidth;
    config.max_lag = max_lag;
    config.window = parse_weight_window(window);
    config.truncation_fraction = fraction;
    config.z_resolution = z_resolution;
    config.threads = threads;
    return config;
}

int cmd_test(const TestOptions& opt, std::ostream& out) {
    PairedFunctionalSample sample = io::load_paired_sample(opt.x_file, opt.y_file);
    const std::size_t n_raw = sample.n();
    if (opt.trim_head > 0.0 || opt.trim_tail > 0.0) {
        sample = trim_sample(sample, opt.trim_head, opt.trim_tail);
    }
    const TestConfig config = make_test_config(opt.norm, opt.alpha, opt.reps, resolve_seed(opt.seed), opt.bandwidth,
                                               opt.max_lag, opt.window, opt.truncation_fraction, opt.z_resolution,
                                               opt.threads);
    const TestRun run = run_test_detailed(sample, config);

    if (!opt.emit_cusum.empty()) {
        io::write_cusum_csv(opt.emit_cusum, run.field);
    }
    if (!opt.emit_spectrum.empty()) {
        io::write_text_file(opt.emit_spectrum, dump(io::eigensystem_to_json(run.spectrum)));
    }

    Json report = header("test");
    report["input"] = Json{{"x_file", opt.x_file},
                           {"y_file", opt.y_file},
                           {"n_raw", n_raw},
                           {"n", sample.n()},
                           {"grid_size", sample.grid_size()},
                           {"trim_head", opt.trim_head},
                           {"trim_tail", opt.trim_tail}};
    report["config"] = io::to_json(config);
    Json results = Json::array();
    for (const auto& r : run.results) {
        results.push_back(io::to_json(r));
    }
    report["results"] = results;
    const std::string text = dump(report);
    if (!opt.out.empty()) {
        io::write_text_file(opt.out, text);
    }

    if (opt.json) {
        out << text;
    } else {
        out << "concurrent slope change-point test: n = " << sample.n() << ", T = " << sample.grid_size()
            << ", m = " << run.spectrum.m << " (" << io::format_double(100.0 * run.spectrum.explained_fraction)
            << "% of trace), h = " << io::format_double(run.kernel.bandwidth_h) << ", max lag = " << run.kernel.max_lag
            << "\n";
        for (const auto& r : run.results) {
            print_result(out, r);
        }
    }
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    DgpConfig config;
    config.n = opt.n;
    config.grid_size = opt.grid_size;
    config.design = parse_design(opt.design);
    config.alternative = parse_alternative(opt.alternative);
    config.change_fraction = opt.change_fraction;
    config.basis_size = opt.basis_size;
    config.ar_coef = opt.ar_coef;
    config.sigma = opt.sigma;
    config.burn_in = opt.burn_in;
    config.seed = resolve_seed(opt.seed);

    const GeneratedDataset data = generate_dataset(config);
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    const fs::path x_path = dir / (opt.prefix + "_x.csv");
    const fs::path y_path = dir / (opt.prefix + "_y.csv");
    const fs::path meta_path = dir / (opt.prefix + ".json");
    io::write_curve_csv(x_path, data.sample.x(), &data.sample.grid());
    io::write_curve_csv(y_path, data.sample.y(), &data.sample.grid());

    Json sidecar = header("simulate");
    sidecar["config"] = io::to_json(config);
    sidecar["has_change"] = data.has_change;
    sidecar["change_index"] = data.has_change ? Json(data.change_index) : Json(nullptr);
    sidecar["change_fraction"] =
        data.has_change ? Json(static_cast<double>(data.change_index) / static_cast<double>(config.n)) : Json(nullptr);
    sidecar["files"] = Json{{"x", x_path.filename().string()}, {"y", y_path.filename().string()}};
    io::write_text_file(meta_path, dump(sidecar));

    out << "wrote " << x_path.string() << ", " << y_path.string() << ", " << meta_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- study

StudyConfig make_study_config(const StudyOptions& opt) {
    StudyConfig config;
    if (opt.preset == "table1-desk") {
        config = table1_desk_preset();
    } else if (opt.preset == "table1-full") {
        config = table1_full_preset();
    } else if (!opt.preset.empty()) {
        throw Error(ErrorKind::InvalidArgument, "unknown preset '" + opt.preset + "'");
    } else {
        if (opt.sizes.empty()) {
            throw Error(ErrorKind::InvalidArgument, "study needs --preset or --n");
        }
        const std::vector<std::string> designs = opt.designs.empty() ? std::vector<std::string>{"iid", "ar1"} : opt.designs;
        const std::vector<std::string> alternatives =
            opt.alternatives.empty() ? std::vector<std::string>{"none", "scaled:0.5", "spiked"} : opt.alternatives;
        for (const std::size_t n : opt.sizes) {
            for (const auto& alternative : alternatives) {
                for (const auto& design : designs) {
                    DgpConfig cell;
                    cell.n = n;
                    cell.design = parse_design(design);
                    cell.alternative = parse_alternative(alternative);
                    config.cells.push_back(cell);
                }
            }
        }
        config.replications = 300;
        config.test.replications = 100;
    }
    if (opt.replications) {
        config.replications = *opt.replications;
    }
    config.test.replications = opt.reps;
    for (auto& cell : config.cells) {
        cell.grid_size = opt.grid_size;
    }
    config.test.rho = opt.alpha;
    config.test.z_resolution = opt.z_resolution;
    config.master_seed = resolve_seed(opt.seed);
    config.threads = opt.threads;
    return config;
}

int cmd_study(const StudyOptions& opt, std::ostream& out) {
    const StudyConfig config = make_study_config(opt);
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);

    Json manifest = header("study");
    manifest["preset"] = opt.preset.empty() ? Json(nullptr) : Json(opt.preset);
    manifest["master_seed"] = config.master_seed;
    manifest["replications"] = config.replications;
    manifest["test"] = io::to_json(config.test);
    Json cells = Json::array();
    for (std::size_t c = 0; c < config.cells.size(); ++c) {
        Json cell = io::to_json(config.cells[c]);
        cell.erase("seed");
        cell["cell_seed"] = derive_seed(config.master_seed, c);
        cells.push_back(cell);
    }
    manifest["cells"] = cells;
    manifest["completed_cells"] = 0;

    std::vector<StudyCell> done;
    auto flush = [&] {
        std::ostringstream csv;
        io::write_study_csv(csv, done);
        io::write_text_file(dir / "study.csv", csv.str());
        io::write_text_file(dir / "study.json", dump(io::study_to_json(done)));
        manifest["completed_cells"] = done.size();
        io::write_text_file(dir / "manifest.json", dump(manifest));
    };
    flush();

    const auto start = std::chrono::steady_clock::now();
    run_study(config, [&](std::size_t index, const StudyCell& cell) {
        done.push_back(cell);
        flush();
        out << "cell " << index + 1 << "/" << config.cells.size() << ": n=" << cell.n << " "
            << cell.alternative.setting() << " " << to_string(cell.design)
            << "  L2 " << io::format_double(cell.rejection_rate_l2) << "  sup "
            << io::format_double(cell.rejection_rate_sup) << "\n";
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opt.timing) {
        manifest["wall_time_seconds"] = seconds;
        flush();
    }
    out << "study finished in " << std::fixed << std::setprecision(1) << seconds << " s; tables in " << dir.string()
        << "\n";
    return 0;
}

// ---------------------------------------------------------------- quantile

int cmd_quantile(const QuantileOptions& opt, std::ostream& out) {
    const bool from_data = !opt.x_file.empty() || !opt.y_file.empty();
    if (from_data == !opt.eigensystem.empty()) {
        throw Error(ErrorKind::InvalidArgument, "give either --x and --y data files or --eigensystem");
    }
    const TestConfig config = make_test_config(opt.norm, 0.5, opt.reps, resolve_seed(opt.seed), opt.bandwidth,
                                               opt.max_lag, opt.window, opt.truncation_fraction, opt.z_resolution,
                                               opt.threads);
    EigenSystem spectrum;
    if (from_data) {
        if (opt.x_file.empty() || opt.y_file.empty()) {
            throw Error(ErrorKind::InvalidArgument, "both --x and --y are required");
        }
        const PairedFunctionalSample sample = io::load_paired_sample(opt.x_file, opt.y_file);
        const ConcurrentFit fit = fit_concurrent_ols(sample);
        const std::size_t n = sample.n();
        const double h = opt.bandwidth.value_or(default_bandwidth(n));
        const std::size_t lag = opt.max_lag.value_or(default_max_lag(n, h));
        const LongRunKernel kernel = estimate_longrun_kernel(compute_scores(fit), h, lag, config.window);
        spectrum = truncate(eigendecompose(kernel), opt.truncation_fraction, trace_reference_scale(fit));
    } else {
        spectrum = truncate(io::eigensystem_from_json(io::read_json_file(opt.eigensystem)), opt.truncation_fraction, 0.0);
    }
    if (!opt.emit_spectrum.empty()) {
        io::write_text_file(opt.emit_spectrum, dump(io::eigensystem_to_json(spectrum)));
    }

    const bool want_sup = config.norm != NormSelection::L2;
    const bool want_l2 = config.norm != NormSelection::Sup;
    std::optional<LimitDraws> sup_draws;
    std::optional<LimitDraws> l2_draws;
    if (want_sup && want_l2) {
        PairedLimitDraws both = draw_limit_distributions(spectrum, opt.reps, opt.z_resolution, config.seed, opt.threads);
        sup_draws = std::move(both.sup);
        l2_draws = std::move(both.l2);
    } else if (want_sup) {
        sup_draws = draw_limit_distribution(spectrum, Norm::Sup, opt.reps, opt.z_resolution, config.seed, opt.threads);
    } else {
        l2_draws = draw_limit_distribution(spectrum, Norm::L2, opt.reps, opt.z_resolution, config.seed, opt.threads);
    }

    Json report = header("quantile");
    report["source"] = from_data ? Json{{"x_file", opt.x_file}, {"y_file", opt.y_file}}
                                 : Json{{"eigensystem", opt.eigensystem}};
    report["replications"] = opt.reps;
    report["seed"] = config.seed;
    report["z_resolution"] = opt.z_resolution;
    report["m"] = spectrum.m;
    report["explained_fraction"] = spectrum.explained_fraction;
    report["trace"] = spectrum.trace;
    Json rows = Json::array();
    for (const double alpha : opt.alphas) {
        Json row{{"rho", alpha}};
        row["sup"] = sup_draws ? Json(critical_value(*sup_draws, alpha)) : Json(nullptr);
        row["l2"] = l2_draws ? Json(critical_value(*l2_draws, alpha)) : Json(nullptr);
        rows.push_back(row);
    }
    report["critical_values"] = rows;
    const std::string text = dump(report);
    if (!opt.out.empty()) {
        io::write_text_file(opt.out, text);
    }
    out << text;
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Change-point tests for the slope of a concurrent functional linear regression", "fcp"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    TestOptions test;
    auto* test_cmd = app.add_subcommand("test", "Run the CUSUM change-point test on X/Y curve files");
    test_cmd->add_option("x_file", test.x_file, "Regressor curves (CSV, one curve per row)")->required();
    test_cmd->add_option("y_file", test.y_file, "Response curves (CSV, same shape)")->required();
    test_cmd->add_option("--norm", test.norm, "Test statistic")->check(CLI::IsMember({"sup", "l2", "both"}));
    test_cmd->add_option("--alpha", test.alpha, "Significance level rho")->check(CLI::Range(0.0, 1.0));
    add_pipeline_flags(*test_cmd, test.bandwidth, test.max_lag, test.window, test.truncation_fraction,
                       test.z_resolution, test.reps, test.seed, test.threads);
    test_cmd->add_option("--trim-head", test.trim_head, "Fraction of leading curves to drop")->check(CLI::Range(0.0, 1.0));
    test_cmd->add_option("--trim-tail", test.trim_tail, "Fraction of trailing curves to drop")->check(CLI::Range(0.0, 1.0));
    test_cmd->add_option("--out", test.out, "Write the JSON report here");
    test_cmd->add_option("--emit-cusum", test.emit_cusum, "Write the (n+1) x T CUSUM field as CSV");
    test_cmd->add_option("--emit-spectrum", test.emit_spectrum, "Write the estimated eigensystem as JSON");
    test_cmd->add_flag("--json", test.json, "Print the JSON report instead of the summary");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic paired sample from a Fourier design");
    sim_cmd->add_option("--design", sim.design, "Regressor design")->check(CLI::IsMember({"iid", "ar1"}));
    sim_cmd->add_option("--n", sim.n, "Number of curve pairs");
    sim_cmd->add_option("--grid-size,-T", sim.grid_size, "Grid points on [0,1]");
    sim_cmd->add_option("--alternative", sim.alternative, "none | scaled:<delta> | spiked");
    sim_cmd->add_option("--change-fraction", sim.change_fraction, "Break location k* = floor(fraction n)");
    sim_cmd->add_option("--basis-size", sim.basis_size, "Fourier truncation D");
    sim_cmd->add_option("--ar-coef", sim.ar_coef, "AR(1) coefficient");
    sim_cmd->add_option("--sigma", sim.sigma, "AR(1) innovation scale");
    sim_cmd->add_option("--burn-in", sim.burn_in, "AR(1) burn-in length");
    sim_cmd->add_option("--seed", sim.seed, "Random seed (falls back to FCP_SEED, then 0)");
    sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory");
    sim_cmd->add_option("--prefix", sim.prefix, "File name prefix");

    StudyOptions study;
    auto* study_cmd = app.add_subcommand("study", "Tabulate empirical rejection rates over simulated designs");
    study_cmd->add_option("--preset", study.preset, "table1-desk or table1-full")
        ->check(CLI::IsMember({"table1-desk", "table1-full"}));
    study_cmd->add_option("--n", study.sizes, "Sample sizes")->delimiter(',');
    study_cmd->add_option("--design", study.designs, "Designs")->delimiter(',');
    study_cmd->add_option("--alternative", study.alternatives, "Alternatives")->delimiter(',');
    study_cmd->add_option("--replications", study.replications, "Simulated datasets per cell")
        ->check(CLI::PositiveNumber);
    study_cmd->add_option("--reps", study.reps, "Monte Carlo size R per test")->check(CLI::PositiveNumber);
    study_cmd->add_option("--alpha", study.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    study_cmd->add_option("--grid-size,-T", study.grid_size, "Grid points on [0,1]");
    study_cmd->add_option("--z-resolution", study.z_resolution, "Bridge time steps")->check(CLI::Range(2, 1000000));
    study_cmd->add_option("--seed", study.seed, "Master seed (falls back to FCP_SEED, then 0)");
    study_cmd->add_option("--out-dir", study.out_dir, "Output directory");
    study_cmd->add_flag("--timing", study.timing, "Record wall time in the manifest");
    study_cmd->add_option("--threads", study.threads, "Worker threads (0 = all cores)");

    QuantileOptions quant;
    auto* quant_cmd = app.add_subcommand("quantile", "Simulate critical values of the limiting distributions");
    quant_cmd->add_option("--x", quant.x_file, "Regressor curves");
    quant_cmd->add_option("--y", quant.y_file, "Response curves");
    quant_cmd->add_option("--eigensystem", quant.eigensystem, "Stored eigensystem JSON");
    quant_cmd->add_option("--alpha", quant.alphas, "Significance levels")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    quant_cmd->add_option("--norm", quant.norm, "Functional")->check(CLI::IsMember({"sup", "l2", "both"}));
    add_pipeline_flags(*quant_cmd, quant.bandwidth, quant.max_lag, quant.window, quant.truncation_fraction,
                       quant.z_resolution, quant.reps, quant.seed, quant.threads);
    quant_cmd->add_option("--out", quant.out, "Write the JSON report here");
    quant_cmd->add_option("--emit-spectrum", quant.emit_spectrum, "Write the (truncated) eigensystem as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*test_cmd) return cmd_test(test, out);
        if (*sim_cmd) return cmd_simulate(sim, out);
        if (*study_cmd) return cmd_study(study, out);
        if (*quant_cmd) return cmd_quantile(quant, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.grid_index()) {
            err << "grid index: " << *e.grid_index() << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

}  // namespace fcp::cli
