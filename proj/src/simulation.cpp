#include "fcp/simulation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fcp/error.hpp"
#include "fcp/parallel.hpp"
#include "fcp/rng.hpp"

namespace fcp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_number(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

double fourier(std::size_t l, double t, double base_frequency) {
    if (l == 0) {
        throw Error(ErrorKind::InvalidArgument, "basis index is 1-based");
    }
    const double k = static_cast<double>((l + 1) / 2);
    const double arg = base_frequency * k * kPi * t;
    return (l % 2 == 1) ? std::sin(arg) : std::cos(arg);
}

// Stream indices under the dataset seed.
constexpr std::uint64_t kRegressorStream = 0;
constexpr std::uint64_t kErrorStream = 1;

// Stream indices under a replication seed.
constexpr std::uint64_t kDatasetStream = 0;
constexpr std::uint64_t kMonteCarloStream = 1;

}  // namespace

std::string_view to_string(Design design) noexcept { return design == Design::Ar1 ? "ar1" : "iid"; }

Design parse_design(std::string_view text) {
    if (text == "iid") return Design::Iid;
    if (text == "ar1" || text == "ar") return Design::Ar1;
    throw Error(ErrorKind::InvalidArgument, "unknown design '" + std::string(text) + "' (expected iid or ar1)");
}

std::string Alternative::label() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Scaled: return "scaled:" + format_number(delta);
        case Kind::Spiked: return "spiked";
    }
    return "none";
}

std::string Alternative::setting() const {
    switch (kind) {
        case Kind::None: return "H";
        case Kind::Scaled: return "delta=" + format_number(delta);
        case Kind::Spiked: return "spike";
    }
    return "H";
}

Alternative parse_alternative(std::string_view text) {
    if (text == "none") return Alternative::none();
    if (text == "spiked" || text == "spike") return Alternative::spiked();
    constexpr std::string_view prefix = "scaled:";
    if (text.starts_with(prefix)) {
        const std::string number(text.substr(prefix.size()));
        std::size_t used = 0;
        double delta = 0.0;
        try {
            delta = std::stod(number, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != number.size() || number.empty() || !std::isfinite(delta)) {
            throw Error(ErrorKind::InvalidArgument, "bad delta in alternative '" + std::string(text) + "'");
        }
        return Alternative::scaled(delta);
    }
    throw Error(ErrorKind::InvalidArgument,
                "unknown alternative '" + std::string(text) + "' (expected none, scaled:<delta> or spiked)");
}

void validate(const DgpConfig& config) {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
    if (config.n < 10) fail("n must be at least 10");
    if (config.grid_size < 21) fail("grid size must be at least 21");
    if (config.basis_size < 1) fail("basis size D must be at least 1");
    if (!(config.change_fraction > 0.0 && config.change_fraction < 1.0)) fail("change fraction must lie in (0,1)");
    if (!(std::abs(config.ar_coef) < 1.0)) fail("AR coefficient must satisfy |phi| < 1");
    if (!(config.sigma > 0.0) || !(config.iid_coef_sd > 0.0)) fail("coefficient scales must be positive");
    const std::size_t k = floor_fraction(config.change_fraction, config.n);
    if (k < 1 || k >= config.n) fail("change point floor(change_fraction * n) must lie in 1..n-1");
}

double regressor_basis(std::size_t l, double t) { return fourier(l, t, 2.0); }
double error_basis(std::size_t l, double t) { return fourier(l, t, 12.0); }

double mean_function(double t) { return 9.0 * std::exp(-100.0 * (t - 0.5) * (t - 0.5)); }
double null_slope(double t) { return t * t * (3.0 - 2.0 * t * t * t); }
double null_intercept(double t) { return (1.0 - t) * (1.0 - t) + (3.0 - 2.0 * (1.0 - t)); }

double spike(double t) {
    const double u = (t - 0.5) / 0.02;
    return 0.5 * std::exp(-0.5 * u * u);
}

double post_change_slope(const Alternative& alternative, double t) {
    switch (alternative.kind) {
        case Alternative::Kind::None: return null_slope(t);
        case Alternative::Kind::Scaled: return alternative.delta * null_slope(t);
        case Alternative::Kind::Spiked: return null_slope(t) + spike(t);
    }
    return null_slope(t);
}

Matrix generate_ar_coefficients(const DgpConfig& config) {
    const auto n = static_cast<Eigen::Index>(config.n);
    const auto d = static_cast<Eigen::Index>(config.basis_size);
    Engine rng = make_engine(config.seed, kRegressorStream);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vector state = Vector::Zero(d);
    Vector scales(d);
    for (Eigen::Index l = 0; l < d; ++l) {
        scales[l] = config.sigma / static_cast<double>(l + 1);
    }
    Matrix out(n, d);
    const auto total = static_cast<Eigen::Index>(config.burn_in) + n;
    for (Eigen::Index step = 0; step < total; ++step) {
        for (Eigen::Index l = 0; l < d; ++l) {
            state[l] = config.ar_coef * state[l] + scales[l] * normal(rng);
        }
        const Eigen::Index row = step - static_cast<Eigen::Index>(config.burn_in);
        if (row >= 0) {
            out.row(row) = state.transpose();
        }
    }
    return out;
}

GeneratedDataset generate_dataset(const DgpConfig& config) {
    validate(config);
    const auto n = static_cast<Eigen::Index>(config.n);
    const auto size = static_cast<Eigen::Index>(config.grid_size);
    const auto d = static_cast<Eigen::Index>(config.basis_size);
    GridPtr grid = make_uniform_grid(config.grid_size);

    Matrix phi(d, size);
    Matrix psi(d, size);
    Vector mean(size), alpha0(size), gamma0(size), gamma1(size);
    for (Eigen::Index j = 0; j < size; ++j) {
        const double t = grid->point(static_cast<std::size_t>(j));
        for (Eigen::Index l = 0; l < d; ++l) {
            phi(l, j) = regressor_basis(static_cast<std::size_t>(l + 1), t);
            psi(l, j) = error_basis(static_cast<std::size_t>(l + 1), t);
        }
        mean[j] = mean_function(t);
        alpha0[j] = null_intercept(t);
        gamma0[j] = null_slope(t);
        gamma1[j] = post_change_slope(config.alternative, t);
    }

    Matrix coefficients(n, d);
    if (config.design == Design::Iid) {
        Engine rng = make_engine(config.seed, kRegressorStream);
        std::normal_distribution<double> normal(0.0, config.iid_coef_sd);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index l = 0; l < d; ++l) {
                coefficients(i, l) = normal(rng);
            }
        }
    } else {
        coefficients = generate_ar_coefficients(config);
    }

    Matrix error_coefficients(n, d);
    {
        Engine rng = make_engine(config.seed, kErrorStream);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index l = 0; l < d; ++l) {
                error_coefficients(i, l) = normal(rng);
            }
        }
    }

    Matrix x = coefficients * phi;
    x.rowwise() += mean.transpose();
    Matrix errors = error_coefficients * psi;

    const std::size_t change = floor_fraction(config.change_fraction, config.n);
    const bool has_change = config.alternative.kind != Alternative::Kind::None;
    Matrix y(n, size);
    for (Eigen::Index i = 0; i < n; ++i) {
        // 1-based curve index i+1 >= k* is post-change.
        const bool post = has_change && static_cast<std::size_t>(i + 1) >= change;
        const Vector& slope = post ? gamma1 : gamma0;
        y.row(i) = alpha0.transpose() + slope.cwiseProduct(x.row(i).transpose()).transpose() + errors.row(i);
    }

    return {PairedFunctionalSample(grid, std::move(x), std::move(y)), std::move(errors), change, has_change};
}

std::vector<ReplicationOutcome> simulate_replications(const DgpConfig& dgp, const TestConfig& test,
                                                      std::size_t replications, std::uint64_t base_seed,
                                                      unsigned threads) {
    validate(dgp);
    std::vector<ReplicationOutcome> outcomes(replications);
    parallel_for(replications, threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(base_seed, r);
        DgpConfig data_config = dgp;
        data_config.seed = derive_seed(rep_seed, kDatasetStream);
        TestConfig test_config = test;
        test_config.seed = derive_seed(rep_seed, kMonteCarloStream);
        test_config.threads = 1;
        try {
            const GeneratedDataset data = generate_dataset(data_config);
            outcomes[r] = {run_test(data.sample, test_config), data.change_index};
        } catch (const Error& e) {
            throw e.at_stage("replication " + std::to_string(r) + (e.stage().empty() ? "" : ", " + e.stage()));
        }
    });
    return outcomes;
}

std::vector<DgpConfig> table1_cells(const std::vector<std::size_t>& sizes) {
    std::vector<DgpConfig> cells;
    const Alternative settings[] = {Alternative::none(), Alternative::scaled(0.5), Alternative::spiked()};
    for (const std::size_t n : sizes) {
        for (const Alternative& alternative : settings) {
            for (const Design design : {Design::Iid, Design::Ar1}) {
                DgpConfig cell;
                cell.n = n;
                cell.design = design;
                cell.alternative = alternative;
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

namespace {

StudyConfig table1_preset(std::vector<std::size_t> sizes, std::size_t replications) {
    StudyConfig config;
    config.cells = table1_cells(sizes);
    config.replications = replications;
    config.test.norm = NormSelection::Both;
    config.test.rho = 0.05;
    config.test.replications = 100;
    return config;
}

}  // namespace

StudyConfig table1_desk_preset() { return table1_preset({100, 300}, 300); }
StudyConfig table1_full_preset() { return table1_preset({100, 300, 500, 1000}, 1000); }

std::vector<StudyCell> run_study(const StudyConfig& config, const CellCallback& on_cell) {
    if (config.replications == 0) {
        throw Error(ErrorKind::InvalidArgument, "study needs at least one replication per cell");
    }
    TestConfig test = config.test;
    test.norm = NormSelection::Both;

    std::vector<StudyCell> cells;
    cells.reserve(config.cells.size());
    for (std::size_t c = 0; c < config.cells.size(); ++c) {
        const DgpConfig& dgp = config.cells[c];
        const std::uint64_t cell_seed = derive_seed(config.master_seed, c);
        std::vector<ReplicationOutcome> outcomes;
        try {
            outcomes = simulate_replications(dgp, test, config.replications, cell_seed, config.threads);
        } catch (const Error& e) {
            throw e.at_stage("cell " + std::to_string(c) + ", " + e.stage());
        }

        std::size_t reject_sup = 0;
        std::size_t reject_l2 = 0;
        for (const auto& outcome : outcomes) {
            for (const auto& result : outcome.results) {
                if (!result.reject) continue;
                (result.norm == Norm::Sup ? reject_sup : reject_l2) += 1;
            }
        }
        const auto reps = static_cast<double>(config.replications);
        StudyCell cell{dgp.n,
                       dgp.design,
                       dgp.alternative,
                       static_cast<double>(reject_sup) / reps,
                       static_cast<double>(reject_l2) / reps,
                       config.replications,
                       cell_seed};
        cells.push_back(cell);
        if (on_cell) {
            on_cell(c, cell);
        }
    }
    return cells;
}

}  // namespace fcp
