#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fcp/error.hpp"
#include "fcp/simulation.hpp"

using namespace fcp;

namespace {

constexpr double kPi = std::numbers::pi;

double lag1_correlation(const Vector& v) {
    const double mean = v.mean();
    const Vector c = (v.array() - mean).matrix();
    return c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.squaredNorm();
}

}  // namespace

TEST_CASE("Fourier bases") {
    CHECK(regressor_basis(1, 0.125) == doctest::Approx(std::sin(2.0 * kPi * 0.125)));
    CHECK(regressor_basis(2, 0.125) == doctest::Approx(std::cos(2.0 * kPi * 0.125)));
    CHECK(regressor_basis(3, 0.1) == doctest::Approx(std::sin(4.0 * kPi * 0.1)));
    CHECK(regressor_basis(12, 0.3) == doctest::Approx(std::cos(12.0 * kPi * 0.3)));
    CHECK(error_basis(1, 0.25) == doctest::Approx(std::sin(3.0 * kPi)).epsilon(1e-12));
    CHECK(error_basis(2, 0.25) == doctest::Approx(-1.0));
    CHECK(error_basis(4, 0.05) == doctest::Approx(std::cos(24.0 * kPi * 0.05)));
    CHECK_THROWS_AS(regressor_basis(0, 0.5), Error);
}

TEST_CASE("model functions") {
    CHECK(mean_function(0.5) == 9.0);
    CHECK(mean_function(0.0) == doctest::Approx(1.2499149478467619e-10).epsilon(1e-12));
    CHECK(null_slope(0.0) == 0.0);
    CHECK(null_slope(1.0) == 1.0);
    CHECK(null_slope(0.5) == doctest::Approx(0.6875));
    CHECK(null_intercept(0.0) == 2.0);
    CHECK(null_intercept(1.0) == 3.0);
    CHECK(null_intercept(0.5) == doctest::Approx(2.25));
    CHECK(spike(0.5) == 0.5);
    CHECK(spike(0.6) == doctest::Approx(1.8633265860393355e-6).epsilon(1e-12));
    CHECK(post_change_slope(Alternative::scaled(0.5), 0.5) == doctest::Approx(0.34375));
    CHECK(post_change_slope(Alternative::spiked(), 0.5) == doctest::Approx(1.1875));
    CHECK(post_change_slope(Alternative::none(), 0.3) == null_slope(0.3));
}

TEST_CASE("alternative labels round-trip") {
    CHECK(Alternative::none().label() == "none");
    CHECK(Alternative::scaled(0.5).label() == "scaled:0.5");
    CHECK(Alternative::spiked().label() == "spiked");
    CHECK(Alternative::scaled(0.5).setting() == "delta=0.5");
    CHECK(Alternative::none().setting() == "H");
    CHECK(Alternative::spiked().setting() == "spike");
    CHECK(parse_alternative("scaled:0.25").delta == 0.25);
    CHECK(parse_alternative("spike").kind == Alternative::Kind::Spiked);
    CHECK(parse_alternative("none").kind == Alternative::Kind::None);
    CHECK_THROWS_AS(parse_alternative("scaled:"), Error);
    CHECK_THROWS_AS(parse_alternative("scaled:0.5x"), Error);
    CHECK_THROWS_AS(parse_alternative("ramp"), Error);
    CHECK(parse_design("ar1") == Design::Ar1);
    CHECK_THROWS_AS(parse_design("arma"), Error);
}

TEST_CASE("null data satisfy the model exactly") {
    for (Design design : {Design::Iid, Design::Ar1}) {
        DgpConfig config;
        config.n = 40;
        config.design = design;
        config.seed = 12;
        const GeneratedDataset data = generate_dataset(config);
        CHECK_FALSE(data.has_change);
        const auto& grid = data.sample.grid();
        for (Eigen::Index i = 0; i < 40; ++i) {
            for (Eigen::Index j = 0; j < 101; ++j) {
                const double t = grid.point(static_cast<std::size_t>(j));
                const double implied = data.sample.y()(i, j) - null_intercept(t) - null_slope(t) * data.sample.x()(i, j);
                CHECK(std::abs(implied - data.errors(i, j)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("change is applied from curve k* onwards") {
    DgpConfig config;
    config.n = 300;
    config.alternative = Alternative::scaled(0.5);
    config.seed = 3;
    const GeneratedDataset data = generate_dataset(config);
    CHECK(data.has_change);
    CHECK(data.change_index == 150);
    const auto& grid = data.sample.grid();
    for (Eigen::Index i = 0; i < 300; ++i) {
        const bool post = i + 1 >= 150;
        const double t = grid.point(70);
        const double slope = post ? 0.5 * null_slope(t) : null_slope(t);
        const double implied = data.sample.y()(i, 70) - null_intercept(t) - slope * data.sample.x()(i, 70);
        CHECK(std::abs(implied - data.errors(i, 70)) <= 1e-12);
    }
    config.change_fraction = 0.29;
    config.n = 100;
    CHECK(generate_dataset(config).change_index == 29);
    config.change_fraction = 0.001;
    CHECK_THROWS_AS(generate_dataset(config), Error);
}

TEST_CASE("generation is deterministic in the seed") {
    DgpConfig config;
    config.n = 30;
    config.design = Design::Ar1;
    config.seed = 77;
    const auto a = generate_dataset(config);
    const auto b = generate_dataset(config);
    CHECK(a.sample.x() == b.sample.x());
    CHECK(a.sample.y() == b.sample.y());
    config.seed = 78;
    CHECK(generate_dataset(config).sample.x() != a.sample.x());
}

TEST_CASE("AR(1) coefficient streams") {
    DgpConfig config;
    config.n = 10000;
    config.seed = 5;
    const Matrix f = generate_ar_coefficients(config);
    CHECK(std::abs(lag1_correlation(f.col(0)) - 0.8) <= 0.05);
    CHECK(std::abs(lag1_correlation(f.col(5)) - 0.8) <= 0.05);
    const double var1 = (f.col(0).array() - f.col(0).mean()).square().mean();
    const double var2 = (f.col(1).array() - f.col(1).mean()).square().mean();
    // sigma_l = sigma / l, so Var F_1 / Var F_2 = 4
    CHECK(std::abs(var1 / var2 - 4.0) / 4.0 <= 0.15);
    // stationary variance sigma^2 / (1 - phi^2)
    CHECK(std::abs(var1 - 16.0 / 0.36) / (16.0 / 0.36) <= 0.15);
}

TEST_CASE("IID regressor variance") {
    DgpConfig config;
    config.n = 4000;
    config.seed = 8;
    const auto data = generate_dataset(config);
    // Var X(t) = 4 * sum_k (sin^2 + cos^2) = 4 * 6
    const Eigen::Index j = 37;
    const Vector col = data.sample.x().col(j);
    const double var = (col.array() - col.mean()).square().mean();
    CHECK(std::abs(var - 24.0) / 24.0 <= 0.1);
}

TEST_CASE("replications are ordered, deterministic and thread independent") {
    DgpConfig dgp;
    dgp.n = 40;
    dgp.grid_size = 21;
    TestConfig test;
    test.replications = 50;
    test.z_resolution = 50;
    const auto one = simulate_replications(dgp, test, 6, 9, 1);
    const auto three = simulate_replications(dgp, test, 6, 9, 3);
    REQUIRE(one.size() == 6);
    for (std::size_t r = 0; r < 6; ++r) {
        CHECK(one[r].results[0].statistic == three[r].results[0].statistic);
        CHECK(one[r].results[1].p_value == three[r].results[1].p_value);
    }
    CHECK(one[0].results[0].statistic != one[1].results[0].statistic);
}

TEST_CASE("study layout and single replication rates") {
    const auto cells = table1_cells({100, 300});
    REQUIRE(cells.size() == 12);
    CHECK(cells[0].n == 100);
    CHECK(cells[0].design == Design::Iid);
    CHECK(cells[1].design == Design::Ar1);
    CHECK(cells[2].alternative.kind == Alternative::Kind::Scaled);
    CHECK(cells[4].alternative.kind == Alternative::Kind::Spiked);
    CHECK(cells[6].n == 300);

    CHECK(table1_desk_preset().replications == 300);
    CHECK(table1_desk_preset().test.replications == 100);
    CHECK(table1_full_preset().cells.size() == 24);

    StudyConfig config;
    config.cells = table1_cells({40});
    for (auto& c : config.cells) c.grid_size = 21;
    config.replications = 1;
    config.test.replications = 20;
    config.test.z_resolution = 50;
    std::vector<std::size_t> seen;
    const auto result = run_study(config, [&](std::size_t c, const StudyCell&) { seen.push_back(c); });
    REQUIRE(result.size() == 6);
    CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    for (const auto& cell : result) {
        CHECK((cell.rejection_rate_sup == 0.0 || cell.rejection_rate_sup == 1.0));
        CHECK((cell.rejection_rate_l2 == 0.0 || cell.rejection_rate_l2 == 1.0));
        CHECK(cell.replications == 1);
    }
}
