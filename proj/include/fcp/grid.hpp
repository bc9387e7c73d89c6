#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fcp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * Discretization of the internal domain [0,1].
 *
 * Points are strictly increasing with t_1 = 0 and t_T = 1. Weights are the
 * trapezoid rule normalized to the unit interval, so they are nonnegative and
 * sum to one.
 */
class SampleGrid {
public:
    /// t_j = j/(T-1), j = 0..T-1.
    static SampleGrid uniform(std::size_t size);

    /// Arbitrary strictly increasing points spanning exactly [0,1].
    static SampleGrid from_points(std::vector<double> points);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double point(std::size_t j) const { return points_[j]; }
    double weight(std::size_t j) const { return weights_[j]; }

    /// Weights as an Eigen vector, convenient for quadrature of matrix rows.
    Eigen::Map<const Vector> weight_vector() const noexcept {
        return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
    }

    bool is_uniform() const noexcept { return uniform_; }

    friend bool operator==(const SampleGrid& a, const SampleGrid& b) noexcept {
        return a.points_ == b.points_;
    }

private:
    SampleGrid(std::vector<double> points, bool uniform);

    std::vector<double> points_;
    std::vector<double> weights_;
    bool uniform_ = false;
};

using GridPtr = std::shared_ptr<const SampleGrid>;

inline GridPtr make_uniform_grid(std::size_t size) {
    return std::make_shared<const SampleGrid>(SampleGrid::uniform(size));
}

/// A function on the grid, one finite value per grid point.
class Curve {
public:
    Curve(GridPtr grid, Vector values);

    const SampleGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const Vector& values() const noexcept { return values_; }
    double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

private:
    GridPtr grid_;
    Vector values_;
};

/// n paired curves (X_i, Y_i) sharing one grid; rows are curves.
class PairedFunctionalSample {
public:
    PairedFunctionalSample(GridPtr grid, Matrix x, Matrix y);

    const SampleGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const Matrix& x() const noexcept { return x_; }
    const Matrix& y() const noexcept { return y_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(x_.rows()); }
    std::size_t grid_size() const noexcept { return static_cast<std::size_t>(x_.cols()); }

private:
    GridPtr grid_;
    Matrix x_;
    Matrix y_;
};

struct SupResult {
    double value = 0.0;
    std::size_t index = 0;  // zero-based grid index, smallest on ties
};

double integrate(const Curve& f);
SupResult sup_abs(const Curve& f);
double l2_norm(const Curve& f);

// Same operations on raw grid-aligned values (rows of a matrix, etc.).
double integrate(const SampleGrid& grid, const Eigen::Ref<const Vector>& values);
SupResult sup_abs(const Eigen::Ref<const Vector>& values);
double l2_norm(const SampleGrid& grid, const Eigen::Ref<const Vector>& values);

}  // namespace fcp
