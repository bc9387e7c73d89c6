#include "fcp/grid.hpp"

#include <cmath>
#include <string>

#include "fcp/error.hpp"

namespace fcp {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& points) {
    const std::size_t size = points.size();
    std::vector<double> weights(size, 0.0);
    for (std::size_t j = 0; j + 1 < size; ++j) {
        const double half = 0.5 * (points[j + 1] - points[j]);
        weights[j] += half;
        weights[j + 1] += half;
    }
    return weights;
}

}  // namespace

SampleGrid::SampleGrid(std::vector<double> points, bool uniform)
    : points_(std::move(points)), weights_(trapezoid_weights(points_)), uniform_(uniform) {}

SampleGrid SampleGrid::uniform(std::size_t size) {
    if (size < 2) {
        throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points, got " + std::to_string(size));
    }
    std::vector<double> points(size);
    const double denom = static_cast<double>(size - 1);
    for (std::size_t j = 0; j < size; ++j) {
        points[j] = static_cast<double>(j) / denom;
    }
    return SampleGrid(std::move(points), true);
}

SampleGrid SampleGrid::from_points(std::vector<double> points) {
    if (points.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points");
    }
    if (points.front() != 0.0 || points.back() != 1.0) {
        throw Error(ErrorKind::InvalidArgument, "grid must start at 0 and end at 1");
    }
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        if (!std::isfinite(points[j + 1]) || !(points[j + 1] > points[j])) {
            throw Error(ErrorKind::InvalidArgument,
                        "grid points must be strictly increasing (position " + std::to_string(j + 1) + ")");
        }
    }
    return SampleGrid(std::move(points), false);
}

Curve::Curve(GridPtr grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) {
        throw Error(ErrorKind::InvalidArgument, "curve requires a grid");
    }
    if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
        throw Error(ErrorKind::InvalidArgument, "curve length does not match grid size");
    }
    if (!values_.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "curve values must be finite");
    }
}

PairedFunctionalSample::PairedFunctionalSample(GridPtr grid, Matrix x, Matrix y)
    : grid_(std::move(grid)), x_(std::move(x)), y_(std::move(y)) {
    if (!grid_) {
        throw Error(ErrorKind::InvalidArgument, "sample requires a grid");
    }
    if (x_.rows() != y_.rows() || x_.cols() != y_.cols()) {
        throw Error(ErrorKind::InvalidArgument, "regressor and response matrices differ in shape");
    }
    if (static_cast<std::size_t>(x_.cols()) != grid_->size()) {
        throw Error(ErrorKind::InvalidArgument, "curve length does not match grid size");
    }
    if (x_.rows() < 3) {
        throw Error(ErrorKind::TooFewCurves, "need at least 3 curve pairs, got " + std::to_string(x_.rows()));
    }
    if (!x_.allFinite() || !y_.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "sample contains non-finite values");
    }
}

double integrate(const SampleGrid& grid, const Eigen::Ref<const Vector>& values) {
    return grid.weight_vector().dot(values);
}

SupResult sup_abs(const Eigen::Ref<const Vector>& values) {
    SupResult best;
    for (Eigen::Index j = 0; j < values.size(); ++j) {
        const double a = std::abs(values[j]);
        if (a > best.value) {
            best = {a, static_cast<std::size_t>(j)};
        }
    }
    return best;
}

double l2_norm(const SampleGrid& grid, const Eigen::Ref<const Vector>& values) {
    return std::sqrt(grid.weight_vector().dot(values.cwiseAbs2()));
}

double integrate(const Curve& f) { return integrate(f.grid(), f.values()); }
SupResult sup_abs(const Curve& f) { return sup_abs(f.values()); }
double l2_norm(const Curve& f) { return l2_norm(f.grid(), f.values()); }

}  // namespace fcp
