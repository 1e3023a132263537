#pragma once

#include <cstdint>
#include <vector>

#include "ext_real.hpp"
#include "report.hpp"

namespace borell {

// Nonnegative function sampled on a uniform axis-aligned grid.  Samples sit at
// box_min + j * step inclusive of both box faces; the quadrature cell of a
// sample is centered on it and clamped at the box, so boundary cells carry
// half weight (one-dimensional trapezoid weights, tensorized).
class GridFunction {
public:
    GridFunction(std::vector<double> box_min, std::vector<double> box_max,
                 std::vector<std::int64_t> shape, std::vector<double> values);

    std::size_t dim() const { return box_min_.size(); }
    const std::vector<double>& box_min() const { return box_min_; }
    const std::vector<double>& box_max() const { return box_max_; }
    const std::vector<std::int64_t>& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    double step(std::size_t axis) const { return step_[axis]; }
    double node(std::size_t axis, std::int64_t j) const { return box_min_[axis] + step_[axis] * j; }
    // Quadrature weight of node j on one axis: step, halved at the box faces.
    double axis_weight(std::size_t axis, std::int64_t j) const {
        double w = step_[axis];
        if (j == 0 || j == shape_[axis] - 1) w *= 0.5;
        return w;
    }
    // Full cell volume of a node given its multi-index.
    double cell_volume(const std::vector<std::int64_t>& idx) const;

    double value_at(const std::vector<std::int64_t>& idx) const { return values_[flat(idx)]; }
    std::size_t flat(const std::vector<std::int64_t>& idx) const;

    // Multilinear interpolation; zero outside the box.
    double evaluate(const std::vector<double>& x) const;

    // Midpoint-rule Riemann sum over the clamped cells (exact for affine data).
    double integrate() const;

    double max_value() const { return max_value_; }
    // Support threshold: values at or below this are treated as zero mass.
    double supp_eps() const { return 1e-12 * max_value_; }

    bool inside(const std::vector<double>& x) const;

private:
    std::vector<double> box_min_, box_max_;
    std::vector<std::int64_t> shape_;
    std::vector<double> values_;
    std::vector<double> step_;
    double max_value_ = 0.0;
};

// Samples n_pairs random (x, y, lambda) with f(x) f(y) > 0 and checks
// f((1-lambda) x + lambda y) >= M_alpha^lambda(f(x), f(y)).  Reports the worst
// margin; errors if f has no support.
// Default tolerance is quadrature-class: multilinear interpolation undercuts a
// smooth concave profile by O(step^2), so exact-class tolerances false-alarm.
CheckReport alpha_concavity_check(const GridFunction& f, const ExtReal& alpha,
                                  std::int64_t n_pairs, std::uint64_t seed,
                                  double tolerance = 1e-3);

// `count` thresholds uniformly spaced on (0, max f], highest equal to max f.
std::vector<double> superlevel_threshold_values(const GridFunction& f, std::int64_t count);

// Marginal over all but the last coordinate: F(t) = integral of f(., t).
GridFunction marginal_last(const GridFunction& f);

}  // namespace borell
