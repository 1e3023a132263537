#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ext_real.hpp"
#include "means.hpp"

namespace borell {

// One scalar coordinate map phi_k(x_k, y_k) with its partial derivatives and a
// declared rectangular domain used for spot validation.
struct ScalarMap {
    std::string spec;
    std::function<double(double, double)> value, dx, dy;
    std::array<double, 2> x_range{0.0, 1.0};
    std::array<double, 2> y_range{0.0, 1.0};
    double lambda = -1.0;  // family weight when the builder carries one
};

// Coordinatewise map; a single component broadcasts across all coordinates.
// Partials are spot-validated on a sample grid at construction: strictly
// positive for lambda in (0, 1), nonnegative at the degenerate weights.
class CoordinateMap {
public:
    static CoordinateMap affine(double lambda);
    static CoordinateMap powermean(const ExtReal& p, double lambda);
    static CoordinateMap per_coordinate(std::vector<ScalarMap> comps);

    std::size_t components() const { return comps_.size(); }
    const ScalarMap& component(std::size_t k) const {
        return comps_.size() == 1 ? comps_[0] : comps_.at(k);
    }
    // Uniform family weight across components, or -1 when mixed/absent.
    double lambda_hint() const;
    std::string describe() const;

private:
    explicit CoordinateMap(std::vector<ScalarMap> comps);
    std::vector<ScalarMap> comps_;
};

// Scalar combination functional Phi(a, b) >= 0 on [0, inf)^2, 1-homogeneous and
// nondecreasing in each argument (both spot-validated at construction).
class Combiner {
public:
    static Combiner mean_family(const ExtReal& s, double lambda);
    static Combiner minkowski(std::int64_t n);

    double operator()(double a, double b) const { return fn_(a, b); }
    double phi10() const { return fn_(1.0, 0.0); }
    double phi01() const { return fn_(0.0, 1.0); }
    const std::string& spec() const { return spec_; }
    double lambda_hint() const { return lambda_; }

private:
    Combiner(std::string spec, std::function<double(double, double)> fn, double lambda);
    void spot_validate() const;
    std::string spec_;
    std::function<double(double, double)> fn_;
    double lambda_ = -1.0;
};

// Spec strings: "affine:lambda=0.5", "powermean:p=0.5,lambda=0.3".
CoordinateMap parse_coordinate_map(const std::string& spec);
// Spec strings: "mean:s=0,lambda=0.5", "minkowski:n=2".
Combiner parse_combiner(const std::string& spec);

}  // namespace borell
