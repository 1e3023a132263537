#include <cmath>
#include <functional>
#include <vector>

#include "borell/funcgrid.hpp"
#include "borell/means.hpp"
#include "doctest.h"

using namespace borell;

namespace {

GridFunction grid1d(double lo, double hi, std::int64_t n,
                    const std::function<double(double)>& f) {
    std::vector<double> values(static_cast<std::size_t>(n));
    double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::int64_t j = 0; j < n; ++j) values[static_cast<std::size_t>(j)] = f(lo + step * j);
    return GridFunction({lo}, {hi}, {n}, std::move(values));
}

GridFunction grid2d(double lo, double hi, std::int64_t n,
                    const std::function<double(double, double)>& f) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n * n));
    double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) values.push_back(f(lo + step * i, lo + step * j));
    return GridFunction({lo, lo}, {hi, hi}, {n, n}, std::move(values));
}

// 1-d superlevel volume with the same node cells integrate() uses.
double superlevel_volume(const GridFunction& f, double t) {
    double vol = 0.0;
    for (std::int64_t j = 0; j < f.shape()[0]; ++j)
        if (f.values()[static_cast<std::size_t>(j)] >= t) vol += f.axis_weight(0, j);
    return vol;
}

}  // namespace

TEST_CASE("integrate frozen examples") {
    GridFunction one = grid1d(0.0, 1.0, 101, [](double) { return 1.0; });
    CHECK(one.integrate() == doctest::Approx(1.0).epsilon(1e-13));

    GridFunction linear = grid1d(0.0, 1.0, 1001, [](double x) { return x; });
    CHECK(linear.integrate() == doctest::Approx(0.5).epsilon(1e-6));

    GridFunction zero = grid1d(0.0, 1.0, 11, [](double) { return 0.0; });
    CHECK(zero.integrate() == 0.0);
}

TEST_CASE("integrate is linear on a shared grid") {
    GridFunction f = grid1d(-1.0, 2.0, 301, [](double x) { return std::exp(-x * x); });
    GridFunction g = grid1d(-1.0, 2.0, 301, [](double x) { return 1.0 + 0.5 * std::sin(x); });
    std::vector<double> combo(f.values().size());
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo[i] = 2.0 * f.values()[i] + 3.0 * g.values()[i];
    GridFunction h({-1.0}, {2.0}, {301}, std::move(combo));
    double expect = 2.0 * f.integrate() + 3.0 * g.integrate();
    CHECK(h.integrate() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("integrate refinement shrinks the quadrature error") {
    auto sq = [](double x) { return x * x; };
    double coarse = std::abs(grid1d(0.0, 1.0, 11, sq).integrate() - 1.0 / 3.0);
    double fine = std::abs(grid1d(0.0, 1.0, 21, sq).integrate() - 1.0 / 3.0);
    CHECK(fine <= coarse / 3.0);
}

TEST_CASE("grid construction validation") {
    CHECK_THROWS_AS(GridFunction({0.0}, {0.0}, {11}, std::vector<double>(11, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(GridFunction({0.0}, {1.0}, {1}, std::vector<double>(1, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(GridFunction({0.0}, {1.0}, {5}, std::vector<double>(4, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(GridFunction({0.0}, {1.0}, {5}, std::vector<double>(5, -1.0)),
                    std::invalid_argument);
}

TEST_CASE("evaluate interpolates multilinearly and vanishes outside the box") {
    GridFunction f = grid2d(0.0, 1.0, 11, [](double x, double y) { return x + 2.0 * y; });
    CHECK(f.evaluate({0.35, 0.15}) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(f.evaluate({2.0, 0.5}) == 0.0);
    CHECK(f.evaluate({0.5, -0.1}) == 0.0);
}

TEST_CASE("alpha_concavity_check accepts log-concave and concave fixtures") {
    GridFunction gauss = grid1d(-5.0, 5.0, 401, [](double x) { return std::exp(-x * x); });
    CheckReport log_concave = alpha_concavity_check(gauss, ExtReal(0.0), 2000, 7);
    CHECK(log_concave.satisfied);

    GridFunction tent = grid1d(-2.0, 2.0, 401,
                               [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
    CheckReport concave = alpha_concavity_check(tent, ExtReal(1.0), 2000, 7);
    CHECK(concave.satisfied);
}

TEST_CASE("alpha_concavity_check flags disconnected support at alpha = 0") {
    GridFunction bumps = grid1d(0.0, 3.0, 301, [](double x) {
        return (x <= 1.0 || x >= 2.0) ? 1.0 : 0.0;
    });
    CheckReport r = alpha_concavity_check(bumps, ExtReal(0.0), 2000, 7);
    CHECK_FALSE(r.satisfied);
    CHECK(r.margin <= -0.9);  // midpoint in the gap: 0 - M_0(1,1)
    CHECK_FALSE(r.worst_witness.empty());
}

TEST_CASE("alpha_concavity_check rejects the zero function") {
    GridFunction zero = grid1d(0.0, 1.0, 11, [](double) { return 0.0; });
    CHECK_THROWS(alpha_concavity_check(zero, ExtReal(0.0), 100, 1));
}

TEST_CASE("superlevel_threshold_values spans (0, max] uniformly") {
    GridFunction one = grid1d(0.0, 1.0, 11, [](double) { return 1.0; });
    std::vector<double> t4 = superlevel_threshold_values(one, 4);
    REQUIRE(t4.size() == 4);
    CHECK(t4[0] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(t4[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(t4[2] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(t4[3] == doctest::Approx(1.0).epsilon(1e-13));

    GridFunction two = grid1d(0.0, 1.0, 11, [](double) { return 2.0; });
    std::vector<double> t2 = superlevel_threshold_values(two, 2);
    REQUIRE(t2.size() == 2);
    CHECK(t2[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(t2[1] == doctest::Approx(2.0).epsilon(1e-13));

    GridFunction tent = grid1d(-2.0, 2.0, 401,
                               [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
    std::vector<double> many = superlevel_threshold_values(tent, 64);
    for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i] > many[i - 1]);

    GridFunction zero = grid1d(0.0, 1.0, 11, [](double) { return 0.0; });
    CHECK_THROWS(superlevel_threshold_values(zero, 4));
}

TEST_CASE("layer-cake identity on tent and truncated Gaussian") {
    for (int which = 0; which < 2; ++which) {
        GridFunction f =
            which == 0
                ? grid1d(-1.0, 1.0, 2001, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); })
                : grid1d(-5.0, 5.0, 2001, [](double x) { return std::exp(-x * x); });
        std::vector<double> thresholds = superlevel_threshold_values(f, 512);
        double dt = thresholds[0];
        double cake = 0.0;
        for (double t : thresholds) cake += superlevel_volume(f, t) * dt;
        CHECK(cake == doctest::Approx(f.integrate()).epsilon(0.01));
    }
}

TEST_CASE("marginal_last of a product function is the profile times the mass") {
    auto u = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
    auto v = [](double y) { return std::exp(-y * y); };
    std::int64_t n = 201;
    GridFunction f = grid2d(-2.0, 2.0, n, [&](double x, double y) { return u(x) * v(y); });
    GridFunction m = marginal_last(f);
    REQUIRE(m.dim() == 1);
    REQUIRE(m.shape()[0] == n);
    CHECK(m.box_min()[0] == -2.0);
    CHECK(m.box_max()[0] == 2.0);

    GridFunction ug = grid1d(-2.0, 2.0, n, u);
    double mass_u = ug.integrate();
    for (std::int64_t j = 0; j < n; ++j) {
        double y = m.node(0, j);
        CHECK(m.values()[static_cast<std::size_t>(j)] ==
              doctest::Approx(mass_u * v(y)).epsilon(1e-9));
    }
    // integrating the marginal reproduces the product mass
    CHECK(m.integrate() == doctest::Approx(f.integrate()).epsilon(1e-12));
}
