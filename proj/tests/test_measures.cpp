#include <cmath>
#include <stdexcept>
#include <vector>

#include "borell/measures.hpp"
#include "doctest.h"

using namespace borell;

namespace {

GridFunction const_density(double lo, double hi, std::int64_t n, double c = 1.0) {
    return GridFunction({lo, lo}, {hi, hi}, {n, n}, std::vector<double>(n * n, c));
}

GridFunction gaussian_density(double lo, double hi, std::int64_t n) {
    std::vector<double> vals;
    vals.reserve(n * n);
    double step = (hi - lo) / double(n - 1);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double x = lo + step * i, y = lo + step * j;
            vals.push_back(std::exp(-x * x - y * y));
        }
    return GridFunction({lo, lo}, {hi, hi}, {n, n}, std::move(vals));
}

GridFunction product_tent(double lo, double hi, std::int64_t n) {
    std::vector<double> vals;
    vals.reserve(n * n);
    double step = (hi - lo) / double(n - 1);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double x = lo + step * i, y = lo + step * j;
            vals.push_back(std::max(0.0, 1.0 - std::abs(x)) * std::max(0.0, 1.0 - std::abs(y)));
        }
    return GridFunction({lo, lo}, {hi, hi}, {n, n}, std::move(vals));
}

SupportBody square_body(double half, std::int64_t m = 720) {
    return support_of_polytope({{half, half}, {-half, half}, {-half, -half}, {half, -half}},
                               DirectionGrid::planar(m));
}

SupportBody disk_body(double radius, std::int64_t m = 720) {
    auto grid = DirectionGrid::planar(m);
    return SupportBody(grid, std::vector<double>(grid->size(), radius));
}

}  // namespace

TEST_CASE("density construction validates the declared concavity class") {
    CHECK_NOTHROW(DensityMeasure(gaussian_density(-3, 3, 201), ExtReal(0.0), true));
    // a gaussian has convex tails, so declaring it 1-concave must fail
    CHECK_THROWS_AS(DensityMeasure(gaussian_density(-3, 3, 201), ExtReal(1.0), true),
                    std::invalid_argument);
    // the product tent is log-concave but not concave
    CHECK_NOTHROW(DensityMeasure(product_tent(-2, 2, 201), ExtReal(0.0), true));
    CHECK_THROWS_AS(DensityMeasure(product_tent(-2, 2, 201), ExtReal(1.0), true),
                    std::invalid_argument);
    // constants sit in every class
    CHECK_NOTHROW(DensityMeasure(const_density(-2, 2, 51), ExtReal(1.0), true));
    CHECK_NOTHROW(DensityMeasure(const_density(-2, 2, 51), ExtReal::pos_inf(), true));
}

TEST_CASE("symmetry flag is validated against the density") {
    std::int64_t n = 101;
    std::vector<double> vals;
    double step = 4.0 / double(n - 1);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double x = -2 + step * i, y = -2 + step * j;
            vals.push_back(std::exp(-(x - 0.3) * (x - 0.3) - y * y));
        }
    GridFunction shifted({-2, -2}, {2, 2}, {n, n}, vals);
    CHECK_THROWS_AS(DensityMeasure(shifted, ExtReal(0.0), true), std::invalid_argument);
    CHECK_NOTHROW(DensityMeasure(shifted, ExtReal(0.0), false));
}

TEST_CASE("measure_of_body counts node cells against closed forms") {
    // 803 nodes on [-2,2]: the unit-square boundary falls mid-cell, so the
    // covered length per axis is exactly 2
    DensityMeasure leb(const_density(-2, 2, 803), ExtReal(1.0), true);
    CHECK(measure_of_body(leb, square_body(1.0)) == doctest::Approx(4.0).epsilon(1e-3));

    DensityMeasure gauss(gaussian_density(-4, 4, 1601), ExtReal(0.0), true);
    double truth = std::acos(-1.0) * (1.0 - std::exp(-1.0));
    CHECK(measure_of_body(gauss, disk_body(1.0)) == doctest::Approx(truth).epsilon(1e-3));
}

TEST_CASE("a body absorbing the support integrates the density") {
    GridFunction tent = product_tent(-3, 3, 601);
    DensityMeasure mu(tent, ExtReal(0.0), true);
    CHECK(measure_of_body(mu, square_body(2.5)) == doctest::Approx(tent.integrate()).epsilon(1e-12));
}

TEST_CASE("measure_of_body requires the grid to cover the body") {
    DensityMeasure mu(const_density(-1, 1, 101), ExtReal(1.0), true);
    CHECK_THROWS_AS(measure_of_body(mu, square_body(1.5)), std::domain_error);
}

TEST_CASE("levelset_profile matches closed-form superlevel areas") {
    DensityMeasure leb(const_density(-2, 2, 803), ExtReal(1.0), true);
    std::vector<double> flat = levelset_profile(leb, square_body(1.0), {0.5, 2.0});
    REQUIRE(flat.size() == 2);
    CHECK(flat[0] == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(flat[1] == doctest::Approx(0.0));

    // product tent over its own support square: |{psi >= t}| = 4 (1 - t + t ln t)
    DensityMeasure tent(product_tent(-1, 1, 801), ExtReal(0.0), true);
    std::vector<double> ts = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> prof = levelset_profile(tent, square_body(1.0), ts);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double t = ts[k];
        double closed = 4.0 * (1.0 - t + t * std::log(t));
        CHECK(std::abs(prof[k] - closed) <= 1e-3);
    }
}

TEST_CASE("composite_exponent closed forms, continuity, and admissibility") {
    CHECK(composite_exponent(ExtReal::pos_inf(), ExtReal(1.0), 2).value() == doctest::Approx(0.5));
    CHECK(composite_exponent(ExtReal(1.0), ExtReal(1.0), 2).value() ==
          doctest::Approx(1.0 / 3.0));
    CHECK(composite_exponent(ExtReal(1.0), ExtReal(0.0), 2).value() == doctest::Approx(0.0));
    CHECK(composite_exponent(ExtReal(0.0), ExtReal(1.0), 2).value() == doctest::Approx(0.0));
    CHECK(composite_exponent(ExtReal(-0.4), ExtReal(1.0), 2).value() ==
          doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(composite_exponent(ExtReal(-0.5), ExtReal(1.0), 2).is_neg_inf());
    CHECK_THROWS_AS(composite_exponent(ExtReal(-0.6), ExtReal(1.0), 2), std::invalid_argument);
    CHECK_THROWS_AS(composite_exponent(ExtReal(1.0), ExtReal(2.0), 2), std::invalid_argument);
    CHECK_THROWS_AS(composite_exponent(ExtReal::neg_inf(), ExtReal(1.0), 2),
                    std::invalid_argument);
}

TEST_CASE("lp_bm_check is exact on identical bodies") {
    DensityMeasure leb(const_density(-3, 3, 1025), ExtReal(1.0), true);
    SupportBody K = disk_body(1.3);
    CheckReport rep = lp_bm_check(leb, K, K, Weight(0.4), ExtReal(0.5));
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.margin) <= 1e-12 * rep.lhs);
}

TEST_CASE("lp_bm_check dilate fixture sits at equality within counting noise") {
    DensityMeasure leb(const_density(-4, 4, 1603), ExtReal(1.0), true);
    SupportBody K = disk_body(1.0);
    SupportBody L = disk_body(2.0);
    CheckReport rep = lp_bm_check(leb, K, L, Weight(0.5), ExtReal(0.0));
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.margin) <= 1e-3 * rep.lhs);
}

TEST_CASE("lp_bm_check right side is monotone in p") {
    DensityMeasure leb(const_density(-4, 4, 801), ExtReal(1.0), true);
    SupportBody K = disk_body(1.0);
    SupportBody L = disk_body(2.0);
    double prev = -1.0;
    for (double p : {0.0, 0.25, 0.5, 1.0}) {
        CheckReport rep = lp_bm_check(leb, K, L, Weight(0.3), ExtReal(p));
        CHECK(rep.rhs >= prev - 1e-12);
        prev = rep.rhs;
        CHECK(rep.satisfied);
    }
}

TEST_CASE("lp_bm_check enforces the exponent admissibility bound") {
    DensityMeasure leb(const_density(-3, 3, 301), ExtReal(-0.2), true);
    SupportBody K = disk_body(1.0);
    CHECK_THROWS_AS(lp_bm_check(leb, K, K, Weight(0.5), ExtReal(0.0)), std::invalid_argument);
}

TEST_CASE("concavity class above one is reported outside the hypothesis") {
    DensityMeasure leb(const_density(-3, 3, 301), ExtReal(2.0), true);
    SupportBody K = disk_body(1.0);
    CheckReport rep = lp_bm_check(leb, K, K, Weight(0.5), ExtReal(1.0));
    CHECK(rep.worst_witness.find("outside-equiv-hypothesis") != std::string::npos);
}

TEST_CASE("equiv_pipeline_check zeros out on identical bodies") {
    GridFunction tent = product_tent(-1.25, 1.25, 501);
    DensityMeasure mu(tent, ExtReal(0.0), true);
    SupportBody K = disk_body(1.0);
    CheckReport rep = equiv_pipeline_check(mu, K, K, Weight(0.5), ExtReal(0.0), 64);
    CHECK(rep.satisfied);
    // profile stages count lattice nodes against curved level sets, so the
    // zero margin carries counting noise of quadrature size
    CHECK(rep.margin >= -1e-3);
}

TEST_CASE("equiv_pipeline_check agrees with lp_bm_check on the dilate fixture") {
    DensityMeasure leb(const_density(-4, 4, 1603), ExtReal(1.0), true);
    SupportBody K = disk_body(1.0);
    SupportBody L = disk_body(2.0);
    CheckReport direct = lp_bm_check(leb, K, L, Weight(0.5), ExtReal(0.0));
    CheckReport staged = equiv_pipeline_check(leb, K, L, Weight(0.5), ExtReal(0.0), 64);
    CHECK(staged.satisfied);
    CHECK(std::abs(staged.lhs - direct.lhs) <= 0.01 * direct.lhs);
    CHECK(std::abs(staged.rhs - direct.rhs) <= 0.01 * direct.rhs);
}

TEST_CASE("equiv_pipeline_check requires a finite concavity class") {
    DensityMeasure leb(const_density(-3, 3, 301), ExtReal::pos_inf(), true);
    SupportBody K = disk_body(1.0);
    CHECK_THROWS_AS(equiv_pipeline_check(leb, K, K, Weight(0.5), ExtReal(0.0), 32),
                    std::invalid_argument);
}

TEST_CASE("inclusion_chain_check finds no escapees for p in [0,1]") {
    SupportBody sq = square_body(1.0);
    auto grid = DirectionGrid::planar(720);
    const double r2 = std::sqrt(2.0) / 2.0;
    SupportBody rot = support_of_polytope(
        {{r2, r2}, {-r2, r2}, {-r2, -r2}, {r2, -r2}}, grid);
    for (double p : {0.0, 0.5, 1.0}) {
        CheckReport rep = inclusion_chain_check(sq, rot, Weight(0.35), ExtReal(p), 2000, 77);
        CHECK(rep.satisfied);
        CHECK(rep.lhs == 0.0);  // violation count
        CHECK(rep.samples_checked == 2000);
    }
}

TEST_CASE("planar exact check hits equality on dilates and scales") {
    Polygon2D K({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
    Polygon2D L({{2, 2}, {-2, 2}, {-2, -2}, {2, -2}});
    CheckReport rep = planar_lp_exact_check(K, L, Weight(0.3), ExtReal(0.0));
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.margin) <= 1e-9);

    CheckReport same = planar_lp_exact_check(K, K, Weight(0.3), ExtReal(0.5));
    CHECK(std::abs(same.margin) <= 1e-9);
}

TEST_CASE("planar exact check margins are the superset bias, never negative") {
    std::vector<CheckReport> reports = planar_lp_sweep(20, 2024, ExtReal(0.0), Weight(0.3));
    REQUIRE(reports.size() == 20);
    for (const CheckReport& rep : reports) {
        CHECK(rep.satisfied);
        // the combined area is a superset evaluation, so the measured margin
        // is the true (nonnegative) margin plus a nonnegative bias
        CHECK(rep.margin >= -1e-9);
    }
}

TEST_CASE("planar sweep is deterministic per seed") {
    std::vector<CheckReport> a = planar_lp_sweep(5, 31, ExtReal(0.5), Weight(0.5), 360);
    std::vector<CheckReport> b = planar_lp_sweep(5, 31, ExtReal(0.5), Weight(0.5), 360);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lhs == b[i].lhs);
        CHECK(a[i].rhs == b[i].rhs);
        CHECK(a[i].margin == b[i].margin);
    }
}
