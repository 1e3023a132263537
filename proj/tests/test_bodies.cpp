#include <cmath>
#include <vector>

#include "borell/bodies.hpp"
#include "borell/rng.hpp"
#include "doctest.h"

using namespace borell;

namespace {

const std::vector<std::vector<double>> kSquare = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

std::vector<std::vector<double>> scaled_square(double t) {
    return {{t, t}, {-t, t}, {-t, -t}, {t, -t}};
}

}  // namespace

TEST_CASE("direction grid is unit, negation-closed, and angle-ordered") {
    auto grid = DirectionGrid::planar(720);
    REQUIRE(grid->size() == 720);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const std::vector<double>& u = grid->direction(i);
        CHECK(std::abs(std::hypot(u[0], u[1]) - 1.0) <= 1e-12);
        const std::vector<double>& nu = grid->direction(grid->neg_index(i));
        CHECK(nu[0] == -u[0]);
        CHECK(nu[1] == -u[1]);
    }
    CHECK(grid->direction(0)[0] == doctest::Approx(1.0));
    CHECK(grid->direction(180)[1] == doctest::Approx(1.0));

    auto sampled = DirectionGrid::sampled(3, 2000, 11);
    REQUIRE(sampled->size() == 2000);
    for (std::size_t i = 0; i < sampled->size(); ++i) {
        const std::vector<double>& u = sampled->direction(i);
        CHECK(std::abs(std::hypot(std::hypot(u[0], u[1]), u[2]) - 1.0) <= 1e-12);
        CHECK(sampled->direction(sampled->neg_index(i))[0] == -u[0]);
    }
}

TEST_CASE("support_of_polytope reproduces closed-form support values") {
    auto grid = DirectionGrid::planar(720);
    SupportBody square = support_of_polytope(kSquare, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const std::vector<double>& u = grid->direction(i);
        CHECK(square.values()[i] ==
              doctest::Approx(std::abs(u[0]) + std::abs(u[1])).epsilon(1e-12));
    }

    const double r3 = std::sqrt(3.0) / 2.0;
    std::vector<std::vector<double>> hex = {{1, 0},  {0.5, r3},  {-0.5, r3},
                                            {-1, 0}, {-0.5, -r3}, {0.5, -r3}};
    SupportBody hexagon = support_of_polytope(hex, DirectionGrid::planar(360));
    CHECK(hexagon.values()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("support_of_polytope rejects degenerate and asymmetric inputs") {
    auto grid = DirectionGrid::planar(16);
    CHECK_THROWS(support_of_polytope({{1, 0}, {-1, 0}}, grid));
    CHECK_THROWS(support_of_polytope({{1, 0}, {0, 1}, {-1, 0}, {0, -0.9}}, grid));
}

TEST_CASE("p_combination closed forms") {
    auto grid = DirectionGrid::planar(720);
    SupportBody K = support_of_polytope(kSquare, grid);
    SupportBody L = support_of_polytope(scaled_square(2.0), grid);

    SupportBody same = p_combination(Weight(0.37), ExtReal(0.5), K, K);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(same.values()[i] == doctest::Approx(K.values()[i]).epsilon(1e-13));

    double lam = 0.3;
    SupportBody dilate = p_combination(Weight(lam), ExtReal(0.0), K, L);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(dilate.values()[i] ==
              doctest::Approx(K.values()[i] * std::pow(2.0, lam)).epsilon(1e-12));

    SupportBody arith = p_combination(Weight(lam), ExtReal(1.0), K, L);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(arith.values()[i] ==
              doctest::Approx((1 - lam) * K.values()[i] + lam * L.values()[i]).epsilon(1e-12));
}

TEST_CASE("p_combination scaling invariance") {
    auto grid = DirectionGrid::planar(180);
    SupportBody K = support_of_polytope(kSquare, grid);
    SupportBody L = support_of_polytope(
        {{1.5, 0.4}, {-0.7, 1.1}, {-1.5, -0.4}, {0.7, -1.1}}, grid);
    double t = 2.5;
    SupportBody tK(grid, [&] {
        std::vector<double> v = K.values();
        for (double& x : v) x *= t;
        return v;
    }());
    SupportBody tL(grid, [&] {
        std::vector<double> v = L.values();
        for (double& x : v) x *= t;
        return v;
    }());
    SupportBody base = p_combination(Weight(0.3), ExtReal(0.5), K, L);
    SupportBody scaled = p_combination(Weight(0.3), ExtReal(0.5), tK, tL);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(scaled.values()[i] == doctest::Approx(t * base.values()[i]).epsilon(1e-12));
}

TEST_CASE("wulff_polygon reconstructs the square from axis and diagonal bounds") {
    auto grid = DirectionGrid::planar(8);
    std::vector<double> h(8);
    for (std::size_t i = 0; i < 8; ++i) {
        const std::vector<double>& u = grid->direction(i);
        h[i] = std::abs(u[0]) + std::abs(u[1]);  // square support: 1 on axes, sqrt(2) diagonal
    }
    Polygon2D poly = wulff_polygon(SupportBody(grid, h));
    CHECK(polygon_area(poly) == doctest::Approx(4.0).epsilon(1e-12));
    for (const auto& v : poly.vertices) {
        CHECK(std::abs(v[0]) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(v[1]) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("wulff_polygon of the unit disk bounds") {
    auto grid = DirectionGrid::planar(360);
    Polygon2D poly = wulff_polygon(SupportBody(grid, std::vector<double>(360, 1.0)));
    double pi = std::acos(-1.0);
    // circumscribed m-gon: area m tan(pi/m), a superset of the disk
    CHECK(polygon_area(poly) == doctest::Approx(360.0 * std::tan(pi / 360.0)).epsilon(1e-9));
    CHECK(std::abs(polygon_area(poly) - pi) <= 1e-3);

    auto axis4 = DirectionGrid::planar(4);
    Polygon2D sq = wulff_polygon(SupportBody(axis4, std::vector<double>(4, 1.0)));
    CHECK(polygon_area(sq) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("polygon_area shoelace values") {
    CHECK(polygon_area(Polygon2D({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}})) ==
          doctest::Approx(4.0).epsilon(1e-13));
    CHECK(polygon_area(Polygon2D({{0, 0}, {1, 0}, {0, 1}})) ==
          doctest::Approx(0.5).epsilon(1e-13));
    const double r3 = std::sqrt(3.0) / 2.0;
    Polygon2D hex({{1, 0}, {0.5, r3}, {-0.5, r3}, {-1, 0}, {-0.5, -r3}, {0.5, -r3}});
    CHECK(polygon_area(hex) == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("polygon validation rejects non-convex vertex order") {
    CHECK_THROWS(Polygon2D({{0, 0}, {2, 0}, {1, 0.1}, {2, 2}}));
}

TEST_CASE("membership respects the halfspace bounds") {
    auto grid = DirectionGrid::planar(720);
    SupportBody square = support_of_polytope(kSquare, grid);
    CHECK(membership({0.0, 0.0}, square));
    CHECK_FALSE(membership({2.0, 0.0}, square));
    CHECK(membership({1.0, 0.0}, square));   // facet point, equality within slack
    CHECK(membership({0.999, 0.999}, square));
    CHECK_FALSE(membership({1.001, 1.001}, square));
}

TEST_CASE("bounding_halfwidths reads support near the coordinate axes") {
    auto grid = DirectionGrid::planar(720);
    SupportBody square = support_of_polytope(kSquare, grid);
    std::vector<double> w = bounding_halfwidths(square);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mc_volume exact on its own bounding box and deterministic") {
    auto grid = DirectionGrid::planar(720);
    SupportBody square = support_of_polytope(kSquare, grid);
    McVolume v = mc_volume(square, 1000000, 42);
    CHECK(v.estimate == doctest::Approx(4.0).epsilon(1e-12));  // hit rate 1 inside its own box
    CHECK(v.samples == 1000000);

    McVolume again = mc_volume(square, 1000000, 42);
    CHECK(v.estimate == again.estimate);
    CHECK(v.stderr_estimate == again.stderr_estimate);
}

TEST_CASE("mc_volume estimates the 3-ball within noise plus grid bias") {
    auto grid = DirectionGrid::sampled(3, 2000, 99);
    SupportBody ball(grid, std::vector<double>(grid->size(), 1.0));
    McVolume v = mc_volume(ball, 200000, 7);
    double truth = 4.0 * std::acos(-1.0) / 3.0;
    CHECK(std::abs(v.estimate - truth) <= 3.0 * v.stderr_estimate + 0.02 * truth);
    CHECK(v.stderr_estimate > 0.0);
}

TEST_CASE("wulff monotonicity in the support values") {
    auto grid = DirectionGrid::planar(64);
    Rng rng(314);
    std::vector<double> h1(64), h2(64);
    for (std::size_t i = 0; i < 32; ++i) {
        double base = rng.uniform(0.5, 2.0);
        double bump = rng.uniform(0.0, 0.5);
        h1[i] = h1[grid->neg_index(i)] = base;
        h2[i] = h2[grid->neg_index(i)] = base + bump;
    }
    double a1 = polygon_area(wulff_polygon(SupportBody(grid, h1)));
    double a2 = polygon_area(wulff_polygon(SupportBody(grid, h2)));
    CHECK(a1 <= a2 + 1e-12);
}

TEST_CASE("grid refinement tightens combined areas monotonically") {
    Polygon2D K = random_symmetric_polygon(7, 5);
    Polygon2D L = random_symmetric_polygon(6, 9);
    std::vector<double> areas;
    for (std::int64_t m : {180, 360, 720}) {
        auto grid = DirectionGrid::planar(m);
        SupportBody Kb = support_of_polytope(polygon_vertex_list(K), grid);
        SupportBody Lb = support_of_polytope(polygon_vertex_list(L), grid);
        SupportBody combo = p_combination(Weight(0.4), ExtReal(0.0), Kb, Lb);
        areas.push_back(polygon_area(wulff_polygon(combo)));
    }
    CHECK(areas[0] >= areas[1] - 1e-12);
    CHECK(areas[1] >= areas[2] - 1e-12);
    CHECK(std::abs(areas[1] - areas[2]) <= std::abs(areas[0] - areas[1]) + 1e-12);
}

TEST_CASE("random_symmetric_polygon is symmetric, convex, and seeded") {
    Polygon2D p = random_symmetric_polygon(6, 123);
    CHECK(polygon_area(p) > 0.0);
    REQUIRE(p.vertices.size() % 2 == 0);
    // central symmetry: for each vertex the antipode is present
    for (const auto& v : p.vertices) {
        bool found = false;
        for (const auto& w : p.vertices)
            if (std::abs(w[0] + v[0]) < 1e-12 && std::abs(w[1] + v[1]) < 1e-12) found = true;
        CHECK(found);
    }
    Polygon2D q = random_symmetric_polygon(6, 123);
    REQUIRE(q.vertices.size() == p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        CHECK(q.vertices[i][0] == p.vertices[i][0]);
        CHECK(q.vertices[i][1] == p.vertices[i][1]);
    }
}

TEST_CASE("support body construction validates symmetry and positivity") {
    auto grid = DirectionGrid::planar(8);
    std::vector<double> asym = {1, 1, 1, 1, 2, 1, 1, 1};  // h(u) != h(-u)
    CHECK_THROWS(SupportBody(grid, asym));
    std::vector<double> zero = {1, 1, 0, 1, 1, 1, 0, 1};
    CHECK_THROWS(SupportBody(grid, zero));
}
