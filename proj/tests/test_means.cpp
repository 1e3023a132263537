#include <cmath>
#include <vector>

#include "borell/ext_real.hpp"
#include "borell/means.hpp"
#include "borell/rng.hpp"
#include "doctest.h"

using namespace borell;

namespace {
const ExtReal kNegInf = ExtReal::neg_inf();
const ExtReal kPosInf = ExtReal::pos_inf();
}  // namespace

TEST_CASE("mean reproduces the frozen example values") {
    CHECK(mean(ExtReal(0.0), Weight(0.5), 4.0, 9.0) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(mean(kNegInf, Weight(0.3), 2.0, 5.0) == 2.0);
    CHECK(mean(ExtReal(2.0), Weight(0.5), 1.0, 7.0) == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(mean(ExtReal(-1.0), Weight(0.5), 0.0, 3.0) == 0.0);
    CHECK(mean(kPosInf, Weight(0.3), 2.0, 5.0) == 5.0);
}

TEST_CASE("mean degenerate weights return the surviving argument exactly") {
    CHECK(mean(ExtReal(0.37), Weight(0.0), 3.1, 9.9) == 3.1);
    CHECK(mean(ExtReal(-2.5), Weight(1.0), 3.1, 9.9) == 9.9);
    CHECK(mean(kPosInf, Weight(0.0), 0.0, 9.9) == 0.0);
    // equal arguments short-circuit for every exponent
    CHECK(mean(ExtReal(1e-12), Weight(0.25), 7.3, 7.3) == 7.3);
    CHECK(mean(kNegInf, Weight(0.25), 7.3, 7.3) == 7.3);
}

TEST_CASE("mean zero-argument conventions") {
    // s < 0 and s = 0: any zero argument annihilates
    CHECK(mean(ExtReal(-0.5), Weight(0.25), 0.0, 5.0) == 0.0);
    CHECK(mean(ExtReal(0.0), Weight(0.25), 5.0, 0.0) == 0.0);
    CHECK(mean(kNegInf, Weight(0.25), 5.0, 0.0) == 0.0);
    // s > 0: the zero argument drops out with its weight
    CHECK(mean(ExtReal(1.0), Weight(0.25), 0.0, 8.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(mean(ExtReal(2.0), Weight(0.5), 0.0, 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(mean(kPosInf, Weight(0.25), 0.0, 8.0) == 8.0);
    CHECK(mean(ExtReal(3.0), Weight(0.5), 0.0, 0.0) == 0.0);
}

TEST_CASE("mean_vector examples and dimension validation") {
    ExponentVector p01({ExtReal(0.0), ExtReal(1.0)});
    std::vector<double> r = mean_vector(p01, Weight(0.5), {4.0, 0.0}, {9.0, 2.0});
    // ExponentVector carries one exponent per coordinate
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-13));

    ExponentVector p00({ExtReal(0.0), ExtReal(0.0)});
    std::vector<double> identity = mean_vector(p00, Weight(0.0), {3.0, 5.0}, {8.0, 8.0});
    CHECK(identity[0] == 3.0);
    CHECK(identity[1] == 5.0);

    ExponentVector p11({ExtReal(1.0), ExtReal(1.0)});
    std::vector<double> arith = mean_vector(p11, Weight(0.25), {4.0, 4.0}, {8.0, 8.0});
    CHECK(arith[0] == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(arith[1] == doctest::Approx(5.0).epsilon(1e-13));

    CHECK_THROWS_AS(mean_vector(p11, Weight(0.5), {1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("weight and exponent validation") {
    CHECK_THROWS_AS(Weight(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Weight(1.1), std::invalid_argument);
    CHECK_THROWS_AS(ExtReal(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(ExponentVector(std::vector<ExtReal>{}), std::invalid_argument);
}

TEST_CASE("mean homogeneity over random tuples") {
    Rng rng(20240101);
    const std::vector<ExtReal> exponents = {kNegInf,         ExtReal(-3.0), ExtReal(-1.0),
                                            ExtReal(-1e-10), ExtReal(0.0),  ExtReal(1e-10),
                                            ExtReal(0.5),    ExtReal(1.0),  ExtReal(4.0),
                                            kPosInf};
    for (int i = 0; i < 2000; ++i) {
        const ExtReal& s = exponents[rng.index(exponents.size())];
        Weight lambda(rng.uniform());
        double a = rng.uniform(0.0, 10.0), b = rng.uniform(0.0, 10.0), t = rng.uniform(0.0, 5.0);
        double lhs = mean(s, lambda, t * a, t * b);
        double rhs = t * mean(s, lambda, a, b);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + rhs));
    }
}

TEST_CASE("mean is nondecreasing in s") {
    Rng rng(20240102);
    const std::vector<ExtReal> chain = {kNegInf,       ExtReal(-5.0),  ExtReal(-1.0),
                                        ExtReal(-1e-7), ExtReal(0.0),  ExtReal(1e-7),
                                        ExtReal(0.5),  ExtReal(1.0),   ExtReal(2.0),
                                        ExtReal(5.0),  kPosInf};
    for (int i = 0; i < 500; ++i) {
        Weight lambda(rng.uniform());
        double a = rng.uniform(0.01, 10.0), b = rng.uniform(0.01, 10.0);
        double prev = -1.0;
        for (const ExtReal& s : chain) {
            double v = mean(s, lambda, a, b);
            CHECK(v >= prev - 1e-12 * (1.0 + std::abs(prev)));
            prev = v;
        }
    }
}

TEST_CASE("mean limit consistency near s = 0") {
    Rng rng(20240103);
    for (int i = 0; i < 500; ++i) {
        Weight lambda(rng.uniform());
        double a = rng.uniform(0.1, 10.0), b = rng.uniform(0.1, 10.0);
        double geo = mean(ExtReal(0.0), lambda, a, b);
        for (double s : {1e-6, -1e-6}) {
            double v = mean(ExtReal(s), lambda, a, b);
            CHECK(std::abs(v - geo) <= 1e-4 * geo);
        }
    }
}

TEST_CASE("holder_check frozen examples") {
    CheckReport unit = holder_check(ExtReal(1.0), ExtReal(2.0), ExtReal(2.0), Weight(0.5), 1.0,
                                    1.0, 1.0, 1.0);
    CHECK(unit.lhs == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(unit.rhs == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(unit.satisfied);

    CheckReport geo = holder_check(ExtReal(0.0), ExtReal(0.0), ExtReal(0.0), Weight(0.3), 2.0,
                                   3.0, 5.0, 7.0);
    CHECK(std::abs(geo.margin) <= 1e-12 * (1.0 + geo.rhs));
    CHECK(geo.satisfied);
}

TEST_CASE("holder_check grid sweep with alpha=1/2, beta=gamma=1") {
    const std::vector<double> grid = {0.1, 0.5, 1.0, 2.0, 10.0};
    for (double a : grid)
        for (double b : grid)
            for (double c : grid)
                for (double d : grid) {
                    CheckReport r = holder_check(ExtReal(0.5), ExtReal(1.0), ExtReal(1.0),
                                                 Weight(0.3), a, b, c, d);
                    CHECK(r.margin >= -1e-12 * (1.0 + r.rhs));
                }
}

TEST_CASE("holder triple validation accepts the lemma's exponent region only") {
    CHECK_NOTHROW(validate_holder_triple(ExtReal(1.0), ExtReal(2.0), ExtReal(2.0)));
    CHECK_NOTHROW(validate_holder_triple(ExtReal(0.0), ExtReal(0.0), ExtReal(0.0)));
    CHECK_NOTHROW(validate_holder_triple(ExtReal(0.0), ExtReal(0.0), ExtReal(2.0)));
    CHECK_NOTHROW(validate_holder_triple(ExtReal(0.5), ExtReal(1.0), ExtReal(1.0)));
    CHECK_NOTHROW(validate_holder_triple(kPosInf, kPosInf, kPosInf));
    CHECK_NOTHROW(validate_holder_triple(kNegInf, kPosInf, kPosInf));
    // cancelling finite reciprocals: only the -inf composite is sound
    CHECK_NOTHROW(validate_holder_triple(kNegInf, ExtReal(2.0), ExtReal(-2.0)));
    CHECK_THROWS_AS(validate_holder_triple(kPosInf, ExtReal(2.0), ExtReal(-2.0)),
                    std::invalid_argument);
    // beta + gamma < 0
    CHECK_THROWS_AS(validate_holder_triple(ExtReal(1.0), ExtReal(-2.0), ExtReal(1.0)),
                    std::invalid_argument);
    // inconsistent reciprocal sum
    CHECK_THROWS_AS(validate_holder_triple(ExtReal(1.0), ExtReal(2.0), ExtReal(3.0)),
                    std::invalid_argument);
}

TEST_CASE("holder counterexample behind the -inf composite rule") {
    // With beta = 2, gamma = -2 the +inf composite fails outright:
    // max(ac, bd) can exceed M_2(a,b) * M_{-2}(c,d).
    double a = 10.0, b = 0.1, c = 1.0, d = 1.0;
    double lhs = mean(kPosInf, Weight(0.5), a * c, b * d);
    double rhs = mean(ExtReal(2.0), Weight(0.5), a, b) * mean(ExtReal(-2.0), Weight(0.5), c, d);
    CHECK(lhs > rhs + 1e-6);
    // while the -inf composite is satisfied on the same data
    CheckReport r = holder_check(kNegInf, ExtReal(2.0), ExtReal(-2.0), Weight(0.5), a, b, c, d);
    CHECK(r.satisfied);
}

TEST_CASE("holder_check randomized admissible tuples including infinite exponents") {
    Rng rng(20240104);
    for (int i = 0; i < 20000; ++i) {
        double lam = rng.uniform();
        double a = rng.uniform(0.0, 10.0), b = rng.uniform(0.0, 10.0);
        double c = rng.uniform(0.0, 10.0), d = rng.uniform(0.0, 10.0);
        CheckReport r;
        switch (rng.index(5)) {
            case 0: {  // finite beta, gamma > 0 with alpha from the reciprocal identity
                double beta = rng.uniform(0.2, 4.0), gamma = rng.uniform(0.2, 4.0);
                double alpha = 1.0 / (1.0 / beta + 1.0 / gamma);
                r = holder_check(ExtReal(alpha), ExtReal(beta), ExtReal(gamma), Weight(lam), a, b,
                                 c, d);
                break;
            }
            case 1:  // geometric everywhere
                r = holder_check(ExtReal(0.0), ExtReal(0.0), ExtReal(0.0), Weight(lam), a, b, c,
                                 d);
                break;
            case 2:  // beta = +inf absorbs: 1/alpha = 1/gamma
                r = holder_check(ExtReal(1.0), kPosInf, ExtReal(1.0), Weight(lam), a, b, c, d);
                break;
            case 3:  // both infinite
                r = holder_check(kPosInf, kPosInf, kPosInf, Weight(lam), a, b, c, d);
                break;
            default: {  // mixed signs with beta + gamma >= 0
                double beta = rng.uniform(1.0, 3.0), gamma = -rng.uniform(0.2, beta);
                double inv = 1.0 / beta + 1.0 / gamma;  // negative
                r = holder_check(ExtReal(1.0 / inv), ExtReal(beta), ExtReal(gamma), Weight(lam),
                                 a, b, c, d);
                break;
            }
        }
        CHECK(r.margin >= -1e-10 * (1.0 + r.rhs));
    }
}
