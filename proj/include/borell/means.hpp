#pragma once

#include <vector>

#include "ext_real.hpp"
#include "report.hpp"

namespace borell {

// Interpolation weight lambda in [0, 1].
class Weight {
public:
    explicit Weight(double lambda) : v_(lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw std::invalid_argument("Weight: lambda must lie in [0, 1]");
    }
    double value() const { return v_; }

private:
    double v_;
};

// Non-empty vector of extended-real exponents.
struct ExponentVector {
    std::vector<ExtReal> entries;

    explicit ExponentVector(std::vector<ExtReal> e) : entries(std::move(e)) {
        if (entries.empty()) throw std::invalid_argument("ExponentVector: empty");
    }
    std::size_t size() const { return entries.size(); }
    const ExtReal& operator[](std::size_t i) const { return entries[i]; }
};

// Weighted power mean M_s^lambda(a, b) on [0, inf)^2, with the limit
// conventions: s = 0 geometric, s = -inf min, s = +inf max; a zero argument
// annihilates the mean for s <= 0 and drops out with its weight for s > 0.
// lambda in {0, 1} returns the surviving argument exactly.
double mean(const ExtReal& s, const Weight& lambda, double a, double b);

// Coordinatewise means of equal-length vectors, one exponent per coordinate.
std::vector<double> mean_vector(const ExponentVector& p, const Weight& lambda,
                                const std::vector<double>& a, const std::vector<double>& b);

// Validated Hoelder exponent triple: beta + gamma >= 0 and
// 1/beta + 1/gamma = 1/alpha under the conventions 1/0 = +inf, 1/(+-inf) = 0.
// When the reciprocals of finite beta = -gamma cancel exactly, the only sound
// composite exponent is alpha = -inf (the +inf reading admits counterexamples);
// with beta = gamma = +inf both infinite alphas are accepted.
void validate_holder_triple(const ExtReal& alpha, const ExtReal& beta, const ExtReal& gamma,
                            double tol = 1e-9);

// Checks M_alpha^lambda(a c, b d) <= M_beta^lambda(a, b) * M_gamma^lambda(c, d).
// Report orientation: lhs is the combined mean, rhs the product; margin = rhs - lhs.
CheckReport holder_check(const ExtReal& alpha, const ExtReal& beta, const ExtReal& gamma,
                         const Weight& lambda, double a, double b, double c, double d,
                         double tolerance = 1e-10);

}  // namespace borell
