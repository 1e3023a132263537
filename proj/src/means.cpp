#include "borell/means.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace borell {

namespace {

void require_nonneg(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("mean: arguments must be finite and >= 0");
}

}  // namespace

double mean(const ExtReal& s, const Weight& lambda, double a, double b) {
    require_nonneg(a, b);
    const double l = lambda.value();
    if (l == 0.0) return a;
    if (l == 1.0) return b;
    if (s.is_pos_inf()) return std::max(a, b);
    if (s.is_neg_inf()) return std::min(a, b);

    const double sv = s.value();
    if (sv == 0.0) {
        if (a == 0.0 || b == 0.0) return 0.0;
        if (a == b) return a;
        return std::exp((1.0 - l) * std::log(a) + l * std::log(b));
    }
    if (sv < 0.0) {
        if (a == 0.0 || b == 0.0) return 0.0;
    } else {
        if (a == 0.0 && b == 0.0) return 0.0;
        // Zero argument drops out with its weight: ((1-l) a^s)^(1/s) etc.
        if (a == 0.0) return std::pow(l, 1.0 / sv) * b;
        if (b == 0.0) return std::pow(1.0 - l, 1.0 / sv) * a;
    }
    if (a == b) return a;

    if (std::fabs(sv) < 1e-4) {
        // Exponential-of-weighted-log evaluation: a^s = 1 + expm1(s log a) keeps
        // the near-geometric regime free of catastrophic cancellation.  The
        // plain pow form loses ~1e-16/|s| relative accuracy, which already
        // breaks monotonicity-in-s checks at |s| ~ 1e-7.
        double w = (1.0 - l) * std::expm1(sv * std::log(a)) + l * std::expm1(sv * std::log(b));
        return std::exp(std::log1p(w) / sv);
    }

    // Factor out the dominant argument so pow never overflows and homogeneity
    // holds to rounding for large |s|.
    const double scale = sv > 0.0 ? std::max(a, b) : std::min(a, b);
    const double ra = a / scale, rb = b / scale;
    return scale * std::pow((1.0 - l) * std::pow(ra, sv) + l * std::pow(rb, sv), 1.0 / sv);
}

std::vector<double> mean_vector(const ExponentVector& p, const Weight& lambda,
                                const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() != p.size())
        throw std::invalid_argument("mean_vector: length mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mean(p[i], lambda, a[i], b[i]);
    return out;
}

void validate_holder_triple(const ExtReal& alpha, const ExtReal& beta, const ExtReal& gamma,
                            double tol) {
    ext_add(beta, gamma);  // rejects the ill-defined (+inf, -inf) pairing
    if (!(ext_add(beta, gamma) >= ExtReal(0.0)))
        throw std::invalid_argument("holder: beta + gamma must be >= 0");

    const ExtReal rb = recip(beta), rg = recip(gamma);
    // rb, rg are never -inf, so the sum below is well-defined.
    if (rb.is_pos_inf() || rg.is_pos_inf()) {
        if (!recip(alpha).is_pos_inf() && !(rb.is_pos_inf() && rg.is_pos_inf()))
            throw std::invalid_argument("holder: 1/beta + 1/gamma = +inf requires alpha = 0");
        if (rb.is_pos_inf() && rg.is_pos_inf() && !(alpha == ExtReal(0.0)))
            throw std::invalid_argument("holder: beta = gamma = 0 requires alpha = 0");
        return;
    }
    const double sum = rb.value() + rg.value();
    if (sum == 0.0) {
        const bool both_infinite_exponents = !beta.finite() && !gamma.finite();
        if (both_infinite_exponents) {
            if (alpha.finite())
                throw std::invalid_argument("holder: beta = gamma = +inf requires infinite alpha");
            return;
        }
        // Finite beta = -gamma: the composite exponent degenerates to -inf.
        if (!alpha.is_neg_inf())
            throw std::invalid_argument(
                "holder: reciprocals cancel (beta = -gamma); only alpha = -inf is valid");
        return;
    }
    const ExtReal ra = recip(alpha);
    if (!ra.finite())
        throw std::invalid_argument("holder: 1/alpha finite but exponents give infinite sum");
    if (std::fabs(ra.value() - sum) > tol)
        throw std::invalid_argument("holder: 1/beta + 1/gamma != 1/alpha");
}

CheckReport holder_check(const ExtReal& alpha, const ExtReal& beta, const ExtReal& gamma,
                         const Weight& lambda, double a, double b, double c, double d,
                         double tolerance) {
    validate_holder_triple(alpha, beta, gamma);
    require_nonneg(a, b);
    require_nonneg(c, d);

    const double lhs = mean(alpha, lambda, a * c, b * d);
    const double rhs = mean(beta, lambda, a, b) * mean(gamma, lambda, c, d);
    const double margin = rhs - lhs;

    char witness[160];
    std::snprintf(witness, sizeof witness, "a=%.12g b=%.12g c=%.12g d=%.12g lambda=%.12g",
                  a, b, c, d, lambda.value());
    return make_report(lhs, rhs, margin, tolerance, witness, 1);
}

}  // namespace borell
