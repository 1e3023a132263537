#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "funcgrid.hpp"
#include "maps.hpp"
#include "means.hpp"
#include "report.hpp"

namespace borell {

// Sampling plan for the hypothesis quantifiers: n_xy support pairs, n_scale
// scale tuples per pair drawn log-uniformly from scale_range.
struct HypothesisSampler {
    std::int64_t n_xy = 1000;
    std::int64_t n_scale = 4;
    std::array<double, 2> scale_range{1e-3, 1e3};
    std::uint64_t seed = 1;
};

// Samples the pointwise hypothesis
//   h(phi(x,y)) prod_k (d_x phi_k rho_k + d_y phi_k eta_k) >= Phi(f(x) prod rho, g(y) prod eta)
// over support pairs and scale tuples, with the normalization prod rho_k = 1
// (both sides are 1-homogeneous under joint scaling of (rho, eta)).
CheckReport borell_hypothesis_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h, const CoordinateMap& phi,
                                    const Combiner& Phi, const HypothesisSampler& sampler,
                                    double tolerance = 1e-9);

// integrate(h) >= Phi(integrate(f), integrate(g)).
CheckReport borell_conclusion_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h, const Combiner& Phi,
                                    double tolerance = 1e-3);

// Minimal grid h with h((1-lambda)x + lambda y) >= M_gamma^lambda(f(x), g(y)):
// brute force over node pairs; each combined point raises the value of the
// output cell containing it (boundary points fall to the lower-index cell).
// out_shape overrides the output resolution; empty selects it automatically
// (a lambda-aligned refinement when the input steps match, else the finer of
// the two inputs per axis).
GridFunction sup_convolution_bbl(const GridFunction& f, const GridFunction& g,
                                 const ExtReal& gamma, const Weight& lambda,
                                 std::vector<std::int64_t> out_shape = {});

// Same construction along the curved combination z_k = M_{p_k}^lambda(x_k, y_k),
// for data on [0, inf)^n and p in [0,1]^n.  p identically 1 reduces exactly to
// sup_convolution_bbl.
GridFunction sup_convolution_nonlinear(const GridFunction& f, const GridFunction& g,
                                       const ExponentVector& p, const ExtReal& gamma,
                                       const Weight& lambda,
                                       std::vector<std::int64_t> out_shape = {});

// (sum_i 1/p_i + 1/gamma)^{-1} with 1/0 = +inf and 1/(+-inf) = 0; gamma = 0 and
// the boundary sum 0 resolve by continuity (to 0 and -inf respectively).
// Requires p in [0,1]^n and gamma >= -(sum_i 1/p_i)^{-1}.
ExtReal conclusion_exponent(const ExponentVector& p, const ExtReal& gamma);

// Induction step as a testable reduction: last-coordinate marginals F, G, H
// must satisfy the inherited 1-d hypothesis with the last phi component.
CheckReport tensorize_reduce(const GridFunction& f, const GridFunction& g,
                             const GridFunction& h, const CoordinateMap& phi,
                             const Combiner& Phi, const HypothesisSampler& sampler,
                             double tolerance = 1e-9);

}  // namespace borell
