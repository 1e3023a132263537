#pragma once

#include <vector>

#include "funcgrid.hpp"
#include "maps.hpp"
#include "report.hpp"

namespace borell {

// Monotone rearrangement T with T# f = g, tabulated at the grid nodes of f
// that carry mass. dts holds the transport derivative f(x)/g(T(x)) where the
// target density is positive, one-sided difference quotients elsewhere.
struct TransportMap {
    std::vector<double> xs, ts, dts;
};

// Both densities must be 1-d with unit mass (|integral - 1| <= 1e-9).
TransportMap monotone_transport(const GridFunction& f, const GridFunction& g);

// Max over interior midpoints of |f(m) - g(T(m)) T'(m)| with T interpolated
// linearly between tabulated nodes; midpoints where g vanishes are skipped.
double pushforward_residual(const GridFunction& f, const GridFunction& g, const TransportMap& map);

struct TransportCertificate {
    CheckReport report;  // lower bound vs Phi(1,1) * integral of f
    double lower_bound;
    std::vector<double> xs, theta, dtheta, rhs;
};

// Certified lower bound for the mass of the phi-image: integrates
// Phi(f(x), g(T(x)) T'(x)) over the tabulated transport samples.
TransportCertificate transport_certificate(const GridFunction& f, const GridFunction& g,
                                           const CoordinateMap& phi, const Combiner& Phi,
                                           double tolerance = 1e-3);

struct NormalizedTriple {
    GridFunction f_tilde, g_tilde;
    double scale;  // Phi(mass f, mass g); the normalized pair has unit mass
};

// 1-d reduction to unit-mass densities: f~(x) = f(c x) Phi(1,0) with
// c = Phi(mass f, 0), and symmetrically for g. Requires Phi(1,0), Phi(0,1) > 0.
NormalizedTriple normalize_triple(const GridFunction& f, const GridFunction& g,
                                  const Combiner& Phi);

// Mass bound when one marginal degenerates to a point y0: the image of
// supp f x {y0} carries at least Phi(1,0) * mass(f).
double degenerate_mass_bound(const GridFunction& f, const CoordinateMap& phi,
                             const Combiner& Phi, double y0);

}  // namespace borell
