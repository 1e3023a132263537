#pragma once

#include <cstdint>
#include <vector>

#include "bodies.hpp"
#include "funcgrid.hpp"
#include "means.hpp"
#include "report.hpp"

namespace borell {

// Measure with an alpha-concave density on a grid.  The declared concavity
// class is spot-validated at construction (sampled pairs, fixed seed) and
// trusted afterwards; a symmetric measure must have an even density on a
// symmetric box.
class DensityMeasure {
public:
    DensityMeasure(GridFunction density, ExtReal alpha, bool symmetric,
                   double alpha_tolerance = 2e-3);

    const GridFunction& density() const { return density_; }
    const ExtReal& alpha() const { return alpha_; }
    bool symmetric() const { return symmetric_; }

private:
    GridFunction density_;
    ExtReal alpha_;
    bool symmetric_;
};

// Sum of density values times node cell volumes over nodes inside B.  The
// density grid must cover B's bounding box.
double measure_of_body(const DensityMeasure& mu, const SupportBody& B);

// Lebesgue volume of { node in B : psi(node) >= t } for each threshold,
// using the same node cells as measure_of_body (exact discrete layer cake).
std::vector<double> levelset_profile(const DensityMeasure& mu, const SupportBody& B,
                                     const std::vector<double>& thresholds);

// (n/p + 1/alpha)^{-1} with the reciprocal conventions 1/0 = +inf, 1/inf = 0;
// 0 by continuity when p = 0 or alpha = 0.  Requires p in [0,1] and
// alpha >= -p/n.
ExtReal composite_exponent(const ExtReal& alpha, const ExtReal& p, std::size_t n);

// mu((1-lambda) K (+)_p lambda L) >= M_{(n/p+1/alpha)^{-1}}^lambda(mu(K), mu(L)).
CheckReport lp_bm_check(const DensityMeasure& mu, const SupportBody& K, const SupportBody& L,
                        const Weight& lambda, const ExtReal& p, double tolerance = 1e-3);

// The level-set reduction run as computation: builds superlevel profiles of K,
// L and the combined body; checks the pointwise profile hypothesis
// h(M_alpha^lambda(t,s)) >= M_{p/n}^lambda(f(t), g(s)), the layer-cake totals
// against measure_of_body (1 percent), and the 1-d corollary conclusion on the
// integrated profiles.  The reported margin is the worst of the three.
CheckReport equiv_pipeline_check(const DensityMeasure& mu, const SupportBody& K,
                                 const SupportBody& L, const Weight& lambda, const ExtReal& p,
                                 std::int64_t n_thresholds, double tolerance = 1e-3);

// Membership implication sampled on the (+)_p body: every sampled member must
// belong to the p = 1 (Minkowski) combination.  Reports the violation count.
CheckReport inclusion_chain_check(const SupportBody& K0, const SupportBody& K1,
                                  const Weight& lambda, const ExtReal& p, std::int64_t n_points,
                                  std::uint64_t seed);

// Exact planar L_p Brunn-Minkowski check for Lebesgue measure: the combined
// body is evaluated by halfplane intersection and shoelace area, the right
// side from the exact polygon areas.  p = 0 is the log-Minkowski case.
CheckReport planar_lp_exact_check(const Polygon2D& K, const Polygon2D& L, const Weight& lambda,
                                  const ExtReal& p, std::int64_t m_directions = 720,
                                  double tolerance = 1e-9);

// Seeded sweep of planar_lp_exact_check over random symmetric polygon pairs.
std::vector<CheckReport> planar_lp_sweep(std::int64_t trials, std::uint64_t seed,
                                         const ExtReal& p, const Weight& lambda,
                                         std::int64_t m_directions = 720);

}  // namespace borell
