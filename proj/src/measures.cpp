#include "borell/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "borell/rng.hpp"

namespace borell {

namespace {

constexpr std::uint64_t kAlphaValidationSeed = 987654321ULL;
constexpr std::int64_t kAlphaValidationPairs = 10000;
// Same membership slack as membership(): <x,u> <= h(u) + kSlack.
constexpr double kSlack = 1e-12;

std::size_t psi_stride(const std::vector<std::int64_t>& shape, std::size_t axis) {
    std::size_t s = 1;
    for (std::size_t k = shape.size(); k-- > axis + 1;) s *= static_cast<std::size_t>(shape[k]);
    return s;
}

void check_symmetry(const GridFunction& psi) {
    const std::size_t n = psi.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const double scale = std::fabs(psi.box_min()[k]) + std::fabs(psi.box_max()[k]) + 1.0;
        if (std::fabs(psi.box_min()[k] + psi.box_max()[k]) > 1e-9 * scale)
            throw std::invalid_argument("symmetric measure needs a symmetric box");
    }
    const auto& shape = psi.shape();
    const auto& vals = psi.values();
    const double tol = 1e-9 * std::max(psi.max_value(), 1e-300);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::size_t rest = i, rev = 0;
        for (std::size_t k = n; k-- > 0;) {
            const std::int64_t j = static_cast<std::int64_t>(rest % shape[k]);
            rest /= shape[k];
            // accumulate reversed index with the axis strides rebuilt in order
            rev += static_cast<std::size_t>(shape[k] - 1 - j) * psi_stride(shape, k);
        }
        if (std::fabs(vals[i] - vals[rev]) > tol)
            throw std::invalid_argument("density is not even on the grid");
    }
}

void require_coverage(const GridFunction& psi, const SupportBody& B) {
    if (psi.dim() != B.grid().dim())
        throw std::invalid_argument("density and body dimensions differ");
    const std::vector<double> w = bounding_halfwidths(B);
    for (std::size_t k = 0; k < psi.dim(); ++k) {
        if (psi.box_min()[k] > -w[k] + 1e-12 || psi.box_max()[k] < w[k] - 1e-12)
            throw std::domain_error("density grid does not cover the body");
    }
}

// Visit (flat index, value, cell volume) of every grid node inside B.  The
// planar path solves each grid row for its admissible interval instead of
// testing every node against every halfplane.
template <class Fn>
void scan_body(const GridFunction& psi, const SupportBody& B, Fn&& visit) {
    const DirectionGrid& grid = B.grid();
    const std::size_t n = psi.dim();
    if (n == 2) {
        const std::int64_t n0 = psi.shape()[0], n1 = psi.shape()[1];
        const double y0 = psi.box_min()[1], step1 = psi.step(1);
        for (std::int64_t i0 = 0; i0 < n0; ++i0) {
            const double x = psi.node(0, i0);
            double lo = psi.box_min()[1], hi = psi.box_max()[1];
            bool feasible = true;
            for (std::size_t d = 0; d < grid.size(); ++d) {
                const auto& u = grid.direction(d);
                const double c = B.values()[d] + kSlack - u[0] * x;
                if (u[1] > 1e-15) {
                    hi = std::min(hi, c / u[1]);
                } else if (u[1] < -1e-15) {
                    lo = std::max(lo, c / u[1]);
                } else if (c < 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible || lo > hi) continue;
            std::int64_t jlo = static_cast<std::int64_t>(std::ceil((lo - y0) / step1 - 1e-9));
            std::int64_t jhi = static_cast<std::int64_t>(std::floor((hi - y0) / step1 + 1e-9));
            jlo = std::max<std::int64_t>(jlo, 0);
            jhi = std::min<std::int64_t>(jhi, n1 - 1);
            const double w0 = psi.axis_weight(0, i0);
            const std::size_t base = static_cast<std::size_t>(i0) * static_cast<std::size_t>(n1);
            for (std::int64_t j = jlo; j <= jhi; ++j)
                visit(base + static_cast<std::size_t>(j), psi.values()[base + j],
                      w0 * psi.axis_weight(1, j));
        }
        return;
    }
    std::vector<std::int64_t> idx(n, 0);
    std::vector<double> x(n);
    const std::size_t total = psi.values().size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        double w = 1.0;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = static_cast<std::int64_t>(rest % psi.shape()[k]);
            rest /= psi.shape()[k];
            x[k] = psi.node(k, idx[k]);
            w *= psi.axis_weight(k, idx[k]);
        }
        if (membership(x, B)) visit(flat, psi.values()[flat], w);
    }
}

// Superlevel volumes of the density restricted to a body, queryable at any
// threshold: node volumes sorted by decreasing density value, prefix-summed.
struct BodyProfile {
    std::vector<double> psi;     // descending
    std::vector<double> cumvol;  // matching prefix volumes
    double mass = 0.0;

    double vol_at(double t) const {
        const auto it = std::lower_bound(psi.begin(), psi.end(), t,
                                         [](double elem, double thr) { return elem >= thr; });
        const std::size_t k = static_cast<std::size_t>(it - psi.begin());
        return k == 0 ? 0.0 : cumvol[k - 1];
    }
};

BodyProfile body_profile(const GridFunction& psi, const SupportBody& B) {
    std::vector<std::pair<double, double>> nodes;
    long double mass = 0.0L;
    scan_body(psi, B, [&](std::size_t, double v, double w) {
        nodes.emplace_back(v, w);
        mass += static_cast<long double>(v) * w;
    });
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    BodyProfile prof;
    prof.psi.reserve(nodes.size());
    prof.cumvol.reserve(nodes.size());
    long double cv = 0.0L;
    for (const auto& [v, w] : nodes) {
        prof.psi.push_back(v);
        cv += w;
        prof.cumvol.push_back(static_cast<double>(cv));
    }
    prof.mass = static_cast<double>(mass);
    return prof;
}

// Trapezoid layer-cake total over uniform thresholds t_1..t_m plus the t = 0
// endpoint (spacing t_1).
double layer_cake_total(const BodyProfile& prof, const std::vector<double>& thresholds) {
    const double dt = thresholds[0];
    long double acc = 0.5L * prof.vol_at(0.0);
    for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) acc += prof.vol_at(thresholds[i]);
    acc += 0.5L * prof.vol_at(thresholds.back());
    return static_cast<double>(acc * dt);
}

}  // namespace

DensityMeasure::DensityMeasure(GridFunction density, ExtReal alpha, bool symmetric,
                               double alpha_tolerance)
    : density_(std::move(density)), alpha_(alpha), symmetric_(symmetric) {
    if (symmetric_) check_symmetry(density_);
    const CheckReport rep = alpha_concavity_check(density_, alpha_, kAlphaValidationPairs,
                                                  kAlphaValidationSeed, alpha_tolerance);
    if (!rep.satisfied)
        throw std::invalid_argument("density fails declared concavity class (worst margin " +
                                    std::to_string(rep.margin) + " at " + rep.worst_witness + ")");
}

double measure_of_body(const DensityMeasure& mu, const SupportBody& B) {
    require_coverage(mu.density(), B);
    long double acc = 0.0L;
    scan_body(mu.density(), B,
              [&](std::size_t, double v, double w) { acc += static_cast<long double>(v) * w; });
    return static_cast<double>(acc);
}

std::vector<double> levelset_profile(const DensityMeasure& mu, const SupportBody& B,
                                     const std::vector<double>& thresholds) {
    require_coverage(mu.density(), B);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0) || (i > 0 && thresholds[i] <= thresholds[i - 1]))
            throw std::invalid_argument("thresholds must be positive and increasing");
    }
    const BodyProfile prof = body_profile(mu.density(), B);
    std::vector<double> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) out.push_back(prof.vol_at(t));
    return out;
}

ExtReal composite_exponent(const ExtReal& alpha, const ExtReal& p, std::size_t n) {
    if (!p.finite() || p.value() < 0.0 || p.value() > 1.0)
        throw std::invalid_argument("p must lie in [0,1]");
    const double bound = -p.value() / static_cast<double>(n);
    if (alpha.is_neg_inf() || (alpha.finite() && alpha.value() < bound - 1e-12))
        throw std::invalid_argument("alpha below -p/n");
    if (p.value() == 0.0 || (alpha.finite() && alpha.value() == 0.0)) return ExtReal(0.0);
    const long double rp = static_cast<long double>(n) / p.value();
    const long double ra = alpha.is_pos_inf() ? 0.0L : 1.0L / alpha.value();
    const long double sum = rp + ra;
    if (sum == 0.0L) return ExtReal::neg_inf();  // boundary alpha = -p/n
    return ExtReal(static_cast<double>(1.0L / sum));
}

namespace {

const char* equiv_tag(const ExtReal& alpha) {
    return alpha > ExtReal(1.0) ? " outside-equiv-hypothesis" : "";
}

}  // namespace

CheckReport lp_bm_check(const DensityMeasure& mu, const SupportBody& K, const SupportBody& L,
                        const Weight& lambda, const ExtReal& p, double tolerance) {
    if (!mu.symmetric())
        throw std::invalid_argument("lp_bm_check needs a symmetric measure");
    const std::size_t n = mu.density().dim();
    const ExtReal exponent = composite_exponent(mu.alpha(), p, n);

    const SupportBody combined = p_combination(lambda, p, K, L);
    const double lhs = measure_of_body(mu, combined);
    const double mk = measure_of_body(mu, K);
    const double ml = measure_of_body(mu, L);
    const double rhs = mean(exponent, lambda, mk, ml);

    char witness[192];
    std::snprintf(witness, sizeof(witness), "muK=%.12g muL=%.12g exponent=%s alpha=%s%s", mk, ml,
                  format_ext(exponent).c_str(), format_ext(mu.alpha()).c_str(),
                  equiv_tag(mu.alpha()));
    return make_report(lhs, rhs, lhs - rhs, tolerance, witness,
                       static_cast<std::int64_t>(mu.density().values().size()));
}

CheckReport equiv_pipeline_check(const DensityMeasure& mu, const SupportBody& K,
                                 const SupportBody& L, const Weight& lambda, const ExtReal& p,
                                 std::int64_t n_thresholds, double tolerance) {
    if (!mu.symmetric())
        throw std::invalid_argument("pipeline needs a symmetric measure");
    if (!mu.alpha().finite())
        throw std::invalid_argument("pipeline needs finite alpha");
    if (n_thresholds < 2)
        throw std::invalid_argument("pipeline needs at least 2 thresholds");
    const std::size_t n = mu.density().dim();
    const ExtReal exponent = composite_exponent(mu.alpha(), p, n);
    const ExtReal profile_exponent(p.value() / static_cast<double>(n));

    const SupportBody combined = p_combination(lambda, p, K, L);
    require_coverage(mu.density(), K);
    require_coverage(mu.density(), L);
    require_coverage(mu.density(), combined);
    const std::vector<double> ts = superlevel_threshold_values(mu.density(), n_thresholds);
    const BodyProfile pk = body_profile(mu.density(), K);
    const BodyProfile pl = body_profile(mu.density(), L);
    const BodyProfile pc = body_profile(mu.density(), combined);

    double worst_pointwise = std::numeric_limits<double>::infinity();
    double worst_t = 0.0, worst_s = 0.0;
    for (double t : ts) {
        const double ft = pk.vol_at(t);
        for (double s : ts) {
            const double gs = pl.vol_at(s);
            const double hv = pc.vol_at(mean(mu.alpha(), lambda, t, s));
            const double margin = hv - mean(profile_exponent, lambda, ft, gs);
            if (margin < worst_pointwise) {
                worst_pointwise = margin;
                worst_t = t;
                worst_s = s;
            }
        }
    }

    const double lck = layer_cake_total(pk, ts);
    const double lcl = layer_cake_total(pl, ts);
    const double lcc = layer_cake_total(pc, ts);
    double relerr = 0.0;
    relerr = std::max(relerr, std::fabs(lck - pk.mass) / std::max(pk.mass, 1e-300));
    relerr = std::max(relerr, std::fabs(lcl - pl.mass) / std::max(pl.mass, 1e-300));
    relerr = std::max(relerr, std::fabs(lcc - pc.mass) / std::max(pc.mass, 1e-300));

    const double conclusion_rhs = mean(exponent, lambda, lck, lcl);
    const double conclusion_margin = lcc - conclusion_rhs;

    const double margin =
        std::min({worst_pointwise, conclusion_margin, 0.01 - relerr});
    char witness[224];
    std::snprintf(witness, sizeof(witness),
                  "pointwise=%.9g at t=%.9g s=%.9g layercake_relerr=%.3g conclusion=%.9g%s",
                  worst_pointwise, worst_t, worst_s, relerr, conclusion_margin,
                  equiv_tag(mu.alpha()));
    return make_report(lcc, conclusion_rhs, margin, tolerance, witness,
                       n_thresholds * n_thresholds);
}

CheckReport inclusion_chain_check(const SupportBody& K0, const SupportBody& K1,
                                  const Weight& lambda, const ExtReal& p, std::int64_t n_points,
                                  std::uint64_t seed) {
    if (n_points < 1)
        throw std::invalid_argument("inclusion check needs n_points >= 1");
    const SupportBody bp = p_combination(lambda, p, K0, K1);
    const SupportBody b1 = p_combination(lambda, ExtReal(1.0), K0, K1);
    const std::vector<double> w = bounding_halfwidths(bp);
    const std::size_t n = bp.grid().dim();

    Rng rng(seed);
    std::vector<double> x(n);
    std::int64_t members = 0, violations = 0;
    char witness[128];
    std::snprintf(witness, sizeof(witness), "none");
    const std::int64_t cap = 1000 * n_points;
    for (std::int64_t attempt = 0; attempt < cap && members < n_points; ++attempt) {
        for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform(-w[k], w[k]);
        if (!membership(x, bp)) continue;
        ++members;
        if (!membership(x, b1)) {
            ++violations;
            if (violations == 1)
                std::snprintf(witness, sizeof(witness), "x0=%.12g x1=%.12g", x[0],
                              n > 1 ? x[1] : 0.0);
        }
    }
    if (members < n_points)
        throw std::runtime_error("membership sampling cap exhausted");
    // 0.0, not -0.0, so the zero-violation margin prints as a plain zero
    const double margin = violations == 0 ? 0.0 : -static_cast<double>(violations);
    return make_report(static_cast<double>(violations), 0.0, margin, 0.5, witness, members);
}

CheckReport planar_lp_exact_check(const Polygon2D& K, const Polygon2D& L, const Weight& lambda,
                                  const ExtReal& p, std::int64_t m_directions, double tolerance) {
    if (!p.finite() || p.value() < 0.0 || p.value() > 1.0)
        throw std::invalid_argument("planar_lp_exact_check: p must lie in [0, 1]");
    const auto grid = DirectionGrid::planar(m_directions);
    const double area_k = polygon_area(K);
    const double area_l = polygon_area(L);

    // Constraint directions: the m-grid plus both polygons' edge normals.  For
    // p <= 1 the combined support is concave-admissible between its kinks, so
    // the kink directions carry the whole body and the intersection is exact
    // up to rounding instead of an O(1/m) superset.
    std::vector<std::array<double, 2>> dirs;
    dirs.reserve(grid->size() + K.vertices.size() + L.vertices.size());
    for (std::size_t i = 0; i < grid->size(); ++i)
        dirs.push_back({grid->direction(i)[0], grid->direction(i)[1]});
    auto edge_normals = [&dirs](const Polygon2D& P) {
        const std::size_t n = P.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = P.vertices[i];
            const auto& b = P.vertices[(i + 1) % n];
            const double ex = b[0] - a[0], ey = b[1] - a[1];
            const double nrm = std::hypot(ex, ey);
            dirs.push_back({ey / nrm, -ex / nrm});  // outward for CCW order
        }
    };
    edge_normals(K);
    edge_normals(L);

    auto support = [](const Polygon2D& P, const std::array<double, 2>& u) {
        // max over {+-v}: keeps h(u) = h(-u) exact for near-symmetric input
        double best = 0.0;
        for (const auto& v : P.vertices)
            best = std::max(best, std::fabs(v[0] * u[0] + v[1] * u[1]));
        return best;
    };
    std::vector<std::array<double, 3>> rows;
    rows.reserve(dirs.size());
    for (const auto& u : dirs)
        rows.push_back({u[0], u[1], mean(p, lambda, support(K, u), support(L, u))});

    const double lhs = polygon_area(halfplane_intersection(rows));
    const ExtReal exponent = composite_exponent(ExtReal::pos_inf(), p, 2);
    const double rhs = mean(exponent, lambda, area_k, area_l);

    char witness[192];
    std::snprintf(witness, sizeof(witness), "areaK=%.12g areaL=%.12g p=%s m=%lld", area_k, area_l,
                  format_ext(p).c_str(), static_cast<long long>(m_directions));
    return make_report(lhs, rhs, lhs - rhs, tolerance, witness,
                       static_cast<std::int64_t>(rows.size()));
}

std::vector<CheckReport> planar_lp_sweep(std::int64_t trials, std::uint64_t seed, const ExtReal& p,
                                         const Weight& lambda, std::int64_t m_directions) {
    if (trials < 1)
        throw std::invalid_argument("sweep needs at least one trial");
    std::vector<CheckReport> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (std::int64_t i = 0; i < trials; ++i) {
        const Polygon2D K =
            random_symmetric_polygon(5 + (i % 6), Rng::derive(seed, 2 * static_cast<std::uint64_t>(i)));
        const Polygon2D L = random_symmetric_polygon(
            5 + ((i + 3) % 6), Rng::derive(seed, 2 * static_cast<std::uint64_t>(i) + 1));
        out.push_back(planar_lp_exact_check(K, L, lambda, p, m_directions));
    }
    return out;
}

}  // namespace borell
