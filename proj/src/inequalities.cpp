#include "borell/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "borell/rng.hpp"

namespace borell {

namespace {

void validate_sampler(const HypothesisSampler& s) {
    if (s.n_xy < 1 || s.n_scale < 1)
        throw std::invalid_argument("sampler counts must be >= 1");
    if (!(s.scale_range[0] > 0.0) || !(s.scale_range[1] > s.scale_range[0]))
        throw std::invalid_argument("sampler scale range must be positive and increasing");
}

// Uniform point of the box with fn > supp_eps, by rejection.
std::vector<double> sample_support(const GridFunction& fn, Rng& rng) {
    std::vector<double> x(fn.dim());
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (std::size_t k = 0; k < fn.dim(); ++k)
            x[k] = rng.uniform(fn.box_min()[k], fn.box_max()[k]);
        if (fn.evaluate(x) > fn.supp_eps()) return x;
    }
    throw std::invalid_argument("function support too sparse to sample");
}

std::vector<std::int64_t> decode(std::int64_t flat, const std::vector<std::int64_t>& shape) {
    std::vector<std::int64_t> idx(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    return idx;
}

}  // namespace

CheckReport borell_hypothesis_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h, const CoordinateMap& phi,
                                    const Combiner& Phi, const HypothesisSampler& sampler,
                                    double tolerance) {
    const std::size_t n = f.dim();
    if (g.dim() != n || h.dim() != n)
        throw std::invalid_argument("hypothesis check needs equal dimensions");
    if (phi.components() != 1 && phi.components() != n)
        throw std::invalid_argument("coordinate map does not match dimension");
    validate_sampler(sampler);

    Rng rng(sampler.seed);
    double worst = std::numeric_limits<double>::infinity();
    char witness[160];
    std::snprintf(witness, sizeof(witness), "no samples");

    std::vector<double> z(n), rho(n), eta(n);
    const double log_lo = std::log(sampler.scale_range[0]);
    const double log_hi = std::log(sampler.scale_range[1]);
    for (std::int64_t pair = 0; pair < sampler.n_xy; ++pair) {
        const std::vector<double> x = sample_support(f, rng);
        const std::vector<double> y = sample_support(g, rng);
        const double fv = f.evaluate(x);
        const double gv = g.evaluate(y);
        for (std::size_t k = 0; k < n; ++k)
            z[k] = phi.component(k).value(x[k], y[k]);
        const double hv = h.evaluate(z);

        for (std::int64_t rep = 0; rep < sampler.n_scale; ++rep) {
            double log_mean = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                rho[k] = rng.uniform(log_lo, log_hi);
                log_mean += rho[k];
            }
            log_mean /= static_cast<double>(n);
            double eta_prod = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                rho[k] = std::exp(rho[k] - log_mean);  // prod rho_k = 1
                eta[k] = std::exp(rng.uniform(log_lo, log_hi));
                eta_prod *= eta[k];
            }
            double jac = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                const ScalarMap& comp = phi.component(k);
                jac *= comp.dx(x[k], y[k]) * rho[k] + comp.dy(x[k], y[k]) * eta[k];
            }
            const double lhs = hv * jac;
            const double rhs = Phi(fv, gv * eta_prod);
            const double margin = lhs - rhs;
            if (margin < worst) {
                worst = margin;
                std::snprintf(witness, sizeof(witness),
                              "x0=%.9g y0=%.9g rho0=%.9g eta0=%.9g lhs=%.9g rhs=%.9g", x[0], y[0],
                              rho[0], eta[0], lhs, rhs);
            }
        }
    }
    const std::int64_t total = sampler.n_xy * sampler.n_scale;
    // lhs/rhs fields carry the worst sample's sides only through the witness;
    // the headline numbers are the worst margin against zero.
    return make_report(worst, 0.0, worst, tolerance, witness, total);
}

CheckReport borell_conclusion_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h, const Combiner& Phi,
                                    double tolerance) {
    if (g.dim() != f.dim() || h.dim() != f.dim())
        throw std::invalid_argument("conclusion check needs equal dimensions");
    const double mf = f.integrate();
    const double mg = g.integrate();
    const double lhs = h.integrate();
    const double rhs = Phi(mf, mg);
    char witness[128];
    std::snprintf(witness, sizeof(witness), "mass_f=%.12g mass_g=%.12g mass_h=%.12g", mf, mg, lhs);
    return make_report(lhs, rhs, lhs - rhs, tolerance, witness, 1);
}

namespace {

struct CombineGrid {
    std::vector<double> zmin, zstep;
    std::vector<std::int64_t> shape;
    std::vector<double> values;
};

// Output resolution: explicit request, else a lambda-aligned common refinement
// when the input steps agree (combined points then land exactly on nodes),
// else the finer input resolution.
std::vector<std::int64_t> choose_shape(const GridFunction& f, const GridFunction& g,
                                       double lambda, bool aligned_family,
                                       std::vector<std::int64_t> requested) {
    const std::size_t n = f.dim();
    if (!requested.empty()) {
        if (requested.size() != n)
            throw std::invalid_argument("output shape dimension mismatch");
        for (std::int64_t s : requested)
            if (s < 2) throw std::invalid_argument("output shape entries must be >= 2");
        return requested;
    }
    std::vector<std::int64_t> shape(n);
    std::int64_t q = 0, a = 0;
    if (aligned_family) {
        for (std::int64_t cand = 2; cand <= 8; ++cand) {
            const double la = lambda * static_cast<double>(cand);
            if (std::fabs(la - std::llround(la)) <= 1e-9) {
                q = cand;
                a = std::llround(la);
                break;
            }
        }
    }
    long double total = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t nf = f.shape()[k], ng = g.shape()[k];
        shape[k] = std::max(nf, ng);
        if (q > 0 && std::fabs(f.step(k) - g.step(k)) <= 1e-12 * f.step(k))
            shape[k] = (q - a) * (nf - 1) + a * (ng - 1) + 1;
        total *= static_cast<long double>(shape[k]);
    }
    if (total > static_cast<long double>(1 << 23))
        for (std::size_t k = 0; k < n; ++k) shape[k] = std::max(f.shape()[k], g.shape()[k]);
    return shape;
}

GridFunction finish_combined(CombineGrid& out) {
    std::vector<double> zmax(out.zmin.size());
    for (std::size_t k = 0; k < out.zmin.size(); ++k)
        zmax[k] = out.zmin[k] + out.zstep[k] * static_cast<double>(out.shape[k] - 1);
    return GridFunction(out.zmin, zmax, out.shape, std::move(out.values));
}

}  // namespace

GridFunction sup_convolution_bbl(const GridFunction& f, const GridFunction& g,
                                 const ExtReal& gamma, const Weight& lambda,
                                 std::vector<std::int64_t> out_shape) {
    const std::size_t n = f.dim();
    if (g.dim() != n)
        throw std::invalid_argument("sup-convolution needs equal dimensions");
    if (gamma.is_neg_inf() ||
        (gamma.finite() && gamma.value() < -1.0 / static_cast<double>(n) - 1e-12))
        throw std::invalid_argument("sup-convolution needs gamma >= -1/n");
    const double l = lambda.value();
    if (l == 0.0) return f;
    if (l == 1.0) return g;

    CombineGrid out;
    out.shape = choose_shape(f, g, l, true, std::move(out_shape));
    out.zmin.resize(n);
    out.zstep.resize(n);
    std::int64_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        out.zmin[k] = (1.0 - l) * f.box_min()[k] + l * g.box_min()[k];
        const double zmax = (1.0 - l) * f.box_max()[k] + l * g.box_max()[k];
        out.zstep[k] = (zmax - out.zmin[k]) / static_cast<double>(out.shape[k] - 1);
        total *= out.shape[k];
    }
    out.values.assign(total, 0.0);

    // Per-node combined-coordinate contributions, flattened by axis.
    const std::int64_t nf = static_cast<std::int64_t>(f.values().size());
    const std::int64_t ng = static_cast<std::int64_t>(g.values().size());
    std::vector<std::vector<double>> fpart(nf), gpart(ng);
    for (std::int64_t i = 0; i < nf; ++i) {
        const auto idx = decode(i, f.shape());
        fpart[i].resize(n);
        for (std::size_t k = 0; k < n; ++k) fpart[i][k] = (1.0 - l) * f.node(k, idx[k]);
    }
    for (std::int64_t j = 0; j < ng; ++j) {
        const auto idx = decode(j, g.shape());
        gpart[j].resize(n);
        for (std::size_t k = 0; k < n; ++k) gpart[j][k] = l * g.node(k, idx[k]);
    }

    const bool positive_gamma = gamma.is_pos_inf() || (gamma.finite() && gamma.value() > 0.0);
    const Weight w(l);
    for (std::int64_t i = 0; i < nf; ++i) {
        const double fv = f.values()[i];
        if (!positive_gamma && fv == 0.0) continue;
        for (std::int64_t j = 0; j < ng; ++j) {
            const double gv = g.values()[j];
            if (positive_gamma ? (fv == 0.0 && gv == 0.0) : (gv == 0.0)) continue;
            const double val = mean(gamma, w, fv, gv);
            if (val == 0.0) continue;
            std::int64_t cell = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double r = (fpart[i][k] + gpart[j][k] - out.zmin[k]) / out.zstep[k];
                std::int64_t c = static_cast<std::int64_t>(std::ceil(r - 0.5));
                c = std::clamp<std::int64_t>(c, 0, out.shape[k] - 1);
                cell = cell * out.shape[k] + c;
            }
            if (val > out.values[cell]) out.values[cell] = val;
        }
    }
    return finish_combined(out);
}

GridFunction sup_convolution_nonlinear(const GridFunction& f, const GridFunction& g,
                                       const ExponentVector& p, const ExtReal& gamma,
                                       const Weight& lambda,
                                       std::vector<std::int64_t> out_shape) {
    const std::size_t n = f.dim();
    if (g.dim() != n)
        throw std::invalid_argument("sup-convolution needs equal dimensions");
    if (p.entries.size() != n && p.entries.size() != 1)
        throw std::invalid_argument("exponent vector does not match dimension");
    auto p_at = [&](std::size_t k) -> const ExtReal& {
        return p.entries.size() == 1 ? p.entries[0] : p.entries[k];
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (f.box_min()[k] < -1e-15 || g.box_min()[k] < -1e-15)
            throw std::invalid_argument("nonlinear sup-convolution needs data on [0, inf)^n");
    }
    conclusion_exponent(p, gamma);  // validates p in [0,1]^n and gamma admissible

    bool all_one = true;
    for (std::size_t k = 0; k < n; ++k)
        if (!(p_at(k).finite() && p_at(k).value() == 1.0)) all_one = false;
    if (all_one) return sup_convolution_bbl(f, g, gamma, lambda, std::move(out_shape));

    const double l = lambda.value();
    if (l == 0.0) return f;
    if (l == 1.0) return g;

    CombineGrid out;
    out.shape = choose_shape(f, g, l, false, std::move(out_shape));
    out.zmin.resize(n);
    out.zstep.resize(n);
    std::int64_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        out.zmin[k] = mean(p_at(k), lambda, f.box_min()[k], g.box_min()[k]);
        const double zmax = mean(p_at(k), lambda, f.box_max()[k], g.box_max()[k]);
        if (!(zmax > out.zmin[k]))
            throw std::invalid_argument("combined box is degenerate");
        out.zstep[k] = (zmax - out.zmin[k]) / static_cast<double>(out.shape[k] - 1);
        total *= out.shape[k];
    }
    out.values.assign(total, 0.0);

    const bool positive_gamma = gamma.is_pos_inf() || (gamma.finite() && gamma.value() > 0.0);
    const std::int64_t nf = static_cast<std::int64_t>(f.values().size());
    const std::int64_t ng = static_cast<std::int64_t>(g.values().size());
    for (std::int64_t i = 0; i < nf; ++i) {
        const double fv = f.values()[i];
        if (!positive_gamma && fv == 0.0) continue;
        const auto fidx = decode(i, f.shape());
        for (std::int64_t j = 0; j < ng; ++j) {
            const double gv = g.values()[j];
            if (positive_gamma ? (fv == 0.0 && gv == 0.0) : (gv == 0.0)) continue;
            const double val = mean(gamma, lambda, fv, gv);
            if (val == 0.0) continue;
            const auto gidx = decode(j, g.shape());
            std::int64_t cell = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double z = mean(p_at(k), lambda, f.node(k, fidx[k]), g.node(k, gidx[k]));
                const double r = (z - out.zmin[k]) / out.zstep[k];
                std::int64_t c = static_cast<std::int64_t>(std::ceil(r - 0.5));
                c = std::clamp<std::int64_t>(c, 0, out.shape[k] - 1);
                cell = cell * out.shape[k] + c;
            }
            if (val > out.values[cell]) out.values[cell] = val;
        }
    }
    return finish_combined(out);
}

ExtReal conclusion_exponent(const ExponentVector& p, const ExtReal& gamma) {
    bool rp_infinite = false;
    long double rp = 0.0L;
    for (const ExtReal& pi : p.entries) {
        if (!pi.finite() || pi.value() < 0.0 || pi.value() > 1.0)
            throw std::invalid_argument("exponent entries must lie in [0,1]");
        if (pi.value() == 0.0)
            rp_infinite = true;
        else
            rp += 1.0L / static_cast<long double>(pi.value());
    }
    if (gamma.is_neg_inf())
        throw std::invalid_argument("gamma below the admissible range");
    if (gamma.finite() && gamma.value() < 0.0) {
        // admissible iff gamma >= -(sum 1/p_i)^{-1}
        if (rp_infinite || 1.0L + static_cast<long double>(gamma.value()) * rp < -1e-12L)
            throw std::invalid_argument("gamma below the admissible range");
    }
    if (gamma.finite() && gamma.value() == 0.0) return ExtReal(0.0);  // continuity convention
    if (rp_infinite) return ExtReal(0.0);
    const long double sum = rp + (gamma.is_pos_inf() ? 0.0L : 1.0L / gamma.value());
    if (sum == 0.0L) return ExtReal::neg_inf();  // boundary case, limit of 1/s as s -> 0-
    return ExtReal(static_cast<double>(1.0L / sum));
}

CheckReport tensorize_reduce(const GridFunction& f, const GridFunction& g, const GridFunction& h,
                             const CoordinateMap& phi, const Combiner& Phi,
                             const HypothesisSampler& sampler, double tolerance) {
    const std::size_t n = f.dim();
    if (n < 2)
        throw std::invalid_argument("tensorization needs dimension >= 2");
    if (g.dim() != n || h.dim() != n)
        throw std::invalid_argument("tensorization needs equal dimensions");
    if (phi.components() != 1 && phi.components() != n)
        throw std::invalid_argument("coordinate map does not match dimension");

    const GridFunction F = marginal_last(f);
    const GridFunction G = marginal_last(g);
    const GridFunction H = marginal_last(h);
    const CoordinateMap phi_last = CoordinateMap::per_coordinate({phi.component(n - 1)});
    return borell_hypothesis_check(F, G, H, phi_last, Phi, sampler, tolerance);
}

}  // namespace borell
