#include "borell_lab.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "borell/bodies.hpp"
#include "borell/funcgrid.hpp"
#include "borell/inequalities.hpp"
#include "borell/io.hpp"
#include "borell/maps.hpp"
#include "borell/means.hpp"
#include "borell/measures.hpp"
#include "borell/report.hpp"
#include "borell/transport.hpp"

struct bl_grid {
    borell::GridFunction fn;
};

struct bl_body {
    borell::SupportBody body;
    std::optional<borell::Polygon2D> polygon;
};

struct bl_measure {
    borell::DensityMeasure mu;
};

struct bl_transport {
    borell::TransportMap map;
};

namespace {

thread_local std::string g_last_error;

bl_status fail(bl_status code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

bl_status null_arg(const char* name) {
    g_last_error = std::string("null argument: ") + name;
    return BL_ERR_NULL;
}

#define BL_REQUIRE(ptr) \
    do { \
        if (!(ptr)) return null_arg(#ptr); \
    } while (0)

template <typename Fn>
bl_status guarded(Fn&& fn) {
    try {
        fn();
        return BL_OK;
    } catch (const std::invalid_argument& e) {
        return fail(BL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(BL_ERR_DOMAIN, e.what());
    } catch (const std::exception& e) {
        return fail(BL_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(BL_ERR_RUNTIME, "unknown error");
    }
}

// NaN is rejected; the IEEE infinities map onto the extended-real endpoints.
borell::ExtReal ext_from(double v, const char* what) {
    if (std::isnan(v)) throw std::invalid_argument(std::string(what) + ": NaN");
    if (std::isinf(v)) return v > 0 ? borell::ExtReal::pos_inf() : borell::ExtReal::neg_inf();
    return borell::ExtReal(v);
}

void fill(bl_report* out, const borell::CheckReport& r) {
    out->lhs = r.lhs;
    out->rhs = r.rhs;
    out->margin = r.margin;
    out->tolerance = r.tolerance;
    out->satisfied = r.satisfied ? 1 : 0;
    out->samples = r.samples_checked;
    std::snprintf(out->witness, sizeof out->witness, "%s", r.worst_witness.c_str());
}

borell::HypothesisSampler make_sampler(std::int64_t n_xy, std::int64_t n_scale,
                                       std::uint64_t seed) {
    borell::HypothesisSampler s;
    s.n_xy = n_xy;
    s.n_scale = n_scale;
    s.seed = seed;
    return s;
}

// Shared tail of the bbl / nonlinear pipelines: compare integrate(h) against
// the corollary-exponent mean of the input masses.
borell::CheckReport conclusion_for(const borell::GridFunction& f, const borell::GridFunction& g,
                                   const borell::GridFunction& h, const borell::ExtReal& exponent,
                                   double lambda, double tolerance) {
    borell::Combiner Phi = borell::Combiner::mean_family(exponent, lambda);
    return borell_conclusion_check(f, g, h, Phi, tolerance);
}

}  // namespace

extern "C" {

const char* bl_last_error(void) { return g_last_error.c_str(); }

bl_status bl_mean(double s, double lambda, double a, double b, double* out) {
    BL_REQUIRE(out);
    return guarded([&] { *out = borell::mean(ext_from(s, "s"), borell::Weight(lambda), a, b); });
}

bl_status bl_holder_check(double alpha, double beta, double gamma, double lambda, double a,
                          double b, double c, double d, double tolerance, bl_report* out) {
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r =
            borell::holder_check(ext_from(alpha, "alpha"), ext_from(beta, "beta"),
                                 ext_from(gamma, "gamma"), borell::Weight(lambda), a, b, c, d,
                                 tolerance);
        fill(out, r);
    });
}

bl_status bl_grid_load(const char* path, bl_grid** out) {
    BL_REQUIRE(path);
    BL_REQUIRE(out);
    return guarded([&] { *out = new bl_grid{borell::load_grid_json(path)}; });
}

bl_status bl_grid_create(size_t dim, const double* box_min, const double* box_max,
                         const int64_t* shape, const double* values, size_t n_values,
                         bl_grid** out) {
    BL_REQUIRE(box_min);
    BL_REQUIRE(box_max);
    BL_REQUIRE(shape);
    BL_REQUIRE(values);
    BL_REQUIRE(out);
    return guarded([&] {
        *out = new bl_grid{borell::GridFunction(
            std::vector<double>(box_min, box_min + dim), std::vector<double>(box_max, box_max + dim),
            std::vector<std::int64_t>(shape, shape + dim),
            std::vector<double>(values, values + n_values))};
    });
}

bl_status bl_grid_save(const bl_grid* grid, const char* path) {
    BL_REQUIRE(grid);
    BL_REQUIRE(path);
    return guarded([&] { borell::save_grid_json(grid->fn, path); });
}

void bl_grid_free(bl_grid* grid) { delete grid; }

bl_status bl_grid_dim(const bl_grid* grid, size_t* out) {
    BL_REQUIRE(grid);
    BL_REQUIRE(out);
    *out = grid->fn.dim();
    return BL_OK;
}

bl_status bl_grid_integrate(const bl_grid* grid, double* out) {
    BL_REQUIRE(grid);
    BL_REQUIRE(out);
    return guarded([&] { *out = grid->fn.integrate(); });
}

bl_status bl_grid_concavity_check(const bl_grid* grid, double alpha, int64_t n_pairs,
                                  uint64_t seed, double tolerance, bl_report* out) {
    BL_REQUIRE(grid);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::alpha_concavity_check(grid->fn, ext_from(alpha, "alpha"),
                                                              n_pairs, seed, tolerance);
        fill(out, r);
    });
}

bl_status bl_body_load(const char* path, int64_t planar_m, bl_body** out) {
    BL_REQUIRE(path);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::LoadedBody loaded = borell::load_body_json(path, planar_m);
        *out = new bl_body{std::move(loaded.body), std::move(loaded.polygon)};
    });
}

bl_status bl_body_save(const bl_body* body, const char* path) {
    BL_REQUIRE(body);
    BL_REQUIRE(path);
    return guarded([&] { borell::save_body_json(body->body, path); });
}

void bl_body_free(bl_body* body) { delete body; }

bl_status bl_body_dim(const bl_body* body, size_t* out) {
    BL_REQUIRE(body);
    BL_REQUIRE(out);
    *out = body->body.grid().dim();
    return BL_OK;
}

bl_status bl_body_is_polygon(const bl_body* body, int* out) {
    BL_REQUIRE(body);
    BL_REQUIRE(out);
    *out = body->polygon.has_value() ? 1 : 0;
    return BL_OK;
}

bl_status bl_body_combine(const bl_body* k, const bl_body* l, double lambda, double p,
                          bl_body** out) {
    BL_REQUIRE(k);
    BL_REQUIRE(l);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::SupportBody combined =
            borell::p_combination(borell::Weight(lambda), ext_from(p, "p"), k->body, l->body);
        *out = new bl_body{std::move(combined), std::nullopt};
    });
}

bl_status bl_body_planar_area(const bl_body* body, double* out) {
    BL_REQUIRE(body);
    BL_REQUIRE(out);
    return guarded([&] {
        if (body->polygon) {
            *out = borell::polygon_area(*body->polygon);
            return;
        }
        if (body->body.grid().dim() != 2)
            throw std::invalid_argument("bl_body_planar_area: body is not planar");
        *out = borell::polygon_area(borell::wulff_polygon(body->body));
    });
}

bl_status bl_body_mc_volume(const bl_body* body, int64_t n_samples, uint64_t seed,
                            double* estimate, double* stderr_out) {
    BL_REQUIRE(body);
    BL_REQUIRE(estimate);
    return guarded([&] {
        borell::McVolume v = borell::mc_volume(body->body, n_samples, seed);
        *estimate = v.estimate;
        if (stderr_out) *stderr_out = v.stderr_estimate;
    });
}

bl_status bl_transport_compute(const bl_grid* f, const bl_grid* g, bl_transport** out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(out);
    return guarded([&] { *out = new bl_transport{borell::monotone_transport(f->fn, g->fn)}; });
}

void bl_transport_free(bl_transport* t) { delete t; }

bl_status bl_transport_size(const bl_transport* t, size_t* out) {
    BL_REQUIRE(t);
    BL_REQUIRE(out);
    *out = t->map.xs.size();
    return BL_OK;
}

bl_status bl_transport_row(const bl_transport* t, size_t i, double* x, double* tx, double* dtx) {
    BL_REQUIRE(t);
    BL_REQUIRE(x);
    BL_REQUIRE(tx);
    BL_REQUIRE(dtx);
    if (i >= t->map.xs.size()) return fail(BL_ERR_INVALID_ARGUMENT, "bl_transport_row: index out of range");
    *x = t->map.xs[i];
    *tx = t->map.ts[i];
    *dtx = t->map.dts[i];
    return BL_OK;
}

bl_status bl_transport_residual(const bl_grid* f, const bl_grid* g, const bl_transport* t,
                                double* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(t);
    BL_REQUIRE(out);
    return guarded([&] { *out = borell::pushforward_residual(f->fn, g->fn, t->map); });
}

bl_status bl_transport_certify(const bl_grid* f, const bl_grid* g, const char* phi_spec,
                               const char* combiner_spec, double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(phi_spec);
    BL_REQUIRE(combiner_spec);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CoordinateMap phi = borell::parse_coordinate_map(phi_spec);
        borell::Combiner Phi = borell::parse_combiner(combiner_spec);
        borell::TransportCertificate cert =
            borell::transport_certificate(f->fn, g->fn, phi, Phi, tolerance);
        fill(out, cert.report);
    });
}

bl_status bl_check_hypothesis(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                              const char* phi_spec, const char* combiner_spec, int64_t n_xy,
                              int64_t n_scale, uint64_t seed, double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(h);
    BL_REQUIRE(phi_spec);
    BL_REQUIRE(combiner_spec);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::borell_hypothesis_check(
            f->fn, g->fn, h->fn, borell::parse_coordinate_map(phi_spec),
            borell::parse_combiner(combiner_spec), make_sampler(n_xy, n_scale, seed), tolerance);
        fill(out, r);
    });
}

bl_status bl_check_conclusion(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                              const char* combiner_spec, double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(h);
    BL_REQUIRE(combiner_spec);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::borell_conclusion_check(
            f->fn, g->fn, h->fn, borell::parse_combiner(combiner_spec), tolerance);
        fill(out, r);
    });
}

bl_status bl_check_tensorize(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                             const char* phi_spec, const char* combiner_spec, int64_t n_xy,
                             int64_t n_scale, uint64_t seed, double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(h);
    BL_REQUIRE(phi_spec);
    BL_REQUIRE(combiner_spec);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::tensorize_reduce(
            f->fn, g->fn, h->fn, borell::parse_coordinate_map(phi_spec),
            borell::parse_combiner(combiner_spec), make_sampler(n_xy, n_scale, seed), tolerance);
        fill(out, r);
    });
}

bl_status bl_check_bbl(const bl_grid* f, const bl_grid* g, double gamma, double lambda,
                       double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::ExtReal gam = ext_from(gamma, "gamma");
        borell::GridFunction h =
            borell::sup_convolution_bbl(f->fn, g->fn, gam, borell::Weight(lambda));
        borell::ExponentVector ones(
            std::vector<borell::ExtReal>(f->fn.dim(), borell::ExtReal(1.0)));
        fill(out, conclusion_for(f->fn, g->fn, h, borell::conclusion_exponent(ones, gam), lambda,
                                 tolerance));
    });
}

bl_status bl_check_nonlinear(const bl_grid* f, const bl_grid* g, double p, double gamma,
                             double lambda, double tolerance, bl_report* out) {
    BL_REQUIRE(f);
    BL_REQUIRE(g);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::ExtReal gam = ext_from(gamma, "gamma");
        borell::ExponentVector pv(
            std::vector<borell::ExtReal>(f->fn.dim(), ext_from(p, "p")));
        borell::GridFunction h =
            borell::sup_convolution_nonlinear(f->fn, g->fn, pv, gam, borell::Weight(lambda));
        fill(out, conclusion_for(f->fn, g->fn, h, borell::conclusion_exponent(pv, gam), lambda,
                                 tolerance));
    });
}

bl_status bl_measure_create(const bl_grid* density, double alpha, int symmetric,
                            double alpha_tolerance, bl_measure** out) {
    BL_REQUIRE(density);
    BL_REQUIRE(out);
    return guarded([&] {
        *out = new bl_measure{borell::DensityMeasure(density->fn, ext_from(alpha, "alpha"),
                                                     symmetric != 0, alpha_tolerance)};
    });
}

void bl_measure_free(bl_measure* mu) { delete mu; }

bl_status bl_measure_of_body(const bl_measure* mu, const bl_body* body, double* out) {
    BL_REQUIRE(mu);
    BL_REQUIRE(body);
    BL_REQUIRE(out);
    return guarded([&] { *out = borell::measure_of_body(mu->mu, body->body); });
}

bl_status bl_check_lp_bm(const bl_measure* mu, const bl_body* k, const bl_body* l, double lambda,
                         double p, double tolerance, bl_report* out) {
    BL_REQUIRE(mu);
    BL_REQUIRE(k);
    BL_REQUIRE(l);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::lp_bm_check(mu->mu, k->body, l->body,
                                                    borell::Weight(lambda), ext_from(p, "p"),
                                                    tolerance);
        fill(out, r);
    });
}

bl_status bl_check_pipeline(const bl_measure* mu, const bl_body* k, const bl_body* l,
                            double lambda, double p, int64_t n_thresholds, double tolerance,
                            bl_report* out) {
    BL_REQUIRE(mu);
    BL_REQUIRE(k);
    BL_REQUIRE(l);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r =
            borell::equiv_pipeline_check(mu->mu, k->body, l->body, borell::Weight(lambda),
                                         ext_from(p, "p"), n_thresholds, tolerance);
        fill(out, r);
    });
}

bl_status bl_check_inclusion(const bl_body* k0, const bl_body* k1, double lambda, double p,
                             int64_t n_points, uint64_t seed, bl_report* out) {
    BL_REQUIRE(k0);
    BL_REQUIRE(k1);
    BL_REQUIRE(out);
    return guarded([&] {
        borell::CheckReport r = borell::inclusion_chain_check(
            k0->body, k1->body, borell::Weight(lambda), ext_from(p, "p"), n_points, seed);
        fill(out, r);
    });
}

bl_status bl_check_lp_planar(const bl_body* k, const bl_body* l, double lambda, double p,
                             int64_t m_directions, double tolerance, bl_report* out) {
    BL_REQUIRE(k);
    BL_REQUIRE(l);
    BL_REQUIRE(out);
    return guarded([&] {
        if (!k->polygon || !l->polygon)
            throw std::invalid_argument(
                "bl_check_lp_planar: both bodies must carry exact polygons");
        borell::CheckReport r =
            borell::planar_lp_exact_check(*k->polygon, *l->polygon, borell::Weight(lambda),
                                          ext_from(p, "p"), m_directions, tolerance);
        fill(out, r);
    });
}

bl_status bl_sweep_planar(int64_t trials, uint64_t seed, double p, double lambda,
                          int64_t m_directions, bl_report* rows) {
    BL_REQUIRE(rows);
    return guarded([&] {
        std::vector<borell::CheckReport> reports = borell::planar_lp_sweep(
            trials, seed, ext_from(p, "p"), borell::Weight(lambda), m_directions);
        for (std::size_t i = 0; i < reports.size(); ++i) fill(&rows[i], reports[i]);
    });
}

}  // extern "C"
