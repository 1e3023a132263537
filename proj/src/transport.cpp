#include "borell/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace borell {

namespace {

void require_unit_mass_1d(const GridFunction& fn, const char* label) {
    if (fn.dim() != 1)
        throw std::invalid_argument(std::string(label) + ": transport needs a 1-d density");
    const double total = fn.integrate();
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(label) + ": density must have unit mass");
    if (!(fn.max_value() > 0.0))
        throw std::invalid_argument(std::string(label) + ": density is identically zero");
}

// Cumulative trapezoid masses at the grid nodes.
std::vector<long double> cumulative(const GridFunction& fn) {
    const std::size_t n = fn.shape()[0];
    const double step = (fn.box_max()[0] - fn.box_min()[0]) / static_cast<double>(n - 1);
    std::vector<long double> cum(n, 0.0L);
    for (std::size_t j = 1; j < n; ++j)
        cum[j] = cum[j - 1] + 0.5L * (static_cast<long double>(fn.values()[j - 1]) + fn.values()[j]) * step;
    return cum;
}

// Least y with G(y) >= q, piecewise linear between nodes.
double generalized_inverse(const std::vector<long double>& cum, double y0, double step, double q) {
    const long double total = cum.back();
    long double qq = q;
    if (qq > total) qq = total;
    if (qq < 0.0L) qq = 0.0L;
    const auto it = std::lower_bound(cum.begin(), cum.end(), qq);
    const std::size_t k = static_cast<std::size_t>(it - cum.begin());
    if (k == 0) return y0;
    const long double lo = cum[k - 1], hi = cum[k];
    const double frac = static_cast<double>((qq - lo) / (hi - lo));
    return y0 + (static_cast<double>(k - 1) + frac) * step;
}

}  // namespace

TransportMap monotone_transport(const GridFunction& f, const GridFunction& g) {
    require_unit_mass_1d(f, "f");
    require_unit_mass_1d(g, "g");

    const std::size_t nf = f.shape()[0];
    const double fx0 = f.box_min()[0];
    const double fstep = (f.box_max()[0] - fx0) / static_cast<double>(nf - 1);
    const double gx0 = g.box_min()[0];
    const double gstep = (g.box_max()[0] - gx0) / static_cast<double>(g.shape()[0] - 1);

    const std::vector<long double> fcum = cumulative(f);
    const std::vector<long double> gcum = cumulative(g);

    TransportMap map;
    const double eps_f = f.supp_eps();
    for (std::size_t j = 0; j < nf; ++j) {
        if (f.values()[j] <= eps_f) continue;
        map.xs.push_back(fx0 + static_cast<double>(j) * fstep);
        map.ts.push_back(generalized_inverse(gcum, gx0, gstep, static_cast<double>(fcum[j])));
        map.dts.push_back(f.values()[j]);  // placeholder: finalized below
    }

    const double eps_g = g.supp_eps();
    const std::size_t n = map.xs.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double gt = g.evaluate({map.ts[j]});
        if (gt > eps_g) {
            map.dts[j] /= gt;
        } else if (n >= 2) {
            const std::size_t a = (j + 1 < n) ? j : j - 1;
            map.dts[j] = (map.ts[a + 1] - map.ts[a]) / (map.xs[a + 1] - map.xs[a]);
        } else {
            map.dts[j] = 0.0;
        }
    }
    return map;
}

double pushforward_residual(const GridFunction& f, const GridFunction& g,
                            const TransportMap& map) {
    const std::size_t n = map.xs.size();
    if (n < 4) return 0.0;
    const double eps_f = f.supp_eps();
    const double eps_g = g.supp_eps();
    double worst = 0.0;
    for (std::size_t j = 1; j + 2 < n; ++j) {
        const double xm = 0.5 * (map.xs[j] + map.xs[j + 1]);
        const double fm = f.evaluate({xm});
        if (fm <= eps_f) continue;  // support gap: T is flat there in the limit
        const double tm = 0.5 * (map.ts[j] + map.ts[j + 1]);
        const double gm = g.evaluate({tm});
        if (gm <= eps_g) continue;
        const double slope = (map.ts[j + 1] - map.ts[j]) / (map.xs[j + 1] - map.xs[j]);
        worst = std::max(worst, std::fabs(fm - gm * slope));
    }
    return worst;
}

TransportCertificate transport_certificate(const GridFunction& f, const GridFunction& g,
                                           const CoordinateMap& phi, const Combiner& Phi,
                                           double tolerance) {
    const TransportMap map = monotone_transport(f, g);
    const ScalarMap& comp = phi.component(0);

    const std::size_t nf = f.shape()[0];
    const double fx0 = f.box_min()[0];
    const double fstep = (f.box_max()[0] - fx0) / static_cast<double>(nf - 1);
    const double phi11 = Phi(1.0, 1.0);

    TransportCertificate cert;
    cert.xs = map.xs;
    long double lb = 0.0L;
    double worst_defect = 0.0;
    double worst_x = map.xs.empty() ? 0.0 : map.xs[0];
    for (std::size_t j = 0; j < map.xs.size(); ++j) {
        const double x = map.xs[j];
        const double t = map.ts[j];
        const std::size_t idx =
            static_cast<std::size_t>(std::llround((x - fx0) / fstep));
        const double w = f.axis_weight(0, idx);
        const double fv = f.values()[idx];
        const double pushed = g.evaluate({t}) * map.dts[j];
        const double contrib = Phi(fv, pushed);
        lb += static_cast<long double>(contrib) * w;
        cert.theta.push_back(comp.value(x, t));
        cert.dtheta.push_back(comp.dx(x, t) + comp.dy(x, t) * map.dts[j]);
        cert.rhs.push_back(contrib);
        const double defect = contrib - fv * phi11;
        if (defect < worst_defect) {
            worst_defect = defect;
            worst_x = x;
        }
    }
    cert.lower_bound = static_cast<double>(lb);

    const double rhs = phi11 * f.integrate();
    char witness[128];
    std::snprintf(witness, sizeof(witness), "x=%.12g defect=%.12g", worst_x, worst_defect);
    cert.report = make_report(cert.lower_bound, rhs, cert.lower_bound - rhs, tolerance, witness,
                              static_cast<std::int64_t>(map.xs.size()));
    return cert;
}

NormalizedTriple normalize_triple(const GridFunction& f, const GridFunction& g,
                                  const Combiner& Phi) {
    if (f.dim() != 1 || g.dim() != 1)
        throw std::invalid_argument("normalize_triple needs 1-d densities");
    const double p10 = Phi.phi10();
    const double p01 = Phi.phi01();
    if (!(p10 > 0.0) || !(p01 > 0.0))
        throw std::invalid_argument("normalization needs Phi(1,0) > 0 and Phi(0,1) > 0");
    const double mf = f.integrate();
    const double mg = g.integrate();
    if (!(mf > 0.0) || !(mg > 0.0))
        throw std::invalid_argument("normalization needs positive masses");

    auto rescale = [](const GridFunction& fn, double c, double gain) {
        std::vector<double> vals(fn.values().size());
        for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = fn.values()[j] * gain;
        return GridFunction({fn.box_min()[0] / c}, {fn.box_max()[0] / c}, fn.shape(),
                            std::move(vals));
    };
    const double cf = mf * p10;
    const double cg = mg * p01;
    return NormalizedTriple{rescale(f, cf, p10), rescale(g, cg, p01), Phi(mf, mg)};
}

double degenerate_mass_bound(const GridFunction& f, const CoordinateMap& phi,
                             const Combiner& Phi, double y0) {
    if (f.dim() != 1)
        throw std::invalid_argument("degenerate bound needs a 1-d density");
    const ScalarMap& comp = phi.component(0);
    if (y0 < comp.y_range[0] || y0 > comp.y_range[1])
        throw std::invalid_argument("degenerate point outside the map's declared range");
    const double eps = f.supp_eps();
    long double mass = 0.0L;
    for (std::size_t j = 0; j < f.values().size(); ++j)
        if (f.values()[j] > eps)
            mass += static_cast<long double>(f.values()[j]) * f.axis_weight(0, j);
    return Phi.phi10() * static_cast<double>(mass);
}

}  // namespace borell
