#include "borell/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "borell/rng.hpp"

namespace borell {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

std::shared_ptr<const DirectionGrid> DirectionGrid::planar(std::int64_t m) {
    if (m < 4 || m % 2 != 0)
        throw std::invalid_argument("DirectionGrid::planar: m must be even and >= 4");
    auto g = std::shared_ptr<DirectionGrid>(new DirectionGrid());
    g->dim_ = 2;
    const std::size_t half = static_cast<std::size_t>(m / 2);
    g->dirs_.resize(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < half; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
        g->dirs_[k] = {std::cos(a), std::sin(a)};
        g->dirs_[k + half] = {-g->dirs_[k][0], -g->dirs_[k][1]};
    }
    return g;
}

std::shared_ptr<const DirectionGrid> DirectionGrid::sampled(std::size_t dim, std::int64_t m,
                                                            std::uint64_t seed) {
    if (dim < 3) throw std::invalid_argument("DirectionGrid::sampled: dim must be >= 3");
    if (m < static_cast<std::int64_t>(2 * dim) || m % 2 != 0)
        throw std::invalid_argument("DirectionGrid::sampled: m must be even and >= 2*dim");
    auto g = std::shared_ptr<DirectionGrid>(new DirectionGrid());
    g->dim_ = dim;
    g->seed_ = seed;
    const std::size_t half = static_cast<std::size_t>(m / 2);
    g->dirs_.resize(static_cast<std::size_t>(m));
    Rng rng(seed);
    for (std::size_t k = 0; k < half; ++k) {
        std::vector<double> u(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                u[j] = rng.normal();
                norm += u[j] * u[j];
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-6);
        for (std::size_t j = 0; j < dim; ++j) u[j] /= norm;
        g->dirs_[k] = u;
        std::vector<double> nu(dim);
        for (std::size_t j = 0; j < dim; ++j) nu[j] = -u[j];
        g->dirs_[k + half] = nu;
    }
    return g;
}

bool DirectionGrid::same_grid(const DirectionGrid& other) const {
    if (this == &other) return true;
    if (dim_ != other.dim_ || dirs_.size() != other.dirs_.size()) return false;
    for (std::size_t i = 0; i < dirs_.size(); ++i)
        for (std::size_t k = 0; k < dim_; ++k)
            if (std::fabs(dirs_[i][k] - other.dirs_[i][k]) > 1e-12) return false;
    return true;
}

SupportBody::SupportBody(std::shared_ptr<const DirectionGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("SupportBody: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("SupportBody: values size does not match grid");
    double scale = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("SupportBody: values must be finite and > 0");
        scale = std::max(scale, v);
    }
    // h(u) = h(-u) must hold exactly; validate to 1e-9 then pin both sides to
    // the midpoint.
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const std::size_t j = grid_->neg_index(i);
        if (std::fabs(values_[i] - values_[j]) > 1e-9 * scale)
            throw std::invalid_argument("SupportBody: values are not symmetric under negation");
        if (i < j) {
            const double mid = 0.5 * (values_[i] + values_[j]);
            values_[i] = mid;
            values_[j] = mid;
        }
    }
}

Polygon2D::Polygon2D(std::vector<std::array<double, 2>> v) : vertices(std::move(v)) {
    if (vertices.size() < 3) throw std::invalid_argument("Polygon2D: need >= 3 vertices");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % n];
        const auto& c = vertices[(i + 2) % n];
        const double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (cr <= -1e-12)
            throw std::invalid_argument("Polygon2D: vertices are not in convex CCW order");
    }
}

SupportBody support_of_polytope(const std::vector<std::vector<double>>& vertices,
                                std::shared_ptr<const DirectionGrid> grid) {
    if (!grid) throw std::invalid_argument("support_of_polytope: null grid");
    const std::size_t dim = grid->dim();
    if (vertices.empty()) throw std::invalid_argument("support_of_polytope: no vertices");
    double scale = 0.0;
    for (const auto& v : vertices) {
        if (v.size() != dim) throw std::invalid_argument("support_of_polytope: vertex dim mismatch");
        for (double c : v) scale = std::max(scale, std::fabs(c));
    }
    if (scale == 0.0) throw std::invalid_argument("support_of_polytope: all vertices at origin");

    // Symmetry: every vertex needs a partner within 1e-9 of its negation.
    for (const auto& v : vertices) {
        bool found = false;
        for (const auto& w : vertices) {
            double d = 0.0;
            for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::fabs(v[k] + w[k]));
            if (d <= 1e-9 * scale) {
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("support_of_polytope: vertex set is not symmetric");
    }

    // Full dimensionality: the vertices must span R^dim (with a symmetric set
    // this puts the origin in the interior of the hull).
    {
        std::vector<std::vector<double>> m = vertices;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < dim && rank < m.size(); ++col) {
            std::size_t piv = rank;
            for (std::size_t r = rank; r < m.size(); ++r)
                if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
            if (std::fabs(m[piv][col]) <= 1e-9 * scale) continue;
            std::swap(m[rank], m[piv]);
            for (std::size_t r = 0; r < m.size(); ++r) {
                if (r == rank) continue;
                const double f = m[r][col] / m[rank][col];
                for (std::size_t c = col; c < dim; ++c) m[r][c] -= f * m[rank][c];
            }
            ++rank;
        }
        if (rank < dim)
            throw std::invalid_argument("support_of_polytope: vertices are not full-dimensional");
    }

    // max over {+-v} of <v,u> = max |<v,u>|; the absolute value keeps the
    // symmetry h(u) = h(-u) exact even when the input is only near-symmetric.
    std::vector<double> h(grid->size(), 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double best = 0.0;
        for (const auto& v : vertices) best = std::max(best, std::fabs(dot(v, grid->direction(i))));
        h[i] = best;
    }
    return SupportBody(grid, std::move(h));
}

SupportBody p_combination(const Weight& lambda, const ExtReal& p, const SupportBody& K,
                          const SupportBody& L) {
    if (!p.finite() || p.value() < 0.0 || p.value() > 1.0)
        throw std::invalid_argument("p_combination: p must lie in [0, 1]");
    if (!K.grid().same_grid(L.grid()))
        throw std::invalid_argument("p_combination: bodies live on different direction grids");
    std::vector<double> h(K.values().size());
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = mean(p, lambda, K.values()[i], L.values()[i]);
    return SupportBody(K.grid_ptr(), std::move(h));
}

namespace {

struct Halfplane {
    double ux, uy, h;    // constraint <x,u> <= h
    double ang;          // angle of the boundary direction (-uy, ux)
};

std::array<double, 2> line_intersection(const Halfplane& a, const Halfplane& b) {
    const double det = a.ux * b.uy - a.uy * b.ux;
    return {(a.h * b.uy - b.h * a.uy) / det, (a.ux * b.h - b.ux * a.h) / det};
}

bool outside(const Halfplane& hp, const std::array<double, 2>& q, double eps) {
    return hp.ux * q[0] + hp.uy * q[1] > hp.h + eps;
}

}  // namespace

namespace {

// Shared halfplane-intersection core: constraints <x,u> <= h, angle-sorted
// incremental deque.  Throws when the intersection has empty interior.
Polygon2D wulff_core(std::vector<Halfplane> hps, double scale, const char* who) {
    const double eps = 1e-12 * std::max(1.0, scale);
    std::sort(hps.begin(), hps.end(), [](const Halfplane& a, const Halfplane& b) {
        if (a.ang != b.ang) return a.ang < b.ang;
        return a.h < b.h;
    });
    // Equal directions: keep the tighter offset only.
    std::vector<Halfplane> uniq;
    for (const auto& hp : hps) {
        if (!uniq.empty() && std::fabs(hp.ang - uniq.back().ang) <= 1e-12) continue;
        uniq.push_back(hp);
    }

    std::deque<Halfplane> dq;
    for (const auto& hp : uniq) {
        while (dq.size() >= 2 && outside(hp, line_intersection(dq[dq.size() - 2], dq.back()), eps))
            dq.pop_back();
        while (dq.size() >= 2 && outside(hp, line_intersection(dq[0], dq[1]), eps))
            dq.pop_front();
        dq.push_back(hp);
    }
    while (dq.size() >= 3 && outside(dq.front(), line_intersection(dq[dq.size() - 2], dq.back()), eps))
        dq.pop_back();
    while (dq.size() >= 3 && outside(dq.back(), line_intersection(dq[0], dq[1]), eps))
        dq.pop_front();
    if (dq.size() < 3)
        throw std::invalid_argument(std::string(who) + ": degenerate intersection");

    std::vector<std::array<double, 2>> verts;
    verts.reserve(dq.size());
    for (std::size_t i = 0; i < dq.size(); ++i)
        verts.push_back(line_intersection(dq[i], dq[(i + 1) % dq.size()]));

    // Collapse duplicate corners produced by tangent constraints.
    std::vector<std::array<double, 2>> out;
    for (const auto& v : verts) {
        if (!out.empty() && std::fabs(v[0] - out.back()[0]) <= 1e-9 * std::max(1.0, scale) &&
            std::fabs(v[1] - out.back()[1]) <= 1e-9 * std::max(1.0, scale))
            continue;
        out.push_back(v);
    }
    while (out.size() >= 2 && std::fabs(out.front()[0] - out.back()[0]) <= 1e-9 * std::max(1.0, scale) &&
           std::fabs(out.front()[1] - out.back()[1]) <= 1e-9 * std::max(1.0, scale))
        out.pop_back();
    if (out.size() < 3) throw std::invalid_argument(std::string(who) + ": degenerate intersection");

    // Collapsing near-duplicate corners can leave a residual turn of either
    // sign at noise scale; prune until every remaining corner turns strictly
    // left.  Genuine facet turns at fine direction grids stay orders above
    // this threshold.
    const double cross_tol = 1e-10 * std::max(1.0, scale) * std::max(1.0, scale);
    bool pruned = true;
    while (pruned && out.size() > 3) {
        pruned = false;
        for (std::size_t i = 0; i < out.size() && out.size() > 3; ++i) {
            const auto& a = out[(i + out.size() - 1) % out.size()];
            const auto& b = out[i];
            const auto& c = out[(i + 1) % out.size()];
            const double cr =
                (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if (cr <= cross_tol) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                pruned = true;
                --i;
            }
        }
    }

    // Deterministic start: lexicographically smallest vertex first.
    std::size_t start = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i][0] < out[start][0] || (out[i][0] == out[start][0] && out[i][1] < out[start][1]))
            start = i;
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
    return Polygon2D(std::move(out));
}

}  // namespace

Polygon2D wulff_polygon(const SupportBody& body) {
    if (body.grid().dim() != 2)
        throw std::invalid_argument("wulff_polygon: planar bodies only");
    const std::size_t m = body.grid().size();
    double scale = 0.0;
    for (double v : body.values()) scale = std::max(scale, v);

    std::vector<Halfplane> hps;
    hps.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& u = body.grid().direction(i);
        hps.push_back({u[0], u[1], body.values()[i], std::atan2(u[0], -u[1])});
    }
    return wulff_core(std::move(hps), scale, "wulff_polygon");
}

Polygon2D halfplane_intersection(const std::vector<std::array<double, 3>>& constraints) {
    if (constraints.size() < 3)
        throw std::invalid_argument("halfplane_intersection: need >= 3 constraints");
    std::vector<Halfplane> hps;
    hps.reserve(constraints.size());
    double scale = 0.0;
    for (const auto& c : constraints) {
        const double nrm = std::hypot(c[0], c[1]);
        if (!(nrm > 0.0) || !std::isfinite(nrm) || !std::isfinite(c[2]))
            throw std::invalid_argument("halfplane_intersection: bad constraint row");
        const double ux = c[0] / nrm, uy = c[1] / nrm, h = c[2] / nrm;
        scale = std::max(scale, std::fabs(h));
        hps.push_back({ux, uy, h, std::atan2(ux, -uy)});
    }
    return wulff_core(std::move(hps), scale, "halfplane_intersection");
}

double polygon_area(const Polygon2D& poly) {
    long double s = 0.0L;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly.vertices[i];
        const auto& b = poly.vertices[(i + 1) % n];
        s += static_cast<long double>(a[0]) * b[1] - static_cast<long double>(b[0]) * a[1];
    }
    return static_cast<double>(s / 2.0L);
}

bool membership(const std::vector<double>& x, const SupportBody& body) {
    if (x.size() != body.grid().dim())
        throw std::invalid_argument("membership: dimension mismatch");
    for (std::size_t i = 0; i < body.grid().size(); ++i)
        if (dot(x, body.grid().direction(i)) > body.values()[i] + 1e-12) return false;
    return true;
}

std::vector<double> bounding_halfwidths(const SupportBody& body) {
    const std::size_t dim = body.grid().dim();
    std::vector<double> w(dim, 0.0);
    for (std::size_t axis = 0; axis < dim; ++axis) {
        std::size_t best = 0;
        double bestc = -1.0;
        for (std::size_t i = 0; i < body.grid().size(); ++i) {
            const double c = std::fabs(body.grid().direction(i)[axis]);
            if (c > bestc) {
                bestc = c;
                best = i;
            }
        }
        w[axis] = body.values()[best];
    }
    return w;
}

McVolume mc_volume(const SupportBody& body, std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("mc_volume: need >= 1000 samples");
    const std::size_t dim = body.grid().dim();
    const std::vector<double> w = bounding_halfwidths(body);
    double box_vol = 1.0;
    for (double h : w) box_vol *= 2.0 * h;

    // Fixed-size sample blocks with derived per-block seeds: the estimate is a
    // pure function of (seed, n_samples) no matter how blocks get scheduled.
    constexpr std::int64_t kBlock = 65536;
    std::int64_t hits = 0;
    std::vector<double> x(dim);
    for (std::int64_t b = 0, done = 0; done < n_samples; ++b) {
        const std::int64_t count = std::min(kBlock, n_samples - done);
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(b)));
        for (std::int64_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < dim; ++k) x[k] = rng.uniform(-w[k], w[k]);
            if (membership(x, body)) ++hits;
        }
        done += count;
    }
    const double q = static_cast<double>(hits) / static_cast<double>(n_samples);
    McVolume r;
    r.estimate = box_vol * q;
    r.stderr_estimate = box_vol * std::sqrt(q * (1.0 - q) / static_cast<double>(n_samples));
    r.samples = n_samples;
    return r;
}

namespace {

// Andrew monotone chain; returns CCW hull without collinear points.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) throw std::invalid_argument("convex_hull: degenerate point set");
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

Polygon2D random_symmetric_polygon(std::int64_t k, std::uint64_t seed) {
    if (k < 3) throw std::invalid_argument("random_symmetric_polygon: k must be >= 3");
    Rng rng(seed);
    std::vector<std::array<double, 2>> pts;
    pts.reserve(static_cast<std::size_t>(2 * k));
    for (std::int64_t i = 0; i < k; ++i) {
        const double a = rng.uniform(0.0, kTwoPi);
        const double r = rng.uniform(0.5, 2.0);
        const double x = r * std::cos(a), y = r * std::sin(a);
        pts.push_back({x, y});
        pts.push_back({-x, -y});
    }
    return Polygon2D(convex_hull(std::move(pts)));
}

std::vector<std::vector<double>> polygon_vertex_list(const Polygon2D& poly) {
    std::vector<std::vector<double>> out;
    out.reserve(poly.vertices.size());
    for (const auto& v : poly.vertices) out.push_back({v[0], v[1]});
    return out;
}

}  // namespace borell
