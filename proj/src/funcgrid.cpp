#include "borell/funcgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "borell/means.hpp"
#include "borell/rng.hpp"

namespace borell {

GridFunction::GridFunction(std::vector<double> box_min, std::vector<double> box_max,
                           std::vector<std::int64_t> shape, std::vector<double> values)
    : box_min_(std::move(box_min)),
      box_max_(std::move(box_max)),
      shape_(std::move(shape)),
      values_(std::move(values)) {
    const std::size_t n = box_min_.size();
    if (n == 0 || box_max_.size() != n || shape_.size() != n)
        throw std::invalid_argument("GridFunction: dim mismatch between box and shape");
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(box_min_[k] < box_max_[k]))
            throw std::invalid_argument("GridFunction: box_min must be < box_max");
        if (shape_[k] < 2) throw std::invalid_argument("GridFunction: need >= 2 points per axis");
        total *= static_cast<std::size_t>(shape_[k]);
        step_.push_back((box_max_[k] - box_min_[k]) / static_cast<double>(shape_[k] - 1));
    }
    if (values_.size() != total)
        throw std::invalid_argument("GridFunction: values size does not match shape");
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("GridFunction: values must be finite and >= 0");
        max_value_ = std::max(max_value_, v);
    }
}

std::size_t GridFunction::flat(const std::vector<std::int64_t>& idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k)
        f = f * static_cast<std::size_t>(shape_[k]) + static_cast<std::size_t>(idx[k]);
    return f;
}

double GridFunction::cell_volume(const std::vector<std::int64_t>& idx) const {
    double w = 1.0;
    for (std::size_t k = 0; k < shape_.size(); ++k) w *= axis_weight(k, idx[k]);
    return w;
}

bool GridFunction::inside(const std::vector<double>& x) const {
    for (std::size_t k = 0; k < box_min_.size(); ++k)
        if (x[k] < box_min_[k] || x[k] > box_max_[k]) return false;
    return true;
}

double GridFunction::evaluate(const std::vector<double>& x) const {
    if (x.size() != dim()) throw std::invalid_argument("evaluate: dimension mismatch");
    if (!inside(x)) return 0.0;
    const std::size_t n = dim();
    std::vector<std::int64_t> lo(n);
    std::vector<double> frac(n);
    for (std::size_t k = 0; k < n; ++k) {
        double t = (x[k] - box_min_[k]) / step_[k];
        std::int64_t j = static_cast<std::int64_t>(std::floor(t));
        j = std::clamp<std::int64_t>(j, 0, shape_[k] - 2);
        lo[k] = j;
        frac[k] = std::clamp(t - static_cast<double>(j), 0.0, 1.0);
    }
    double acc = 0.0;
    std::vector<std::int64_t> idx(n);
    const std::size_t corners = std::size_t(1) << n;
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool hi = (c >> k) & 1u;
            idx[k] = lo[k] + (hi ? 1 : 0);
            w *= hi ? frac[k] : 1.0 - frac[k];
        }
        if (w != 0.0) acc += w * values_[flat(idx)];
    }
    return acc;
}

double GridFunction::integrate() const {
    const std::size_t n = dim();
    long double s = 0.0L;
    std::vector<std::int64_t> idx(n, 0);
    const std::size_t total = values_.size();
    for (std::size_t f = 0; f < total; ++f) {
        s += static_cast<long double>(values_[f]) * cell_volume(idx);
        for (std::size_t k = n; k-- > 0;) {
            if (++idx[k] < shape_[k]) break;
            idx[k] = 0;
        }
    }
    return static_cast<double>(s);
}

CheckReport alpha_concavity_check(const GridFunction& f, const ExtReal& alpha,
                                  std::int64_t n_pairs, std::uint64_t seed, double tolerance) {
    if (f.max_value() == 0.0)
        throw std::invalid_argument("alpha_concavity_check: function is identically zero");
    if (n_pairs < 1) throw std::invalid_argument("alpha_concavity_check: n_pairs must be >= 1");

    Rng rng(seed);
    const std::size_t n = f.dim();
    std::vector<double> x(n), y(n), z(n);
    double worst = std::numeric_limits<double>::infinity();
    double wlhs = 0.0, wrhs = 0.0;
    char witness[256] = "none";

    auto draw_support_point = [&](std::vector<double>& p) {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            for (std::size_t k = 0; k < n; ++k)
                p[k] = rng.uniform(f.box_min()[k], f.box_max()[k]);
            if (f.evaluate(p) > 0.0) return;
        }
        throw std::invalid_argument("alpha_concavity_check: support too sparse to sample");
    };

    for (std::int64_t i = 0; i < n_pairs; ++i) {
        draw_support_point(x);
        draw_support_point(y);
        const double l = rng.uniform();
        for (std::size_t k = 0; k < n; ++k) z[k] = (1.0 - l) * x[k] + l * y[k];
        const double fz = f.evaluate(z);
        const double m = mean(alpha, Weight(l), f.evaluate(x), f.evaluate(y));
        const double margin = fz - m;
        if (margin < worst) {
            worst = margin;
            wlhs = fz;
            wrhs = m;
            std::snprintf(witness, sizeof witness, "x0=%.9g y0=%.9g lambda=%.9g", x[0], y[0], l);
        }
    }
    return make_report(wlhs, wrhs, worst, tolerance, witness, n_pairs);
}

std::vector<double> superlevel_threshold_values(const GridFunction& f, std::int64_t count) {
    if (count < 2) throw std::invalid_argument("superlevel_threshold_values: count must be >= 2");
    if (f.max_value() == 0.0)
        throw std::invalid_argument("superlevel_threshold_values: function is identically zero");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (std::int64_t k = 1; k <= count; ++k)
        t[static_cast<std::size_t>(k - 1)] =
            f.max_value() * static_cast<double>(k) / static_cast<double>(count);
    t.back() = f.max_value();
    return t;
}

GridFunction marginal_last(const GridFunction& f) {
    const std::size_t n = f.dim();
    if (n < 2) throw std::invalid_argument("marginal_last: need dim >= 2");
    const std::int64_t m = f.shape().back();
    std::vector<long double> acc(static_cast<std::size_t>(m), 0.0L);

    std::vector<std::int64_t> idx(n, 0);
    const std::size_t total = f.values().size();
    for (std::size_t fl = 0; fl < total; ++fl) {
        double w = 1.0;
        for (std::size_t k = 0; k + 1 < n; ++k) w *= f.axis_weight(k, idx[k]);
        acc[static_cast<std::size_t>(idx[n - 1])] +=
            static_cast<long double>(f.values()[fl]) * w;
        for (std::size_t k = n; k-- > 0;) {
            if (++idx[k] < f.shape()[k]) break;
            idx[k] = 0;
        }
    }
    std::vector<double> vals(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) vals[i] = static_cast<double>(acc[i]);
    return GridFunction({f.box_min().back()}, {f.box_max().back()}, {m}, std::move(vals));
}

}  // namespace borell
