#include "borell/maps.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace borell {

namespace {

std::string fmt_weight(double lambda) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", lambda);
    return buf;
}

// Positive sample points spanning the validation window of a declared range.
std::vector<double> sample_points(const std::array<double, 2>& range) {
    const double lo = std::max(range[0], 1e-3);
    const double hi = std::min(range[1], 1e3);
    std::vector<double> pts;
    for (double v = lo; v <= hi * 1.0000001; v *= 31.62277660168379)
        pts.push_back(v);
    return pts;
}

void validate_partials(const ScalarMap& m) {
    const bool degenerate = m.lambda == 0.0 || m.lambda == 1.0;
    const double floor_dx = degenerate ? -1e-12 : 1e-15;
    for (double x : sample_points(m.x_range)) {
        for (double y : sample_points(m.y_range)) {
            if (!(m.dx(x, y) >= floor_dx && m.dy(x, y) >= floor_dx))
                throw std::invalid_argument(
                    "coordinate map " + m.spec + " has nonpositive partial at sampled point");
        }
    }
}

}  // namespace

CoordinateMap::CoordinateMap(std::vector<ScalarMap> comps) : comps_(std::move(comps)) {
    if (comps_.empty())
        throw std::invalid_argument("coordinate map needs at least one component");
    for (const auto& m : comps_)
        validate_partials(m);
}

CoordinateMap CoordinateMap::affine(double lambda) {
    Weight w(lambda);  // range check
    ScalarMap m;
    m.spec = "affine:lambda=" + fmt_weight(lambda);
    m.lambda = lambda;
    m.x_range = {-1e9, 1e9};
    m.y_range = {-1e9, 1e9};
    m.value = [lambda](double x, double y) { return (1.0 - lambda) * x + lambda * y; };
    m.dx = [lambda](double, double) { return 1.0 - lambda; };
    m.dy = [lambda](double, double) { return lambda; };
    (void)w;
    return CoordinateMap({m});
}

CoordinateMap CoordinateMap::powermean(const ExtReal& p, double lambda) {
    Weight w(lambda);
    if (!p.finite())
        throw std::invalid_argument("powermean map requires finite p");
    const double pv = p.value();
    ScalarMap m;
    m.spec = "powermean:p=" + format_ext(p) + ",lambda=" + fmt_weight(lambda);
    m.lambda = lambda;
    m.x_range = {0.0, 1e9};
    m.y_range = {0.0, 1e9};
    const ExtReal ps = p;
    m.value = [ps, lambda](double x, double y) { return mean(ps, Weight(lambda), x, y); };
    if (pv == 0.0) {
        // M_0 = x^{1-l} y^l: partials are (1-l) M/x and l M/y.
        m.dx = [lambda](double x, double y) {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            return (1.0 - lambda) * std::pow(x, -lambda) * std::pow(y, lambda);
        };
        m.dy = [lambda](double x, double y) {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            return lambda * std::pow(x, 1.0 - lambda) * std::pow(y, lambda - 1.0);
        };
    } else {
        // d/dx M_p = (1-l) (x/M_p)^{p-1}.
        const ExtReal pc = p;
        m.dx = [pc, pv, lambda](double x, double y) {
            const double mv = mean(pc, Weight(lambda), x, y);
            if (x <= 0.0 || mv <= 0.0) return pv > 1.0 ? 0.0 : (lambda < 1.0 ? 1e300 : 0.0);
            return (1.0 - lambda) * std::pow(x / mv, pv - 1.0);
        };
        m.dy = [pc, pv, lambda](double x, double y) {
            const double mv = mean(pc, Weight(lambda), x, y);
            if (y <= 0.0 || mv <= 0.0) return pv > 1.0 ? 0.0 : (lambda > 0.0 ? 1e300 : 0.0);
            return lambda * std::pow(y / mv, pv - 1.0);
        };
    }
    (void)w;
    return CoordinateMap({m});
}

CoordinateMap CoordinateMap::per_coordinate(std::vector<ScalarMap> comps) {
    return CoordinateMap(std::move(comps));
}

double CoordinateMap::lambda_hint() const {
    const double first = comps_[0].lambda;
    for (const auto& m : comps_)
        if (m.lambda != first) return -1.0;
    return first;
}

std::string CoordinateMap::describe() const {
    if (comps_.size() == 1) return comps_[0].spec;
    std::string out = comps_[0].spec;
    for (std::size_t k = 1; k < comps_.size(); ++k) out += ";" + comps_[k].spec;
    return out;
}

Combiner::Combiner(std::string spec, std::function<double(double, double)> fn, double lambda)
    : spec_(std::move(spec)), fn_(std::move(fn)), lambda_(lambda) {
    spot_validate();
}

void Combiner::spot_validate() const {
    static const double pts[] = {0.0, 0.25, 1.0, 4.7};
    static const double scales[] = {0.5, 2.0, 3.7};
    for (double a : pts) {
        for (double b : pts) {
            const double v = fn_(a, b);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("combiner " + spec_ + " not finite nonnegative");
            for (double t : scales) {
                if (std::fabs(fn_(t * a, t * b) - t * v) > 1e-9 * (1.0 + t * v))
                    throw std::invalid_argument("combiner " + spec_ + " fails 1-homogeneity");
            }
            if (fn_(a + 0.5, b) < v - 1e-12 || fn_(a, b + 0.5) < v - 1e-12)
                throw std::invalid_argument("combiner " + spec_ + " not nondecreasing");
        }
    }
}

Combiner Combiner::mean_family(const ExtReal& s, double lambda) {
    Weight w(lambda);
    (void)w;
    const ExtReal sc = s;
    auto fn = [sc, lambda](double a, double b) { return mean(sc, Weight(lambda), a, b); };
    return Combiner("mean:s=" + format_ext(s) + ",lambda=" + fmt_weight(lambda), fn, lambda);
}

Combiner Combiner::minkowski(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("minkowski combiner requires n >= 1");
    const double nd = static_cast<double>(n);
    auto fn = [nd](double a, double b) {
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("combiner arguments must be nonnegative");
        if (a == 0.0) return b;
        if (b == 0.0) return a;
        return std::pow(std::pow(a, 1.0 / nd) + std::pow(b, 1.0 / nd), nd);
    };
    return Combiner("minkowski:n=" + std::to_string(n), fn, -1.0);
}

namespace {

// "family:key=value,key=value" -> family + kv list; throws on malformed input.
struct SpecArgs {
    std::string family;
    std::vector<std::pair<std::string, std::string>> kv;

    const std::string& get(const std::string& key) const {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw std::invalid_argument("map spec missing key '" + key + "'");
    }
};

SpecArgs split_spec(const std::string& spec) {
    SpecArgs out;
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0)
        throw std::invalid_argument("malformed map spec '" + spec + "'");
    out.family = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string item = rest.substr(pos, comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
            throw std::invalid_argument("malformed map spec '" + spec + "'");
        out.kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        pos = comma + 1;
    }
    if (out.kv.empty())
        throw std::invalid_argument("malformed map spec '" + spec + "'");
    return out;
}

double parse_weight(const std::string& text) {
    const ExtReal v = parse_ext(text);
    if (!v.finite())
        throw std::invalid_argument("weight must be finite");
    return v.value();
}

}  // namespace

CoordinateMap parse_coordinate_map(const std::string& spec) {
    const SpecArgs args = split_spec(spec);
    if (args.family == "affine")
        return CoordinateMap::affine(parse_weight(args.get("lambda")));
    if (args.family == "powermean")
        return CoordinateMap::powermean(parse_ext(args.get("p")), parse_weight(args.get("lambda")));
    throw std::invalid_argument("unknown coordinate map family '" + args.family + "'");
}

Combiner parse_combiner(const std::string& spec) {
    const SpecArgs args = split_spec(spec);
    if (args.family == "mean")
        return Combiner::mean_family(parse_ext(args.get("s")), parse_weight(args.get("lambda")));
    if (args.family == "minkowski") {
        const ExtReal n = parse_ext(args.get("n"));
        if (!n.finite() || n.value() != std::floor(n.value()))
            throw std::invalid_argument("minkowski combiner takes integer n");
        return Combiner::minkowski(static_cast<std::int64_t>(n.value()));
    }
    throw std::invalid_argument("unknown combiner family '" + args.family + "'");
}

}  // namespace borell
