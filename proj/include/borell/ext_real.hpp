#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace borell {

// Extended real: a finite double or one of the two infinities.  NaN is rejected
// at every entry point so downstream arithmetic never has to re-check.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}
    ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not a value");
    }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    bool finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    // Finite value; throws on infinities so callers cannot leak them into plain math.
    double value() const {
        if (!finite()) throw std::invalid_argument("ExtReal: infinite where finite required");
        return v_;
    }
    // Raw double including +-inf, for comparisons and formatting.
    double raw() const { return v_; }

    friend bool operator==(const ExtReal& a, const ExtReal& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ExtReal& a, const ExtReal& b) { return a.v_ != b.v_; }
    friend bool operator<(const ExtReal& a, const ExtReal& b) { return a.v_ < b.v_; }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a.v_ <= b.v_; }
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return a.v_ > b.v_; }
    friend bool operator>=(const ExtReal& a, const ExtReal& b) { return a.v_ >= b.v_; }

private:
    double v_;
};

// Reciprocal under the exponent conventions: 1/0 = +inf, 1/(+-inf) = 0.
inline ExtReal recip(const ExtReal& s) {
    if (!s.finite()) return ExtReal(0.0);
    double v = s.value();
    if (v == 0.0) return ExtReal::pos_inf();
    return ExtReal(1.0 / v);
}

// Sum of two extended reals; (+inf) + (-inf) is rejected as ill-defined.
inline ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
        throw std::invalid_argument("ext_add: inf + (-inf) is undefined");
    return ExtReal(a.raw() + b.raw());
}

inline std::string format_ext(const ExtReal& s) {
    if (s.is_pos_inf()) return "inf";
    if (s.is_neg_inf()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", s.value());
    return buf;
}

inline ExtReal parse_ext(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t.front() == '+') t = t.substr(1);
    if (t == "inf" || t == "Inf" || t == "INF") return ExtReal::pos_inf();
    if (t == "-inf" || t == "-Inf" || t == "-INF") return ExtReal::neg_inf();
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse extended real: '" + text + "'");
    }
    if (pos != t.size()) throw std::invalid_argument("cannot parse extended real: '" + text + "'");
    return ExtReal(v);
}

}  // namespace borell
