#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "normlab/util.hpp"

namespace normlab {

/// An exponent in [1/2, inf], with infinity as an explicit tagged state
/// rather than a large float. Values within 1e-12 of the dispatch-critical
/// points 1/2, 1 and 2 are snapped on construction, so formula-regime
/// dispatch (p <= 1, p = 2, ...) is deterministic.
///
/// Holder exponents p, q live in [1,inf]; halved exponents p/2, q/2 may be
/// quasi-norm exponents in [1/2, 1).
class Exponent {
  public:
    static constexpr double kSnapTol = 1e-12;

    static Exponent finite(double v) {
        if (!(v >= 0.5) || !std::isfinite(v))
            throw InputError("exponent must be a finite real >= 1/2 (got " + std::to_string(v) + ")");
        Exponent e;
        e.value_ = snap(v);
        e.infinite_ = false;
        return e;
    }

    static Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        e.value_ = std::numeric_limits<double>::infinity();
        return e;
    }

    /// Parses "inf" (any case) or a decimal string; "2.0" and "2" canonicalize
    /// identically.
    static Exponent parse(const std::string& text);

    bool is_infinite() const noexcept { return infinite_; }
    bool is_one() const noexcept { return !infinite_ && value_ == 1.0; }
    bool is_two() const noexcept { return !infinite_ && value_ == 2.0; }

    /// Finite value; throws on infinity.
    double value() const {
        if (infinite_) throw RegimeError("finite exponent required, got inf");
        return value_;
    }

    /// 1/p with the convention 1/inf = 0.
    double inv() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

    /// x^(1/p); identity-safe for p = inf (returns 1 for x > 0).
    double pow_inv(double x) const { return infinite_ ? 1.0 : std::pow(x, 1.0 / value_); }

    bool operator==(const Exponent& o) const noexcept {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const Exponent& o) const noexcept { return !(*this == o); }

    bool operator<(double v) const noexcept { return !infinite_ && value_ < v; }
    bool operator<=(double v) const noexcept { return !infinite_ && value_ <= v; }
    bool operator>(double v) const noexcept { return infinite_ || value_ > v; }
    bool operator>=(double v) const noexcept { return infinite_ || value_ >= v; }

    std::string str() const {
        if (infinite_) return "inf";
        double iv;
        if (std::modf(value_, &iv) == 0.0 && value_ < 1e15)
            return std::to_string(static_cast<long long>(value_));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value_);
        return buf;
    }

  private:
    static double snap(double v) noexcept {
        for (double target : {0.5, 1.0, 2.0})
            if (std::fabs(v - target) <= kSnapTol) return target;
        return v;
    }

    double value_ = 1.0;
    bool infinite_ = false;
};

inline Exponent Exponent::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(c));
    if (t == "inf" || t == "infinity" || t == "oo") return Exponent::infinity();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw InputError("malformed exponent '" + text + "'");
    }
    if (pos != t.size()) throw InputError("malformed exponent '" + text + "'");
    return Exponent::finite(v);
}

/// Holder conjugate p* with 1/p + 1/p* = 1; 1* = inf, inf* = 1, 2* = 2.
inline Exponent conjugate(const Exponent& p) {
    if (p.is_infinite()) return Exponent::finite(1.0);
    if (p < 1.0) throw RegimeError("conjugate requires p >= 1");
    if (p.is_one()) return Exponent::infinity();
    if (p.is_two()) return p;
    const double v = p.value();
    return Exponent::finite(v / (v - 1.0));
}

/// p/2, mapping inf to inf. The result may be a quasi-norm exponent < 1.
inline Exponent half(const Exponent& p) {
    if (p.is_infinite()) return Exponent::infinity();
    return Exponent::finite(p.value() / 2.0);
}

/// 2q/(2-q) for q <= 2, with q = 2 mapping to inf. This is the exponent of
/// the column terms b_j; calling it with q > 2 is a regime violation.
inline Exponent two_q_over_two_minus_q(const Exponent& q) {
    if (q > 2.0) throw RegimeError("2q/(2-q) requires q <= 2");
    if (q.is_two()) return Exponent::infinity();
    const double v = q.value();
    return Exponent::finite(2.0 * v / (2.0 - v));
}

/// 2p/(p-2) for p >= 2, with p = 2 mapping to inf and p = inf to 2. This is
/// the exponent of the row terms d_i.
inline Exponent two_p_over_p_minus_two(const Exponent& p) {
    if (p.is_infinite()) return Exponent::finite(2.0);
    if (p < 2.0) throw RegimeError("2p/(p-2) requires p >= 2");
    if (p.is_two()) return Exponent::infinity();
    const double v = p.value();
    return Exponent::finite(2.0 * v / (v - 2.0));
}

/// Gaussian moment constant gamma_q = (E|g|^q)^(1/q) for standard Gaussian g,
/// via the closed form (2^(q/2) Gamma((q+1)/2) / sqrt(pi))^(1/q).
/// Monotone non-decreasing in q, gamma_2 = 1. q = inf is rejected.
inline double gaussian_moment(const Exponent& q) {
    if (q.is_infinite()) throw RegimeError("gamma_q is undefined for q = inf");
    const double v = q.value();
    if (v < 1.0) throw RegimeError("gamma_q requires q >= 1");
    const double log_moment = 0.5 * v * std::numbers::ln2 + std::lgamma(0.5 * (v + 1.0)) - 0.5 * std::log(std::numbers::pi);
    return std::exp(log_moment / v);
}

}  // namespace normlab
