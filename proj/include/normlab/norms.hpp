#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "normlab/exponent.hpp"

namespace normlab {

/// lp (quasi-)norm of a vector, p in [1/2, inf]. For p < 1 this is the usual
/// quasi-norm (sum |x|^p)^(1/p); it is absolutely homogeneous and satisfies
/// ||x+y||_p^p <= ||x||_p^p + ||y||_p^p.
inline double vector_norm(std::span<const double> x, const Exponent& p) {
    if (p.is_infinite()) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::fabs(v));
        return m;
    }
    const double pv = p.value();
    double s = 0.0;
    if (pv == 1.0) {
        for (double v : x) s += std::fabs(v);
        return s;
    }
    if (pv == 2.0) {
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    // Scale by the max to avoid overflow/underflow of |x|^p.
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    if (m == 0.0) return 0.0;
    for (double v : x) {
        const double t = std::fabs(v) / m;
        if (t > 0.0) s += std::pow(t, pv);
    }
    return m * std::pow(s, 1.0 / pv);
}

/// sum_i |x_i|^p (the p-th power of the quasi-norm), p finite.
inline double abs_power_sum(std::span<const double> x, double p) {
    double s = 0.0;
    if (p == 1.0) {
        for (double v : x) s += std::fabs(v);
    } else if (p == 2.0) {
        for (double v : x) s += v * v;
    } else {
        for (double v : x)
            if (v != 0.0) s += std::pow(std::fabs(v), p);
    }
    return s;
}

/// Absolute values sorted descending.
inline std::vector<double> nonincreasing_rearrangement(std::span<const double> x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::fabs(x[i]);
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

/// Dual gauge of the cube-vertex polytope K attached to l_p: the value
/// max_{k <= n} k^(-1/p) * (sum of the k largest |y_j|). Satisfies
/// ||y||_K* <= ||y||_{p*} <= ln(en)^{1/p*} ||y||_K*.
inline double k_gauge_dual(std::span<const double> y, const Exponent& p) {
    if (y.empty()) return 0.0;
    if (!(p >= 1.0)) throw RegimeError("k_gauge_dual requires p >= 1");
    const std::vector<double> r = nonincreasing_rearrangement(y);
    double best = 0.0, partial = 0.0;
    for (std::size_t k = 1; k <= r.size(); ++k) {
        partial += r[k - 1];
        const double scale = p.is_infinite() ? 1.0 : std::pow(static_cast<double>(k), -1.0 / p.value());
        best = std::max(best, partial * scale);
    }
    return best;
}

/// Unit-l_r maximizer of x -> <a, x>, the Holder extremal point. The attained
/// value is ||a||_{r*}. Requires r >= 1. Returns the zero vector when a = 0.
inline std::vector<double> holder_extremal(std::span<const double> a, const Exponent& r) {
    std::vector<double> x(a.size(), 0.0);
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    if (m == 0.0) return x;
    if (r.is_infinite()) {
        for (std::size_t j = 0; j < a.size(); ++j) x[j] = a[j] >= 0.0 ? 1.0 : -1.0;
        return x;
    }
    if (r.is_one()) {
        std::size_t jbest = 0;
        for (std::size_t j = 1; j < a.size(); ++j)
            if (std::fabs(a[j]) > std::fabs(a[jbest])) jbest = j;
        x[jbest] = a[jbest] >= 0.0 ? 1.0 : -1.0;
        return x;
    }
    // x_j proportional to sign(a_j) |a_j|^(1/(r-1)), normalized in l_r.
    const double expo = 1.0 / (r.value() - 1.0);
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double t = std::fabs(a[j]) / m;
        x[j] = t > 0.0 ? std::copysign(std::pow(t, expo), a[j]) : 0.0;
    }
    const double nrm = vector_norm(x, r);
    for (double& v : x) v /= nrm;
    return x;
}

}  // namespace normlab
