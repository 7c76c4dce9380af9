#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "normlab/matrix.hpp"
#include "normlab/norms.hpp"
#include "normlab/rng.hpp"
#include "normlab/special.hpp"

namespace normlab {

struct RngSeed {
    std::uint64_t value = 0;
};

enum class EntryLaw { Gaussian, Rademacher, BoundedUniform, WeibullPsiR };

/// Distribution of a single matrix entry X_ij. All laws are symmetric and
/// mean-zero. WeibullPsiR samples the unit-scale symmetric Weibull
/// P(|Z| >= t) = exp(-t^r); the (K, L) fields are the psi_r tail certificate
/// P(|Z| >= t) <= K exp(-t^r / L) carried into bound formulas (the unit law
/// satisfies it with K = L = 1).
struct EntryModel {
    EntryLaw kind = EntryLaw::Gaussian;
    double r = 1.0;
    double K = 1.0;
    double L = 1.0;

    static EntryModel gaussian() { return {EntryLaw::Gaussian}; }
    static EntryModel rademacher() { return {EntryLaw::Rademacher}; }
    static EntryModel bounded_uniform() { return {EntryLaw::BoundedUniform}; }
    static EntryModel weibull_psi_r(double r, double K = 1.0, double L = 1.0) {
        if (!(r > 0.0 && r <= 2.0)) throw InputError("weibull_psi_r requires r in (0,2]");
        if (!(K >= 1.0)) throw InputError("weibull_psi_r requires K >= 1");
        if (!(L > 0.0)) throw InputError("weibull_psi_r requires L > 0");
        return {EntryLaw::WeibullPsiR, r, K, L};
    }

    double sample(Rng& rng) const {
        switch (kind) {
            case EntryLaw::Gaussian: return rng.next_gaussian();
            case EntryLaw::Rademacher: return rng.next_sign();
            case EntryLaw::BoundedUniform: return 2.0 * rng.next_unit_open() - 1.0;
            case EntryLaw::WeibullPsiR: {
                const double mag = std::pow(-std::log(rng.next_unit_open()), 1.0 / r);
                return rng.next_sign() * mag;
            }
        }
        return 0.0;
    }

    /// E|X|; the constant c of the certified lower bound.
    double abs_moment() const {
        switch (kind) {
            case EntryLaw::Gaussian: return std::sqrt(2.0 / std::numbers::pi);
            case EntryLaw::Rademacher: return 1.0;
            case EntryLaw::BoundedUniform: return 0.5;
            case EntryLaw::WeibullPsiR: return std::tgamma(1.0 / r + 1.0);
        }
        return 0.0;
    }

    double second_moment() const {
        switch (kind) {
            case EntryLaw::Gaussian: return 1.0;
            case EntryLaw::Rademacher: return 1.0;
            case EntryLaw::BoundedUniform: return 1.0 / 3.0;
            case EntryLaw::WeibullPsiR: return std::tgamma(2.0 / r + 1.0);
        }
        return 0.0;
    }

    double fourth_moment() const {
        switch (kind) {
            case EntryLaw::Gaussian: return 3.0;
            case EntryLaw::Rademacher: return 1.0;
            case EntryLaw::BoundedUniform: return 0.2;
            case EntryLaw::WeibullPsiR: return std::tgamma(4.0 / r + 1.0);
        }
        return 0.0;
    }

    const char* kind_name() const {
        switch (kind) {
            case EntryLaw::Gaussian: return "gaussian";
            case EntryLaw::Rademacher: return "rademacher";
            case EntryLaw::BoundedUniform: return "bounded_uniform";
            case EntryLaw::WeibullPsiR: return "weibull_psi_r";
        }
        return "?";
    }
};

/// m x n matrix of i.i.d. entries from the model; deterministic given seed.
inline DenseMatrix sample_matrix(const EntryModel& model, std::size_t m, std::size_t n, RngSeed seed) {
    DenseMatrix X(m, n);
    Rng rng(seed.value);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = X.row(i);
        for (std::size_t j = 0; j < n; ++j) row[j] = model.sample(rng);
    }
    return X;
}

/// X_A = A o X with a fresh sample of X.
inline DenseMatrix structured_realization(const DenseMatrix& A, const EntryModel& model, RngSeed seed) {
    return A.hadamard(sample_matrix(model, A.rows(), A.cols(), seed));
}

namespace detail {

/// Survival function and quantiles of V = |g| * Y where Y is a nonnegative
/// Weibull variable of shape s (P(Y >= t) = exp(-t^s)) independent of the
/// standard Gaussian g. The coupling construction needs the quantile of V as
/// a monotone function of a single uniform. For r = 2, s = inf and V = |g|.
///
/// S(t) = sqrt(2/pi) * int_0^inf exp(-(t/x)^s - x^2/2) dx, computed by a
/// trapezoid rule in log-substitution around the (unique) saddle point.
class GaussWeibullQuantile {
  public:
    explicit GaussWeibullQuantile(double r) : r_(r) {
        if (!(r > 0.0 && r <= 2.0)) throw InputError("coupling shape requires r in (0,2]");
        if (r == 2.0) {
            gaussian_only_ = true;
            return;
        }
        s_ = 2.0 * r / (2.0 - r);  // 1/s = 1/r - 1/2
        build_table();
    }

    double shape() const noexcept { return s_; }
    bool gaussian_only() const noexcept { return gaussian_only_; }

    double survival(double t) const {
        if (gaussian_only_) return std::erfc(t / std::numbers::sqrt2);
        if (t <= 0.0) return 1.0;
        // phi(u) = t^s e^{-su} + e^{2u}/2 - u is strictly convex; locate its
        // minimizer by bisection on phi' and integrate a fixed window.
        const double ts = std::pow(t, s_);
        const auto dphi = [&](double u) { return -s_ * ts * std::exp(-s_ * u) + std::exp(2.0 * u) - 1.0; };
        double lo = -5.0, hi = 5.0;
        while (dphi(lo) > 0.0) lo -= 5.0;
        while (dphi(hi) < 0.0) hi += 5.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dphi(mid) < 0.0 ? lo : hi) = mid;
        }
        const double ustar = 0.5 * (lo + hi);
        const auto phi = [&](double u) { return ts * std::exp(-s_ * u) + 0.5 * std::exp(2.0 * u) - u; };
        const double pmin = phi(ustar);
        double a = ustar, b = ustar;
        while (phi(a) < pmin + 45.0) a -= 0.5;
        while (phi(b) < pmin + 45.0) b += 0.5;
        const int nodes = 360;
        const double h = (b - a) / nodes;
        double acc = 0.0;
        for (int k = 0; k <= nodes; ++k) {
            const double u = a + k * h;
            const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
            acc += w * std::exp(-(phi(u) - pmin));
        }
        return std::sqrt(2.0 / std::numbers::pi) * acc * h * std::exp(-pmin);
    }

    /// Right-continuous generalized inverse of the CDF at u in (0,1).
    double quantile(double u) const {
        if (!(u > 0.0 && u < 1.0)) throw InputError("quantile requires u in (0,1)");
        if (gaussian_only_) return halfnormal_quantile(u);
        const double sigma = 1.0 - u;  // target survival
        const double log_sigma = std::log(sigma);
        if (log_sigma >= log_surv_.front()) {
            // Below the table: bisect on [0, t_front].
            double lo = 0.0, hi = std::exp(log_t_.front());
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (survival(mid) > sigma ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        if (log_sigma <= log_surv_.back()) {
            double lo = std::exp(log_t_.back()), hi = 2.0 * lo;
            while (survival(hi) > sigma) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (survival(mid) > sigma ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        // Bracket on the table (log_surv_ is strictly decreasing).
        std::size_t lo = 0, hi = log_surv_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (log_surv_[mid] > log_sigma ? lo : hi) = mid;
        }
        double t_lo = std::exp(log_t_[lo]), t_hi = std::exp(log_t_[hi]);
        // Illinois-damped false position on log-survival with exact
        // evaluations; the Illinois halving prevents one-sided stagnation.
        double f_lo = log_surv_[lo] - log_sigma, f_hi = log_surv_[hi] - log_sigma;
        int last_side = 0;
        double t = 0.5 * (t_lo + t_hi);
        for (int it = 0; it < 24; ++it) {
            const double denom = f_lo - f_hi;
            t = denom != 0.0 ? (t_lo * (-f_hi) + t_hi * f_lo) / denom : 0.5 * (t_lo + t_hi);
            if (!(t > t_lo && t < t_hi)) t = 0.5 * (t_lo + t_hi);
            const double f = std::log(survival(t)) - log_sigma;
            if (std::fabs(f) <= 1e-12 * std::max(1.0, std::fabs(log_sigma))) break;
            if (f > 0.0) {
                t_lo = t;
                f_lo = f;
                if (last_side == 1) f_hi *= 0.5;
                last_side = 1;
            } else {
                t_hi = t;
                f_hi = f;
                if (last_side == -1) f_lo *= 0.5;
                last_side = -1;
            }
            if (t_hi - t_lo <= 1e-14 * t_hi) break;
        }
        return t;
    }

  private:
    void build_table() {
        const double t0 = 1e-8;
        double t = t0;
        while (true) {
            const double s = survival(t);
            log_t_.push_back(std::log(t));
            log_surv_.push_back(std::log(s));
            if (s < 1e-17) break;
            t *= 1.25;
            if (t > 1e12) break;
        }
    }

    double r_;
    double s_ = std::numeric_limits<double>::infinity();
    bool gaussian_only_ = false;
    std::vector<double> log_t_, log_surv_;
};

}  // namespace detail

/// Comonotone coupling of Lemma-style psi_r tails: U is distributed with the
/// extremal survival min(1, K exp(-t^r / L)) and V as |g| * Y (Y Weibull of
/// shape s, 1/s = 1/r - 1/2), both generated as generalized inverse CDFs of
/// one shared uniform. Pointwise,
///     U <= (8L)^(1/r) * ((ln(K/c)/4)^(1/r) + V),   c = sqrt(2/pi) e^-2.
class CoupledPsiSampler {
  public:
    CoupledPsiSampler(double r, double K, double L) : r_(r), K_(K), L_(L), vq_(r) {
        if (!(r > 0.0 && r <= 2.0)) throw InputError("coupling requires r in (0,2]");
        if (!(K >= 1.0)) throw InputError("coupling requires K >= 1");
        if (!(L > 0.0)) throw InputError("coupling requires L > 0");
    }

    static constexpr double domination_c() {
        return 0.1079741601974648;  // sqrt(2/pi) * e^-2
    }

    double bound_scale() const { return std::pow(8.0 * L_, 1.0 / r_); }
    double bound_offset() const { return std::pow(std::log(K_ / domination_c()) / 4.0, 1.0 / r_); }

    /// One coupled draw (U, V) from a shared uniform.
    std::pair<double, double> draw(Rng& rng) const {
        const double u = rng.next_unit_open();
        const double U = std::pow(L_ * std::log(K_ / (1.0 - u)), 1.0 / r_);
        const double V = vq_.quantile(u);
        return {U, V};
    }

  private:
    double r_, K_, L_;
    detail::GaussWeibullQuantile vq_;
};

/// Single coupled draw; the grid tests use CoupledPsiSampler directly to
/// amortize the quantile table.
inline std::pair<double, double> coupled_psi_pair(double r, double K, double L, RngSeed seed) {
    CoupledPsiSampler sampler(r, K, L);
    Rng rng(seed.value);
    return sampler.draw(rng);
}

/// Monte Carlo mean and standard error of max_{i,j} |a_ij X_ij|.
inline MeanStderr empirical_emax(const DenseMatrix& A, const EntryModel& model, std::size_t trials,
                                 RngSeed seed, unsigned threads = 1) {
    if (trials < 2) throw InputError("empirical_emax requires trials >= 2");
    std::vector<double> maxes(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        Rng rng(derive_stream(seed.value, t));
        double mx = 0.0;
        for (std::size_t i = 0; i < A.rows(); ++i) {
            const auto row = A.row(i);
            for (std::size_t j = 0; j < A.cols(); ++j)
                mx = std::max(mx, std::fabs(row[j] * model.sample(rng)));
        }
        maxes[t] = mx;
    });
    return mean_stderr(maxes);
}

enum class SurrogateAxis { Columns, Rows };

/// Deterministic surrogate for E max |a_ij g_ij|: sort columns (rows) by
/// descending max absolute entry and weight the j-th largest by
/// sqrt(ln(j+1)). Equals max_j sqrt(ln(j+1)) * (sorted column maxes)_j.
inline double emax_column_surrogate(const DenseMatrix& A, SurrogateAxis axis = SurrogateAxis::Columns) {
    std::vector<double> maxes;
    if (axis == SurrogateAxis::Columns) {
        maxes.assign(A.cols(), 0.0);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            const auto row = A.row(i);
            for (std::size_t j = 0; j < A.cols(); ++j) maxes[j] = std::max(maxes[j], std::fabs(row[j]));
        }
    } else {
        maxes.assign(A.rows(), 0.0);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (double v : A.row(i)) maxes[i] = std::max(maxes[i], std::fabs(v));
    }
    std::sort(maxes.begin(), maxes.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t j = 0; j < maxes.size(); ++j)
        best = std::max(best, std::sqrt(std::log(static_cast<double>(j + 2))) * maxes[j]);
    return best;
}

}  // namespace normlab
