#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "normlab/matrix.hpp"
#include "normlab/norms.hpp"
#include "normlab/rng.hpp"

namespace normlab {

enum class CertKind { Exact, Bracket, HeuristicLowerBound };

inline const char* to_string(CertKind k) {
    switch (k) {
        case CertKind::Exact: return "Exact";
        case CertKind::Bracket: return "Bracket";
        case CertKind::HeuristicLowerBound: return "HeuristicLowerBound";
    }
    return "?";
}

/// Result of an operator norm computation ||B: l_r -> l_s||.
///
/// kind = Exact:  value is the norm (up to floating arithmetic / the stated
///                iteration tolerance for the spectral case).
/// kind = Bracket: the norm lies in [lower, upper]; value == lower, which is
///                achieved by the witness.
/// kind = HeuristicLowerBound: value == lower is achieved by the witness but
///                no upper estimate is attached (upper = +inf).
struct NormResult {
    double value = 0.0;
    CertKind kind = CertKind::Exact;
    double lower = 0.0;
    double upper = 0.0;
    std::string strategy;
    std::vector<double> witness;
};

struct OpNormOptions {
    int restarts = 20;        // multistart count for heuristic regimes
    int max_iter = 1000;      // per-restart iteration cap
    double tol = 1e-10;       // convergence tolerance on the Rayleigh value
    int ascent_iters = 400;   // hill-climb steps for quasi-norm regimes
    int sign_enum_cap = 20;   // max enumerated dimension (2^cap evaluations)
    std::uint64_t seed = 0x6e6f726d6c6162ull;
};

namespace detail {

/// Norm of a target vector, specialized for the hot s in {1, 2, inf} paths.
class NormEval {
  public:
    explicit NormEval(const Exponent& s) {
        if (s.is_infinite())
            mode_ = Mode::Max;
        else if (s.is_one())
            mode_ = Mode::Abs;
        else if (s.is_two())
            mode_ = Mode::Two;
        else {
            mode_ = Mode::Gen;
            sv_ = s.value();
        }
    }

    double operator()(std::span<const double> y) const {
        double acc = 0.0;
        switch (mode_) {
            case Mode::Abs:
                for (double v : y) acc += std::fabs(v);
                return acc;
            case Mode::Two:
                for (double v : y) acc += v * v;
                return std::sqrt(acc);
            case Mode::Max:
                for (double v : y) acc = std::max(acc, std::fabs(v));
                return acc;
            case Mode::Gen:
                for (double v : y)
                    if (v != 0.0) acc += std::pow(std::fabs(v), sv_);
                return std::pow(acc, 1.0 / sv_);
        }
        return acc;
    }

  private:
    enum class Mode { Abs, Two, Max, Gen };
    Mode mode_ = Mode::Two;
    double sv_ = 2.0;
};

inline std::vector<double> column_norms(const DenseMatrix& B, const Exponent& s) {
    const std::size_t m = B.rows(), n = B.cols();
    std::vector<double> acc(n, 0.0);
    if (s.is_infinite()) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto r = B.row(i);
            for (std::size_t j = 0; j < n; ++j) acc[j] = std::max(acc[j], std::fabs(r[j]));
        }
        return acc;
    }
    const double sv = s.value();
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = B.row(i);
        if (sv == 1.0)
            for (std::size_t j = 0; j < n; ++j) acc[j] += std::fabs(r[j]);
        else if (sv == 2.0)
            for (std::size_t j = 0; j < n; ++j) acc[j] += r[j] * r[j];
        else
            for (std::size_t j = 0; j < n; ++j)
                if (r[j] != 0.0) acc[j] += std::pow(std::fabs(r[j]), sv);
    }
    if (sv != 1.0)
        for (double& v : acc) v = sv == 2.0 ? std::sqrt(v) : std::pow(v, 1.0 / sv);
    return acc;
}

inline std::vector<double> basis_vector(std::size_t n, std::size_t j, double sign = 1.0) {
    std::vector<double> e(n, 0.0);
    e[j] = sign;
    return e;
}

inline NormResult exact_result(double value, std::string strategy, std::vector<double> witness) {
    NormResult r;
    r.value = r.lower = r.upper = value;
    r.kind = CertKind::Exact;
    r.strategy = std::move(strategy);
    r.witness = std::move(witness);
    return r;
}

/// max_j ||col_j||_s with the first maximizing column as witness. Exact for
/// r <= 1 <= s (convex hull of the l_r ball is the cross-polytope) and for
/// r <= s <= 1 (subadditivity of t -> |t|^s).
inline NormResult column_formula(const DenseMatrix& B, const Exponent& s, const char* label) {
    const auto norms = column_norms(B, s);
    std::size_t jbest = 0;
    for (std::size_t j = 1; j < norms.size(); ++j)
        if (norms[j] > norms[jbest]) jbest = j;
    return exact_result(norms[jbest], label, basis_vector(B.cols(), jbest));
}

/// max_i ||row_i||_{r*} for s = inf, r >= 1; witness is the Holder extremal
/// of the best row.
inline NormResult row_formula(const DenseMatrix& B, const Exponent& r) {
    const Exponent rstar = conjugate(r);
    double best = -1.0;
    std::size_t ibest = 0;
    for (std::size_t i = 0; i < B.rows(); ++i) {
        const double v = vector_norm(B.row(i), rstar);
        if (v > best) {
            best = v;
            ibest = i;
        }
    }
    const auto row = B.row(ibest);
    return exact_result(best, "row-formula", holder_extremal({row.data(), row.size()}, r));
}

/// Largest eigenvalue of a symmetric tridiagonal matrix (diagonal a,
/// off-diagonal b) by Sturm-sequence bisection.
inline double tridiag_max_eig(std::span<const double> a, std::span<const double> b) {
    const std::size_t k = a.size();
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const double off = (i > 0 ? std::fabs(b[i - 1]) : 0.0) + (i + 1 < k ? std::fabs(b[i]) : 0.0);
        hi = std::max(hi, a[i] + off);
        lo = std::min(lo, a[i] - off);
    }
    // count of eigenvalues < x via the Sturm sequence
    const auto count_below = [&](double x) {
        std::size_t cnt = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            d = a[i] - x - (i > 0 ? b[i - 1] * b[i - 1] / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    for (int it = 0; it < 120 && hi - lo > 1e-16 * std::max(1.0, std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (count_below(mid) == k ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Largest singular value via Lanczos on the Gram operator of the smaller
/// side, with full reorthogonalization. Handles clustered top singular
/// values (e.g. Gaussian diagonals) far faster than plain power iteration.
inline NormResult spectral_norm(const DenseMatrix& B, const OpNormOptions& opts) {
    const bool use_rows = B.rows() < B.cols();  // iterate in the smaller space
    const std::size_t dim = use_rows ? B.rows() : B.cols();
    const std::size_t other = use_rows ? B.cols() : B.rows();
    std::vector<double> tmp(other);
    const auto gram_apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        if (use_rows) {
            B.multiply_transposed(x, tmp);
            B.multiply(tmp, y);
        } else {
            B.multiply(x, tmp);
            B.multiply_transposed(tmp, y);
        }
    };

    const std::size_t kmax = std::min<std::size_t>(dim, 300);
    std::vector<std::vector<double>> basis;
    basis.reserve(kmax);
    std::vector<double> alpha, beta;

    std::vector<double> v(dim);
    Rng rng(derive_stream(opts.seed, 0x1a9c205));
    for (double& x : v) x = rng.next_gaussian();
    double nv = vector_norm(v, Exponent::finite(2.0));
    for (double& x : v) x /= nv;

    std::vector<double> w(dim);
    double lambda_prev = -1.0;
    for (std::size_t j = 0; j < kmax; ++j) {
        basis.push_back(v);
        gram_apply(v, w);
        double a = 0.0;
        for (std::size_t i = 0; i < dim; ++i) a += w[i] * v[i];
        alpha.push_back(a);
        // w -= alpha v + beta v_prev, then full reorthogonalization
        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * v[i];
        if (j > 0)
            for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
        for (const auto& u : basis) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += w[i] * u[i];
            for (std::size_t i = 0; i < dim; ++i) w[i] -= dot * u[i];
        }
        const double lambda = tridiag_max_eig(alpha, beta);
        const double b = vector_norm(w, Exponent::finite(2.0));
        if (b <= 1e-14 * std::max(1.0, std::sqrt(std::fabs(lambda)))) break;  // invariant subspace
        if (lambda_prev >= 0.0 && std::fabs(lambda - lambda_prev) <= 1e-15 * std::max(lambda, 1e-300))
            break;
        lambda_prev = lambda;
        beta.push_back(b);
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / b;
    }

    const double lambda = std::max(0.0, tridiag_max_eig(alpha, beta));
    const double sigma = std::sqrt(lambda);

    // Ritz vector by inverse iteration on the tridiagonal, mapped back and
    // converted to a right singular vector when we worked on the row side.
    const std::size_t k = alpha.size();
    std::vector<double> y(k, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
        // solve (T - (lambda + eps) I) z = y by the Thomas algorithm
        const double shift = lambda * (1.0 + 1e-12) + 1e-300;
        std::vector<double> diag(k), rhs = y;
        for (std::size_t i = 0; i < k; ++i) diag[i] = alpha[i] - shift;
        for (std::size_t i = 1; i < k; ++i) {
            if (diag[i - 1] == 0.0) diag[i - 1] = -1e-300;
            const double f = beta[i - 1] / diag[i - 1];
            diag[i] -= f * beta[i - 1];
            rhs[i] -= f * rhs[i - 1];
        }
        if (diag[k - 1] == 0.0) diag[k - 1] = -1e-300;
        y[k - 1] = rhs[k - 1] / diag[k - 1];
        for (std::size_t i = k - 1; i-- > 0;) y[i] = (rhs[i] - beta[i] * y[i + 1]) / diag[i];
        double ny = vector_norm(y, Exponent::finite(2.0));
        if (ny == 0.0 || !std::isfinite(ny)) {
            y.assign(k, 1.0 / std::sqrt(static_cast<double>(k)));
            break;
        }
        for (double& t : y) t /= ny;
    }
    std::vector<double> ritz(dim, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < dim; ++i) ritz[i] += y[j] * basis[j][i];
    std::vector<double> witness;
    if (use_rows) {
        witness.assign(B.cols(), 0.0);
        B.multiply_transposed(ritz, witness);
    } else {
        witness = std::move(ritz);
    }
    const double nw2 = vector_norm(witness, Exponent::finite(2.0));
    if (nw2 > 0.0)
        for (double& t : witness) t /= nw2;
    else
        witness = basis_vector(B.cols(), 0);
    return exact_result(sigma, "spectral-lanczos", std::move(witness));
}

/// Exhaustive max over sign vectors for r = inf (extreme points of the cube),
/// valid for convex targets s >= 1. Gray-code order keeps updates O(m).
inline NormResult sign_enumeration(const DenseMatrix& B, const Exponent& s) {
    const std::size_t m = B.rows(), n = B.cols();
    const NormEval ns(s);
    std::vector<double> eps(n, 1.0), y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = B.row(i);
        for (std::size_t j = 0; j < n; ++j) y[i] += r[j];
    }
    double best = ns(y);
    std::vector<double> best_eps = eps;
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t g = 1; g < total; ++g) {
        const unsigned j = static_cast<unsigned>(std::countr_zero(g));
        eps[j] = -eps[j];
        const double step = 2.0 * eps[j];
        for (std::size_t i = 0; i < m; ++i) y[i] += step * B(i, j);
        const double v = ns(y);
        if (v > best) {
            best = v;
            best_eps = eps;
        }
    }
    return exact_result(best, "sign-enum", std::move(best_eps));
}

/// Dual route for s = 1: ||B: l_r -> l_1|| = max over sign vectors d of
/// ||B^T d||_{r*}; enumerates the target dimension.
inline NormResult sign_enumeration_dual(const DenseMatrix& B, const Exponent& r) {
    const NormResult t = sign_enumeration(B.transpose(), conjugate(r));
    std::vector<double> bt(B.cols());
    B.multiply_transposed(t.witness, bt);
    NormResult out = exact_result(t.value, "sign-enum-dual", holder_extremal(bt, r));
    return out;
}

/// For entrywise-nonnegative B and r = inf the all-ones vector dominates
/// every feasible point coordinatewise in |Bx|, for any s.
inline NormResult nonneg_allones(const DenseMatrix& B, const Exponent& s) {
    std::vector<double> y(B.rows(), 0.0);
    for (std::size_t i = 0; i < B.rows(); ++i) {
        const auto r = B.row(i);
        for (double v : r) y[i] += v;
    }
    return exact_result(vector_norm(y, s), "nonneg-ones", std::vector<double>(B.cols(), 1.0));
}

/// For entrywise-nonnegative B and s = 1, ||Bx||_1 = <colsums, x> on x >= 0,
/// so the norm is the Holder dual value of the column-sum vector.
inline NormResult nonneg_colsum_dual(const DenseMatrix& B, const Exponent& r) {
    std::vector<double> c(B.cols(), 0.0);
    for (std::size_t i = 0; i < B.rows(); ++i) {
        const auto row = B.row(i);
        for (std::size_t j = 0; j < B.cols(); ++j) c[j] += row[j];
    }
    const double value = vector_norm(c, conjugate(r));
    return exact_result(value, "nonneg-colsum", holder_extremal(c, r));
}

/// Normalize x to the unit l_r sphere in place; returns false if x = 0.
inline bool normalize(std::vector<double>& x, const Exponent& r) {
    const double nx = vector_norm(x, r);
    if (nx == 0.0 || !std::isfinite(nx)) return false;
    for (double& v : x) v /= nx;
    return true;
}

/// Nonlinear power iteration for 1 < r, s < infinity: alternate the Holder
/// dual maps x <- phi_r(B^T psi_s(B x)). Fixed points are KKT points of the
/// Rayleigh quotient; multistart keeps the best value seen.
inline NormResult power_iteration(const DenseMatrix& B, const Exponent& r, const Exponent& s,
                                  const OpNormOptions& opts) {
    const std::size_t m = B.rows(), n = B.cols();
    const NormEval ns(s);
    const double sv = s.value();
    const bool nonneg = B.is_nonnegative();

    double best = 0.0;
    std::vector<double> best_x = basis_vector(n, 0);
    std::vector<double> y(m), z(m), w(n);

    const int total_starts = std::max(1, opts.restarts);
    for (int start = 0; start < total_starts; ++start) {
        std::vector<double> x(n);
        if (start == 0) {
            std::fill(x.begin(), x.end(), 1.0);
        } else if (start == 1) {
            const auto cn = column_norms(B, s);
            std::size_t jb = 0;
            for (std::size_t j = 1; j < n; ++j)
                if (cn[j] > cn[jb]) jb = j;
            x = basis_vector(n, jb);
        } else {
            Rng rng(derive_stream(opts.seed, static_cast<std::uint64_t>(start)));
            for (double& v : x) v = rng.next_gaussian();
            if (nonneg)
                for (double& v : x) v = std::fabs(v);
        }
        if (!normalize(x, r)) continue;

        double rho_prev = -1.0;
        for (int it = 0; it < opts.max_iter; ++it) {
            B.multiply(x, y);
            const double rho = ns(y);
            if (rho > best) {
                best = rho;
                best_x = x;
            }
            if (rho == 0.0) break;
            if (rho_prev >= 0.0 && std::fabs(rho - rho_prev) <= opts.tol * std::max(rho, 1e-300)) break;
            rho_prev = rho;
            // psi_s: gradient direction of ||.||_s at y (unnormalized).
            double ymax = 0.0;
            for (double v : y) ymax = std::max(ymax, std::fabs(v));
            if (ymax == 0.0) break;
            for (std::size_t i = 0; i < m; ++i) {
                const double t = std::fabs(y[i]) / ymax;
                z[i] = t > 0.0 ? std::copysign(std::pow(t, sv - 1.0), y[i]) : 0.0;
            }
            B.multiply_transposed(z, w);
            // phi_r: Holder extremal of w on the unit l_r sphere.
            double wmax = 0.0;
            for (double v : w) wmax = std::max(wmax, std::fabs(v));
            if (wmax == 0.0) break;
            const double expo = 1.0 / (r.value() - 1.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double t = std::fabs(w[j]) / wmax;
                x[j] = t > 0.0 ? std::copysign(std::pow(t, expo), w[j]) : 0.0;
            }
            if (!normalize(x, r)) break;
        }
    }

    NormResult out;
    out.value = out.lower = best;
    out.upper = std::numeric_limits<double>::infinity();
    out.kind = CertKind::HeuristicLowerBound;
    out.strategy = "power-iteration";
    out.witness = std::move(best_x);
    return out;
}

/// Subadditivity upper bound for s <= 1 targets:
/// ||Bx||_s^s <= sum_j |x_j|^s ||col_j||_s^s, then Holder over the l_{r/s}
/// ball of u_j = |x_j|^s.
inline double subadditive_upper(const DenseMatrix& B, const Exponent& r, const Exponent& s) {
    const double sv = s.value();
    std::vector<double> c(B.cols(), 0.0);
    for (std::size_t j = 0; j < B.cols(); ++j) c[j] = abs_power_sum(B.col(j), sv);
    double dual;
    if (r.is_infinite()) {
        dual = 0.0;
        for (double v : c) dual += v;
    } else {
        const double rho = r.value() / sv;
        if (rho <= 1.0) {
            dual = *std::max_element(c.begin(), c.end());
        } else {
            dual = vector_norm(c, conjugate(Exponent::finite(rho)));
        }
    }
    return std::pow(dual, 1.0 / sv);
}

/// Triangle-inequality upper bound valid for s >= 1:
/// ||Bx||_s <= sum_j |x_j| ||col_j||_s <= ||(||col_j||_s)_j||_{r*}.
inline double triangle_upper(const DenseMatrix& B, const Exponent& r, const Exponent& s) {
    const auto c = column_norms(B, s);
    return vector_norm(c, conjugate(r));
}

/// Multistart adaptive hill climbing on the unit l_r (quasi-)sphere; the
/// workhorse for quasi-norm regimes with no closed form. For entrywise
/// nonnegative matrices the search is restricted to the nonnegative orthant
/// (the optimum lies there).
inline NormResult ascent_heuristic(const DenseMatrix& B, const Exponent& r, const Exponent& s,
                                   const OpNormOptions& opts) {
    const std::size_t m = B.rows(), n = B.cols();
    const NormEval ns(s);
    const bool nonneg = B.is_nonnegative();
    std::vector<double> y(m);

    const auto evaluate = [&](const std::vector<double>& x) {
        B.multiply(x, y);
        return ns(y);
    };

    double best = 0.0;
    std::vector<double> best_x = basis_vector(n, 0);

    // Vertex starts: every standard basis vector (capped), plus all-ones.
    const auto consider = [&](std::vector<double> x) {
        if (!normalize(x, r)) return;
        const double v = evaluate(x);
        if (v > best) {
            best = v;
            best_x = std::move(x);
        }
    };
    const std::size_t vertex_cap = std::min<std::size_t>(n, 64);
    for (std::size_t j = 0; j < vertex_cap; ++j) consider(basis_vector(n, j));
    consider(std::vector<double>(n, 1.0));

    const int restarts = std::max(1, opts.restarts);
    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(derive_stream(opts.seed, 0xC1113 + static_cast<std::uint64_t>(restart)));
        std::vector<double> x;
        if (restart == 0) {
            x = best_x;
        } else {
            x.resize(n);
            for (double& v : x) v = nonneg ? std::fabs(rng.next_gaussian()) : rng.next_gaussian();
            if (!normalize(x, r)) continue;
        }
        double fx = evaluate(x);
        double step = 0.5;
        std::vector<double> cand(n);
        for (int it = 0; it < opts.ascent_iters && step > 1e-10; ++it) {
            // One random full perturbation plus one sparse coordinate move.
            for (int mode = 0; mode < 2; ++mode) {
                cand = x;
                if (mode == 0) {
                    for (double& v : cand) v += step * rng.next_gaussian();
                } else {
                    const std::size_t j = rng.next_below(n);
                    cand[j] += step * rng.next_gaussian();
                }
                if (nonneg)
                    for (double& v : cand) v = std::fabs(v);
                if (!normalize(cand, r)) continue;
                const double fc = evaluate(cand);
                if (fc > fx) {
                    x = cand;
                    fx = fc;
                    step = std::min(step * 1.4, 1.0);
                } else {
                    step *= 0.88;
                }
            }
        }
        if (fx > best) {
            best = fx;
            best_x = x;
        }
    }

    NormResult out;
    out.value = out.lower = best;
    out.kind = CertKind::HeuristicLowerBound;
    out.strategy = "multistart-ascent";
    out.witness = std::move(best_x);
    out.upper = std::numeric_limits<double>::infinity();

    std::optional<double> upper;
    if (s <= 1.0)
        upper = subadditive_upper(B, r, s);
    else if (r.is_infinite())
        upper = triangle_upper(B, r, s);
    if (upper) {
        out.upper = std::max(*upper, out.lower);
        out.kind = CertKind::Bracket;
        out.strategy += "+subadd-upper";
    }
    return out;
}

}  // namespace detail

/// Operator norm ||B: l_r^n -> l_s^m|| for r, s in [1/2, inf].
///
/// Regime dispatch (kind = Exact):
///   (a) r <= 1 <= s          max column l_s norm
///   (a') r <= s <= 1         same column formula (subadditivity)
///   (b) s = inf, r >= 1      max row l_{r*} norm
///   (c) r = s = 2            largest singular value (Lanczos)
///   (d) B >= 0, r = inf      ||B 1||_s
///   (e) r = inf, s >= 1      sign enumeration over 2^n patterns (n <= cap)
///   (f) B >= 0, s = 1        Holder dual of the column-sum vector
///   (g) s = 1, r >= 1        dual sign enumeration over 2^m patterns
/// Elsewhere the result is a certified heuristic: nonlinear power iteration
/// for 1 < r, s < inf, multistart ascent (plus a subadditivity upper bound,
/// when available, forming a Bracket) for quasi-norm targets.
inline NormResult op_norm(const DenseMatrix& B, const Exponent& r, const Exponent& s,
                          const OpNormOptions& opts = {}) {
    if (B.is_zero())
        return detail::exact_result(0.0, "zero", detail::basis_vector(B.cols(), 0));

    const bool nonneg = B.is_nonnegative();
    if (!r.is_infinite() && r <= 1.0 && (s >= 1.0 || (!s.is_infinite() && r.value() <= s.value())))
        return detail::column_formula(B, s, s >= 1.0 ? "column-formula" : "column-formula-quasi");
    if (s.is_infinite() && r >= 1.0) return detail::row_formula(B, r);
    if (r.is_two() && s.is_two()) return detail::spectral_norm(B, opts);
    if (r.is_infinite() && nonneg) return detail::nonneg_allones(B, s);
    if (r.is_infinite() && s >= 1.0 && B.cols() <= static_cast<std::size_t>(opts.sign_enum_cap))
        return detail::sign_enumeration(B, s);
    if (s.is_one() && r >= 1.0 && nonneg) return detail::nonneg_colsum_dual(B, r);
    if (s.is_one() && r >= 1.0 && B.rows() <= static_cast<std::size_t>(opts.sign_enum_cap))
        return detail::sign_enumeration_dual(B, r);
    if (r > 1.0 && !r.is_infinite() && s > 1.0 && !s.is_infinite())
        return detail::power_iteration(B, r, s, opts);
    return detail::ascent_heuristic(B, r, s, opts);
}

/// Independent verification oracle: maximizes ||Bx||_s over a dense angular
/// discretization of the unit l_r sphere (resolution samples per angle, all
/// power-of-two coarsenings included, so the value is monotone in
/// resolution), a set of canonical candidate directions, and 50 steps of
/// normalized random-perturbation hill climbing. Always a lower bound on the
/// true norm. Source dimension capped at 4.
inline double brute_force_oracle(const DenseMatrix& B, const Exponent& r, const Exponent& s,
                                 int resolution = 256) {
    const std::size_t n = B.cols();
    if (n > 4) throw InputError("brute_force_oracle: source dimension cap is 4");
    if (resolution < 64) throw InputError("brute_force_oracle: resolution must be >= 64");

    const detail::NormEval ns(s);
    std::vector<double> y(B.rows());
    const auto evaluate = [&](std::span<const double> x) {
        const double nx = vector_norm(x, r);
        if (nx == 0.0) return 0.0;
        std::vector<double> xs(x.begin(), x.end());
        for (double& v : xs) v /= nx;
        B.multiply(xs, y);
        return ns(y);
    };
    const auto evaluate_unit = [&](std::span<const double> x) {
        B.multiply(x, y);
        return ns(y);
    };

    double best = 0.0;
    std::vector<double> best_x(n, 0.0);
    const auto consider = [&](std::span<const double> x) {
        const double v = evaluate(x);
        if (v > best) {
            best = v;
            best_x.assign(x.begin(), x.end());
            const double nx = vector_norm(best_x, r);
            for (double& t : best_x) t /= nx;
        }
    };

    // Canonical candidates: axes, sign patterns, per-row Holder extremals.
    for (std::size_t j = 0; j < n; ++j) {
        const auto e = detail::basis_vector(n, j);
        consider(e);
    }
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1 ? -1.0 : 1.0;
        consider(x);
    }
    if (r >= 1.0) {
        for (std::size_t i = 0; i < B.rows(); ++i) {
            const auto row = B.row(i);
            const auto x = holder_extremal({row.data(), row.size()}, r);
            if (vector_norm(x, r) > 0.0) consider(x);
        }
    }

    // Nested angular grids (hyperspherical coordinates projected onto the
    // l_r sphere), from 64 samples per angle up to the requested resolution.
    std::vector<int> levels;
    for (int res = 64; res < resolution; res *= 2) levels.push_back(res);
    levels.push_back(resolution);

    // Allocation-free grid evaluation: ||B(x/|x|_r)||_s = ||Bx||_s / |x|_r,
    // with the contributions of the leading coordinates cached per outer
    // angle. Column-major copy keeps the per-point updates contiguous.
    const std::size_t m = B.rows();
    std::vector<double> colmaj(n * m);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) colmaj[j * m + i] = B(i, j);
    std::vector<double> ybase(m), ywork(m), xpt(4, 0.0);
    const bool r_inf = r.is_infinite();
    const double rv = r_inf ? 0.0 : r.value();
    const auto norm_r_pt = [&](std::size_t dims) {
        if (r_inf) {
            double mx = 0.0;
            for (std::size_t j = 0; j < dims; ++j) mx = std::max(mx, std::fabs(xpt[j]));
            return mx;
        }
        if (rv == 2.0) {
            double s2 = 0.0;
            for (std::size_t j = 0; j < dims; ++j) s2 += xpt[j] * xpt[j];
            return std::sqrt(s2);
        }
        if (rv == 1.0) {
            double s1 = 0.0;
            for (std::size_t j = 0; j < dims; ++j) s1 += std::fabs(xpt[j]);
            return s1;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < dims; ++j)
            if (xpt[j] != 0.0) acc += std::pow(std::fabs(xpt[j]), rv);
        return std::pow(acc, 1.0 / rv);
    };
    double best_grid = best;
    std::array<double, 4> best_pt{};
    std::size_t best_dims = 0;
    const auto grid_point = [&](std::size_t dims) {
        const double nx = norm_r_pt(dims);
        if (nx == 0.0) return;
        const double v = ns(ywork) / nx;
        if (v > best_grid) {
            best_grid = v;
            for (std::size_t j = 0; j < dims; ++j) best_pt[j] = xpt[j];
            best_dims = dims;
        }
    };

    for (int res : levels) {
        if (n == 1) break;  // candidates already cover +-1
        std::vector<double> ct(res), st(res);   // full circle, last angle
        std::vector<double> cp(res), sp(res);   // half circle, earlier angles
        for (int k = 0; k < res; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / res;
            ct[k] = std::cos(theta);
            st[k] = std::sin(theta);
            const double phi = std::numbers::pi * k / (res - 1);
            cp[k] = std::cos(phi);
            sp[k] = std::sin(phi);
        }
        const double* c0 = colmaj.data();
        const double* c1 = n > 1 ? colmaj.data() + m : nullptr;
        const double* c2 = n > 2 ? colmaj.data() + 2 * m : nullptr;
        const double* c3 = n > 3 ? colmaj.data() + 3 * m : nullptr;
        if (n == 2) {
            for (int k = 0; k < res; ++k) {
                xpt[0] = ct[k];
                xpt[1] = st[k];
                for (std::size_t i = 0; i < m; ++i) ywork[i] = xpt[0] * c0[i] + xpt[1] * c1[i];
                grid_point(2);
            }
        } else if (n == 3) {
            for (int a = 0; a < res; ++a) {
                xpt[0] = cp[a];
                for (std::size_t i = 0; i < m; ++i) ybase[i] = xpt[0] * c0[i];
                const double s1 = sp[a];
                for (int k = 0; k < res; ++k) {
                    xpt[1] = s1 * ct[k];
                    xpt[2] = s1 * st[k];
                    for (std::size_t i = 0; i < m; ++i)
                        ywork[i] = ybase[i] + xpt[1] * c1[i] + xpt[2] * c2[i];
                    grid_point(3);
                }
            }
        } else {
            for (int a = 0; a < res; ++a) {
                const double s1 = sp[a];
                for (int b = 0; b < res; ++b) {
                    xpt[0] = cp[a];
                    xpt[1] = s1 * cp[b];
                    const double s12 = s1 * sp[b];
                    for (std::size_t i = 0; i < m; ++i)
                        ybase[i] = xpt[0] * c0[i] + xpt[1] * c1[i];
                    for (int k = 0; k < res; ++k) {
                        xpt[2] = s12 * ct[k];
                        xpt[3] = s12 * st[k];
                        for (std::size_t i = 0; i < m; ++i)
                            ywork[i] = ybase[i] + xpt[2] * c2[i] + xpt[3] * c3[i];
                        grid_point(4);
                    }
                }
            }
        }
        if (best_grid > best && best_dims > 0) {
            std::vector<double> xb(best_pt.begin(), best_pt.begin() + best_dims);
            consider(xb);
        }

        // Local refinement: normalized random-perturbation hill climbing.
        Rng rng(derive_stream(0xBF0C, static_cast<std::uint64_t>(res)));
        std::vector<double> cur = best_x;
        double fcur = best;
        double step = 0.25;
        for (int stepi = 0; stepi < 50; ++stepi) {
            bool improved = false;
            for (int trial = 0; trial < 8; ++trial) {
                std::vector<double> cand = cur;
                for (double& v : cand) v += step * rng.next_gaussian();
                const double nx = vector_norm(cand, r);
                if (nx == 0.0) continue;
                for (double& v : cand) v /= nx;
                const double fc = evaluate_unit(cand);
                if (fc > fcur) {
                    cur = cand;
                    fcur = fc;
                    improved = true;
                }
            }
            step *= improved ? 1.3 : 0.6;
            if (step < 1e-9) break;
        }
        if (fcur > best) {
            best = fcur;
            best_x = cur;
        }
    }
    return best;
}

/// Exact maximum of the operator norm over all row subsets of size `rows`
/// and column subsets of size `cols`. The enumeration is capped at 1e6
/// subset pairs. If any inner norm is not in an exact regime, the result is
/// certified as a heuristic lower bound.
inline NormResult submatrix_sup_norm(const DenseMatrix& B, std::size_t rows, std::size_t cols,
                                     const Exponent& p, const Exponent& q,
                                     const OpNormOptions& opts = {}) {
    const std::size_t M = B.rows(), N = B.cols();
    if (rows == 0 || rows > M || cols == 0 || cols > N)
        throw InputError("submatrix_sup_norm: bad subset sizes");

    const auto binom = [](std::size_t a, std::size_t b) -> double {
        double r = 1.0;
        for (std::size_t i = 0; i < b; ++i) r *= static_cast<double>(a - i) / static_cast<double>(i + 1);
        return r;
    };
    if (binom(M, rows) * binom(N, cols) > 1e6)
        throw InputError("submatrix_sup_norm: enumeration cap (1e6 subset pairs) exceeded");

    const auto subsets = [](std::size_t total, std::size_t k) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == total - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        return out;
    };

    const auto row_sets = subsets(M, rows);
    const auto col_sets = subsets(N, cols);

    NormResult best;
    best.value = -1.0;
    bool all_exact = true;
    for (const auto& I : row_sets) {
        for (const auto& J : col_sets) {
            DenseMatrix sub(rows, cols);
            for (std::size_t a = 0; a < rows; ++a)
                for (std::size_t b = 0; b < cols; ++b) sub(a, b) = B(I[a], J[b]);
            NormResult r = op_norm(sub, p, q, opts);
            if (r.kind != CertKind::Exact) all_exact = false;
            if (r.value > best.value) {
                best = r;
                std::vector<double> w(N, 0.0);
                for (std::size_t b = 0; b < cols; ++b) w[J[b]] = r.witness[b];
                best.witness = std::move(w);
            }
        }
    }
    best.strategy = "submatrix-enumeration(" + best.strategy + ")";
    if (!all_exact && best.kind == CertKind::Exact) {
        best.kind = CertKind::HeuristicLowerBound;
        best.upper = std::numeric_limits<double>::infinity();
    }
    return best;
}

}  // namespace normlab
