#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "normlab/bounds.hpp"
#include "normlab/scenarios.hpp"

namespace normlab {

/// Monte Carlo estimate of E||X_A: l_p -> l_q||.
struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::vector<double> samples;  // retained when requested
    CertKind norm_certificate = CertKind::Exact;  // worst kind among trials
};

struct McOptions {
    bool keep_samples = false;
    bool allow_heuristic = false;  // reject non-exact per-trial norms unless set
    unsigned threads = 1;
    OpNormOptions norm;
};

inline McEstimate mc_norm_estimate(const DenseMatrix& A, const EntryModel& model, const Exponent& p,
                                   const Exponent& q, std::size_t trials, RngSeed seed,
                                   const McOptions& opts = {}) {
    if (trials < 2) throw InputError("mc_norm_estimate requires trials >= 2");
    std::vector<double> values(trials);
    std::vector<CertKind> kinds(trials, CertKind::Exact);
    std::vector<std::string> errors(trials);
    parallel_for(trials, opts.threads, [&](std::size_t t) {
        try {
            const DenseMatrix X = structured_realization(A, model, {derive_stream(seed.value, t)});
            const NormResult r = op_norm(X, p, q, opts.norm);
            values[t] = r.value;
            kinds[t] = r.kind;
        } catch (const std::exception& e) {
            errors[t] = std::string("trial ") + std::to_string(t) + ": " + e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw RegimeError("norm engine failure at " + e);

    McEstimate est;
    est.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        if (kinds[t] == CertKind::HeuristicLowerBound)
            est.norm_certificate = CertKind::HeuristicLowerBound;
        else if (kinds[t] == CertKind::Bracket && est.norm_certificate == CertKind::Exact)
            est.norm_certificate = CertKind::Bracket;
    }
    if (est.norm_certificate != CertKind::Exact && !opts.allow_heuristic)
        throw RegimeError("per-trial norm is not in an exact regime for (" + p.str() + "," + q.str() +
                          "); pass allow_heuristic to accept certified heuristics");
    const MeanStderr ms = mean_stderr(values);
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    if (opts.keep_samples) est.samples = std::move(values);
    return est;
}

/// One row of a tail table: empirical P(norm >= t * reference) with a Wilson
/// interval half-width.
struct TailRow {
    double t = 1.0;
    double prob = 0.0;
    double halfwidth = 0.0;
};

struct TailResult {
    std::vector<TailRow> rows;
    double d_value = 0.0;    // D >= d1
    double gamma = 1.0;      // reference = gamma * D
    double reference = 0.0;
    double median = 0.0;
    double mean = 0.0;
    std::size_t trials = 0;
    CertKind norm_certificate = CertKind::Exact;
};

enum class TailReference { Median, Mean };

struct TailOptions {
    double d_value = 0.0;  // 0: computed as d1
    TailReference reference = TailReference::Median;
    McOptions mc;
    double z = 1.96;
};

/// Empirical survival probabilities of the norm at multiples of a reference
/// level gamma * D; probabilities are non-increasing in t by construction.
inline TailResult tail_experiment(const DenseMatrix& A, const EntryModel& model, const Exponent& p,
                                  const Exponent& q, std::size_t trials,
                                  std::vector<double> thresholds, RngSeed seed,
                                  TailOptions opts = {}) {
    for (double t : thresholds)
        if (!(t >= 1.0)) throw InputError("tail thresholds must satisfy t >= 1");
    McOptions mc = opts.mc;
    mc.keep_samples = true;
    const McEstimate est = mc_norm_estimate(A, model, p, q, trials, seed, mc);

    TailResult out;
    out.trials = trials;
    out.norm_certificate = est.norm_certificate;
    out.mean = est.mean;
    std::vector<double> sorted = est.samples;
    std::sort(sorted.begin(), sorted.end());
    out.median = trials % 2 ? sorted[trials / 2]
                            : 0.5 * (sorted[trials / 2 - 1] + sorted[trials / 2]);

    out.d_value = opts.d_value > 0.0 ? opts.d_value : d1_d2(A, p, q, mc.norm).d1_upper();
    out.reference = opts.reference == TailReference::Median ? out.median : out.mean;
    out.gamma = out.d_value > 0.0 ? out.reference / out.d_value : 1.0;

    std::sort(thresholds.begin(), thresholds.end());
    for (double t : thresholds) {
        const double level = t * out.reference;
        const auto count = static_cast<double>(
            sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), level));
        out.rows.push_back({t, count / static_cast<double>(trials),
                            wilson_halfwidth(count, static_cast<double>(trials), opts.z)});
    }
    return out;
}

/// One (scenario, p, q) cell of a sandwich sweep.
struct SweepCell {
    std::string scenario;
    std::string p, q;
    std::size_t trials = 0;
    double lower_certified = 0.0;
    double lower = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double upper = 0.0;
    bool exact_trials = true;      // all per-trial norms exact
    bool bounds_certified = true;  // upper formula constants certified & d1/d2 bracketed
    bool violation = false;
    std::uint64_t cell_seed = 0;
    std::size_t extreme_trial = 0;  // trial with the largest norm, for triage
};

struct SweepSummary {
    std::size_t cells = 0;
    std::size_t violations = 0;
    double runtime_seconds = 0.0;
};

struct ViolationRecord {
    ScenarioSpec scenario;
    std::string p, q;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<ViolationRecord> violations;
    SweepSummary summary;
};

struct SweepOptions {
    McOptions mc;
    EmaxMode emax = EmaxMode::surrogate();
};

/// Verifies, per grid cell, that the certified lower pieces sit below
/// mc_mean + 3 stderr and that mc_mean - 3 stderr sits below the matching
/// main upper bound (Gaussian or bounded constants; psi_r upper is a rate
/// and flags the cell uncertified). Violations are data, not errors.
inline SweepResult sandwich_sweep(const std::vector<ScenarioSpec>& scenarios,
                                  const EntryModel& model,
                                  const std::vector<std::pair<Exponent, Exponent>>& pq_grid,
                                  std::size_t trials, RngSeed seed, const SweepOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult out;
    std::size_t linear = 0;
    for (const auto& spec : scenarios) {
        const DenseMatrix A = scenario_matrix(spec);
        for (const auto& [p, q] : pq_grid) {
            SweepCell cell;
            cell.scenario = spec.name();
            cell.p = p.str();
            cell.q = q.str();
            cell.trials = trials;
            cell.cell_seed = derive_stream(seed.value, ++linear);

            McOptions mc = opts.mc;
            mc.allow_heuristic = true;
            mc.keep_samples = true;
            const McEstimate est = mc_norm_estimate(A, model, p, q, trials, {cell.cell_seed}, mc);
            cell.mc_mean = est.mean;
            cell.mc_stderr = est.stderr_;
            cell.exact_trials = est.norm_certificate == CertKind::Exact;
            cell.extreme_trial = static_cast<std::size_t>(
                std::max_element(est.samples.begin(), est.samples.end()) - est.samples.begin());

            const BoundReport lower = lower_bound_gaussian(A, p, q, opts.emax, model, opts.mc.norm);
            cell.lower_certified = lower.lower_certified;
            cell.lower = lower.lower;

            const D1D2 d = d1_d2(A, p, q, opts.mc.norm);
            switch (model.kind) {
                case EntryLaw::Gaussian:
                    cell.upper = upper_main_gaussian(A, p, q, 0, 0, opts.mc.norm);
                    break;
                case EntryLaw::Rademacher:
                case EntryLaw::BoundedUniform:
                    cell.upper = upper_bounded_main(A, p, q, opts.mc.norm);
                    break;
                case EntryLaw::WeibullPsiR:
                    cell.upper = upper_psi(A, p, q, model.r, model.K, model.L, PsiVariant::Main,
                                           1.0, opts.mc.norm);
                    cell.bounds_certified = false;
                    break;
            }
            if (!d.upper_certified()) cell.bounds_certified = false;

            cell.violation = cell.lower_certified > cell.mc_mean + 3.0 * cell.mc_stderr ||
                             cell.mc_mean - 3.0 * cell.mc_stderr > cell.upper;
            if (cell.violation)
                out.violations.push_back({spec, cell.p, cell.q, cell.cell_seed, cell.extreme_trial});
            out.cells.push_back(std::move(cell));
        }
    }
    out.summary.cells = out.cells.size();
    out.summary.violations = out.violations.size();
    out.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Formula-level growth table for the block-diagonal family with the
/// symbolic substitution ln(kN) = e^k: the certified lower rate
/// e^{k/2} k^{(2-q)/(2q)} against the would-be upper rate
/// k^{1/q} + k^{1/p*+1/2-1/q*} + e^{k/2}, evaluated in log space. A strictly
/// increasing ratio shows the simplified upper bound cannot hold.
struct GrowthRow {
    double k = 0.0;
    double log_lower = 0.0;
    double log_upper = 0.0;
    double ratio = 0.0;
};

inline std::vector<GrowthRow> counterexample_growth(const Exponent& q,
                                                    const std::vector<double>& k_list) {
    if (q.is_infinite() || !(q.value() >= 1.0 && q.value() < 2.0))
        throw RegimeError("counterexample_growth requires p = q in [1,2)");
    const double qv = q.value();
    const double alpha = (2.0 - qv) / (2.0 * qv);
    const double inv_qstar = 1.0 - 1.0 / qv;
    const double beta = inv_qstar + 0.5 - inv_qstar;  // p = q
    std::vector<GrowthRow> rows;
    for (double k : k_list) {
        if (!(k > 1.0)) throw InputError("counterexample_growth requires k > 1");
        GrowthRow row;
        row.k = k;
        row.log_lower = 0.5 * k + alpha * std::log(k);
        // log-sum-exp of {ln k / q, beta ln k, k/2}
        const double terms[3] = {std::log(k) / qv, beta * std::log(k), 0.5 * k};
        const double mx = std::max({terms[0], terms[1], terms[2]});
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - mx);
        row.log_upper = mx + std::log(acc);
        // Ratio with the shared k/2 term cancelled analytically, so huge k
        // does not lose precision to the e^{k/2} offset.
        const double lse_shifted =
            std::log1p(std::exp(terms[0] - terms[2]) + std::exp(terms[1] - terms[2]));
        row.ratio = std::exp(alpha * std::log(k) - lse_shifted);
        rows.push_back(row);
    }
    return rows;
}

/// Monte Carlo estimate of the row/column maximum rate
/// E max_i ||(a_ij g_ij)_j||_{p*} + E max_j ||(a_ij g_ij)_i||_q.
inline MeanStderr rowcol_max_rate(const DenseMatrix& A, const EntryModel& model, const Exponent& p,
                                  const Exponent& q, std::size_t trials, RngSeed seed,
                                  unsigned threads = 1) {
    if (trials < 2) throw InputError("rowcol_max_rate requires trials >= 2");
    const Exponent pstar = conjugate(p);
    std::vector<double> vals(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const DenseMatrix X = structured_realization(A, model, {derive_stream(seed.value, t)});
        double mr = 0.0, mc = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i)
            mr = std::max(mr, vector_norm(X.row(i), pstar));
        for (std::size_t j = 0; j < X.cols(); ++j) mc = std::max(mc, vector_norm(X.col(j), q));
        vals[t] = mr + mc;
    });
    return mean_stderr(vals);
}

}  // namespace normlab
