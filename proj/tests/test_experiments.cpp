#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "normlab/experiments.hpp"
#include "normlab/serialize.hpp"
#include "support/oracles.hpp"

using namespace normlab;

namespace {
const Exponent kOne = Exponent::finite(1);
const Exponent kTwo = Exponent::finite(2);
const Exponent kInf = Exponent::infinity();
}  // namespace

TEST_CASE("scenario matrices", "[experiments]") {
    const auto I = scenario_matrix(ScenarioSpec::identity(3));
    CHECK(I.rows() == 3);
    CHECK(I(0, 0) == 1.0);
    CHECK(I(0, 1) == 0.0);

    const auto B = scenario_matrix(ScenarioSpec::block_ones(2, 2));
    REQUIRE(B.rows() == 4);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) ones += B(i, j) == 1.0;
    CHECK(ones == 8);  // N * k^2
    CHECK(B(0, 2) == 0.0);
    CHECK(B(2, 3) == 1.0);

    const auto O = scenario_matrix(ScenarioSpec::ones(2, 3));
    double total = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (double v : O.row(i)) total += v;
    CHECK(total == 6.0);

    const auto D = scenario_matrix(ScenarioSpec::diag({1.0, -2.0}));
    CHECK(D(1, 1) == -2.0);
    CHECK(D(0, 1) == 0.0);

    const auto R1 = scenario_matrix(ScenarioSpec::seeded_random(4, 5, CoefficientLaw::Uniform01, 9));
    const auto R2 = scenario_matrix(ScenarioSpec::seeded_random(4, 5, CoefficientLaw::Uniform01, 9));
    CHECK(R1 == R2);
    CHECK(R1.is_nonnegative());

    CHECK_THROWS_AS(scenario_matrix(ScenarioSpec::ones(20000, 20000)), InputError);
}

TEST_CASE("mc norm estimate", "[experiments]") {
    const auto single = DenseMatrix::from_rows({{1.0}});
    const auto est =
        mc_norm_estimate(single, EntryModel::gaussian(), kTwo, kTwo, 100000, {7});
    CHECK(std::fabs(est.mean - std::sqrt(2.0 / std::numbers::pi)) <= 3.0 * est.stderr_);
    CHECK(est.norm_certificate == CertKind::Exact);

    const auto zero = mc_norm_estimate(DenseMatrix(2, 2, 0.0), EntryModel::gaussian(), kOne, kTwo,
                                       50, {1});
    CHECK(zero.mean == 0.0);
    CHECK(zero.stderr_ == 0.0);

    // Per-trial reproducibility: equal seeds give identical samples.
    const auto A = oracles::random_matrix(4, 4, 88);
    McOptions keep;
    keep.keep_samples = true;
    const auto e1 = mc_norm_estimate(A, EntryModel::gaussian(), kOne, kTwo, 64, {5}, keep);
    const auto e2 = mc_norm_estimate(A, EntryModel::gaussian(), kOne, kTwo, 64, {5}, keep);
    CHECK(e1.samples == e2.samples);

    // Non-exact per-trial norms are rejected unless opted in.
    CHECK_THROWS_AS(
        mc_norm_estimate(A, EntryModel::gaussian(), Exponent::finite(3), Exponent::finite(1.5), 8,
                         {1}),
        RegimeError);
    McOptions loose;
    loose.allow_heuristic = true;
    const auto heur = mc_norm_estimate(A, EntryModel::gaussian(), Exponent::finite(3),
                                       Exponent::finite(1.5), 8, {1}, loose);
    CHECK(heur.norm_certificate == CertKind::HeuristicLowerBound);
}

TEST_CASE("rademacher realizations dominate the unstructured rate", "[experiments]") {
    // Every +-1 realization satisfies ||X: l_2 -> l_q|| >= max(sqrt n, m^(1/q))
    // via the standard-unit-vector and row witnesses; zero violations.
    const std::size_t m = 12, n = 7;
    const DenseMatrix ones(m, n, 1.0);
    for (double qv : {2.0, 3.0}) {
        const Exponent q = Exponent::finite(qv);
        const double target = std::max(std::sqrt(static_cast<double>(n)),
                                       std::pow(static_cast<double>(m), 1.0 / qv));
        std::size_t violations = 0;
        for (std::uint64_t t = 0; t < 50; ++t) {
            const auto X = structured_realization(ones, EntryModel::rademacher(), {derive_stream(6, t)});
            // column witness: ||X e_j||_q
            double witness = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                witness = std::max(witness, vector_norm(X.col(j), q));
            // row witness: x = row_i / ||row_i||_2
            std::vector<double> y(m);
            for (std::size_t i = 0; i < m; ++i) {
                std::vector<double> x(X.row(i).begin(), X.row(i).end());
                const double nx = vector_norm(x, kTwo);
                for (double& v : x) v /= nx;
                X.multiply(x, y);
                witness = std::max(witness, vector_norm(y, q));
            }
            if (witness < target - 1e-12) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("duality per realization", "[experiments]") {
    const auto A = oracles::random_matrix(6, 5, 2025);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto X = structured_realization(A, EntryModel::gaussian(), {derive_stream(3, t)});
        const auto Xt = X.transpose();
        for (auto [p, q] : {std::pair{kOne, kTwo}, {kTwo, kTwo}, {kInf, kOne}, {kTwo, kInf}}) {
            const double lhs = op_norm(X, p, q).value;
            const double rhs = op_norm(Xt, conjugate(q), conjugate(p)).value;
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("tail experiment", "[experiments]") {
    const auto single = DenseMatrix::from_rows({{1.0}});
    const auto res = tail_experiment(single, EntryModel::gaussian(), kTwo, kTwo, 2000,
                                     {1.0, 1.5, 2.0, 3.0}, {11});
    REQUIRE(res.rows.size() == 4);
    CHECK(res.rows[0].prob <= 1.0);
    // monotone in t (nested events)
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        CHECK(res.rows[i].prob <= res.rows[i - 1].prob);
    // all rows carry Wilson half-widths
    for (const auto& row : res.rows) CHECK(row.halfwidth > 0.0);

    // Sub-Gaussian decay on the quadratic scale: increments of -ln P grow at
    // least like 0.05 * increments of (t * reference)^2.
    for (std::size_t i = 2; i < res.rows.size(); ++i) {
        const auto& a = res.rows[i - 1];
        const auto& b = res.rows[i];
        REQUIRE(b.prob > 0.0);
        const double dlog = -std::log(b.prob) + std::log(a.prob);
        const double dt2 = (b.t * b.t - a.t * a.t) * res.reference * res.reference;
        CHECK(dlog >= 0.05 * dt2);
    }

    CHECK_THROWS_AS(tail_experiment(single, EntryModel::gaussian(), kTwo, kTwo, 100, {0.5}, {1}),
                    InputError);
}

TEST_CASE("sandwich sweep", "[experiments]") {
    const std::vector<ScenarioSpec> scenarios = {ScenarioSpec::identity(6),
                                                 ScenarioSpec::ones(3, 4)};
    std::vector<std::pair<Exponent, Exponent>> grid;
    for (const auto& p : {kOne, kTwo, kInf})
        for (const auto& q : {kOne, kTwo, kInf}) grid.emplace_back(p, q);

    const auto res = sandwich_sweep(scenarios, EntryModel::gaussian(), grid, 100, {2024});
    CHECK(res.summary.cells == 18);
    CHECK(res.summary.violations == 0);
    for (const auto& c : res.cells) {
        CHECK(c.exact_trials);
        CHECK(c.lower_certified <= c.lower + 1e-12);
        CHECK_FALSE(c.violation);
    }

    // CSV has a header plus one row per cell.
    std::ostringstream csv;
    sweep_to_csv(res, csv);
    std::size_t lines = 0;
    for (char ch : csv.str()) lines += ch == '\n';
    CHECK(lines == 19);

    // Determinism across runs.
    const auto res2 = sandwich_sweep(scenarios, EntryModel::gaussian(), grid, 100, {2024});
    for (std::size_t i = 0; i < res.cells.size(); ++i)
        CHECK(res.cells[i].mc_mean == res2.cells[i].mc_mean);
}

TEST_CASE("identity sweep over the default grid has no certified violations", "[experiments]") {
    // Full default grid {1, 1.5, 2, 3, inf}^2 on Identity_8 at 400 trials;
    // cells without exact per-trial norms are flagged, never silently used.
    std::vector<std::pair<Exponent, Exponent>> grid;
    const Exponent exps[] = {kOne, Exponent::finite(1.5), kTwo, Exponent::finite(3), kInf};
    for (const auto& p : exps)
        for (const auto& q : exps) grid.emplace_back(p, q);

    SweepOptions opts;
    opts.mc.norm.restarts = 6;
    opts.mc.norm.max_iter = 300;
    const auto res = sandwich_sweep({ScenarioSpec::identity(8)}, EntryModel::gaussian(), grid, 400,
                                    {0x1D8}, opts);
    CHECK(res.summary.cells == 25);
    std::size_t flagged = 0;
    for (const auto& c : res.cells) {
        CHECK_FALSE(c.violation);
        flagged += c.exact_trials ? 0 : 1;
    }
    // the grid mixes exact and heuristic cells; both kinds must be present
    CHECK(flagged > 0);
    CHECK(flagged < res.cells.size());
    CHECK(res.summary.violations == 0);
}

TEST_CASE("counterexample growth", "[experiments]") {
    const auto rows = counterexample_growth(Exponent::finite(1.5), {100.0, 1e6});
    REQUIRE(rows.size() == 2);
    // exact evaluation: k^(1/6) damped by the ratio denominator
    CHECK(rows[0].ratio == Catch::Approx(2.154434690031882).epsilon(1e-12));
    CHECK(rows[1].ratio == Catch::Approx(10.0).epsilon(1e-12));
    CHECK(rows[0].ratio > 2.0);

    for (double qv : {1.0, 1.2, 1.5, 1.9}) {
        const auto r = counterexample_growth(Exponent::finite(qv), {100.0, 1e4});
        CHECK(r[1].ratio > r[0].ratio);
    }

    CHECK_THROWS_AS(counterexample_growth(kTwo, {100.0}), RegimeError);
    CHECK_THROWS_AS(counterexample_growth(Exponent::finite(1.5), {0.5}), InputError);
}

TEST_CASE("rowcol max rate", "[experiments]") {
    // Identity: both terms reduce to max_i |g_ii|, so the rate is about
    // 2 E max |g|.
    const auto I = scenario_matrix(ScenarioSpec::identity(16));
    const auto rate = rowcol_max_rate(I, EntryModel::gaussian(), kTwo, Exponent::finite(1.5),
                                      4000, {21});
    const auto emax = empirical_emax(I, EntryModel::gaussian(), 4000, {22});
    CHECK(std::fabs(rate.mean - 2.0 * emax.mean) <=
          3.0 * (rate.stderr_ + 2.0 * emax.stderr_) + 0.02);

    const auto zero = rowcol_max_rate(DenseMatrix(2, 2, 0.0), EntryModel::gaussian(), kTwo,
                                      kTwo, 10, {1});
    CHECK(zero.mean == 0.0);
}

TEST_CASE("submatrix suprema respect the ambient upper bound", "[experiments]") {
    // Set version of the main Gaussian bound: E sup over 3x3 submatrices of
    // a 5x4 ambient matrix, with the sup-over-subsets Hadamard norms feeding
    // the formula.
    const auto A = oracles::random_matrix(5, 4, 0x5E7);
    const Exponent p = kOne, q = kTwo;
    const std::size_t msub = 3, nsub = 3;

    const auto S = A.hadamard_square();
    const double s1 = std::sqrt(submatrix_sup_norm(S, msub, nsub, half(p), half(q)).value);
    const double s2 = std::sqrt(
        submatrix_sup_norm(S.transpose(), nsub, msub, half(conjugate(q)), half(conjugate(p))).value);
    const double bound = formulas::thm_main_gauss(
        static_cast<double>(msub), static_cast<double>(nsub), 5.0, 4.0, conjugate(p).inv(),
        q.inv(), s1, s2);

    const std::size_t trials = 200;
    std::vector<double> sups(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto X = structured_realization(A, EntryModel::gaussian(), {derive_stream(0x5E7, t)});
        const auto sup = submatrix_sup_norm(X, msub, nsub, p, q);
        REQUIRE(sup.kind == CertKind::Exact);
        sups[t] = sup.value;
    }
    const auto ms = mean_stderr(sups);
    CHECK(ms.mean - 3.0 * ms.stderr_ <= bound);
    // and the supremum dominates the plain top-left submatrix per trial
    CHECK(ms.mean > 0.0);
}

TEST_CASE("separation ratio grows for q < p", "[experiments]") {
    // E||G_A|| / rowcol rate grows with n for (p,q) = (2, 1.5) on the
    // identity; light version of the full acceptance run.
    const Exponent p = kTwo, q = Exponent::finite(1.5);
    McOptions mc;
    mc.allow_heuristic = true;
    mc.norm.restarts = 4;
    mc.norm.max_iter = 200;
    double prev = 0.0;
    for (std::size_t n : {8ul, 32ul}) {
        const auto I = scenario_matrix(ScenarioSpec::identity(n));
        const auto est = mc_norm_estimate(I, EntryModel::gaussian(), p, q, 100, {77}, mc);
        const auto rate = rowcol_max_rate(I, EntryModel::gaussian(), p, q, 100, {78});
        const double ratio = est.mean / rate.mean;
        CHECK(ratio > prev);
        prev = ratio;
    }
}
