#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "normlab/opnorm.hpp"
#include "support/oracles.hpp"

using namespace normlab;

namespace {

const Exponent kOne = Exponent::finite(1);
const Exponent kTwo = Exponent::finite(2);
const Exponent kInf = Exponent::infinity();

DenseMatrix identity(std::size_t n) {
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
    return a;
}

double witness_ratio(const DenseMatrix& B, const Exponent& r, const Exponent& s,
                     const NormResult& res) {
    std::vector<double> y(B.rows());
    B.multiply(res.witness, y);
    return vector_norm(y, s) / vector_norm(res.witness, r);
}

}  // namespace

TEST_CASE("exact regime examples", "[opnorm]") {
    CHECK(op_norm(identity(3), kOne, kTwo).value == Catch::Approx(1.0).margin(1e-14));
    CHECK(op_norm(identity(3), kOne, kTwo).kind == CertKind::Exact);

    const DenseMatrix ones2(2, 2, 1.0);
    const auto spec = op_norm(ones2, kTwo, kTwo);
    CHECK(spec.value == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(spec.kind == CertKind::Exact);

    // all-ones k x k between l_{p/2} and l_{q/2} equals k^{2/q} for
    // 1 <= p <= q <= 2; k = 4, q = 2 gives 4, and q = 1.5 gives 4^{4/3}.
    const DenseMatrix ones4(4, 4, 1.0);
    CHECK(op_norm(ones4, Exponent::finite(0.5), kOne).value == Catch::Approx(4.0).margin(1e-12));
    CHECK(op_norm(ones4, Exponent::finite(0.75), Exponent::finite(0.75)).value ==
          Catch::Approx(std::pow(4.0, 4.0 / 3.0)).epsilon(1e-12));

    const auto B = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const auto rinf = op_norm(B, kOne, kInf);
    CHECK(rinf.value == Catch::Approx(4.0).margin(1e-14));
    CHECK(rinf.kind == CertKind::Exact);
}

TEST_CASE("zero matrix", "[opnorm]") {
    const DenseMatrix Z(3, 4, 0.0);
    const auto r = op_norm(Z, kTwo, kTwo);
    CHECK(r.value == 0.0);
    CHECK(r.kind == CertKind::Exact);
    REQUIRE(r.witness.size() == 4);
    CHECK(r.witness[0] == 1.0);
}

TEST_CASE("brute force oracle examples", "[opnorm]") {
    CHECK(brute_force_oracle(identity(2), kTwo, kTwo, 256) == Catch::Approx(1.0).margin(1e-6));
    const auto row = DenseMatrix::from_rows({{1.0, 1.0}});
    CHECK(brute_force_oracle(row, kTwo, kOne, 256) ==
          Catch::Approx(std::numbers::sqrt2).margin(1e-4));
    const auto diag12 = DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 2.0}});
    CHECK(brute_force_oracle(diag12, kInf, kOne, 256) == Catch::Approx(3.0).margin(1e-9));

    CHECK_THROWS_AS(brute_force_oracle(oracles::random_matrix(2, 5, 1), kTwo, kTwo, 256),
                    InputError);
    CHECK_THROWS_AS(brute_force_oracle(identity(2), kTwo, kTwo, 32), InputError);

    // Monotone non-decreasing in resolution by construction.
    const auto B = oracles::random_matrix(3, 3, 41);
    const double v64 = brute_force_oracle(B, Exponent::finite(3), Exponent::finite(1.5), 64);
    const double v128 = brute_force_oracle(B, Exponent::finite(3), Exponent::finite(1.5), 128);
    const double v256 = brute_force_oracle(B, Exponent::finite(3), Exponent::finite(1.5), 256);
    CHECK(v64 <= v128 + 1e-15);
    CHECK(v128 <= v256 + 1e-15);
}

TEST_CASE("power iteration agrees with the oracle", "[opnorm]") {
    const auto B = oracles::random_matrix(3, 3, 2024);
    const auto res = op_norm(B, Exponent::finite(3), Exponent::finite(1.5));
    CHECK(res.kind == CertKind::HeuristicLowerBound);
    const double ref = brute_force_oracle(B, Exponent::finite(3), Exponent::finite(1.5), 256);
    CHECK(res.value == Catch::Approx(ref).epsilon(1e-3));

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto M = oracles::random_matrix(3, 2 + seed % 3, seed * 17);
        for (auto [rv, sv] : {std::pair{1.5, 3.0}, {2.5, 1.3}, {1.2, 1.2},
                              {1.05, 2.0}, {2.0, 1.05}}) {
            const Exponent r = Exponent::finite(rv), s = Exponent::finite(sv);
            const double heur = op_norm(M, r, s).value;
            const double ref2 = brute_force_oracle(M, r, s, 128);
            CHECK(heur == Catch::Approx(ref2).epsilon(2e-3));
        }
    }
}

TEST_CASE("column formula matches the oracle for r <= 1 <= s", "[opnorm]") {
    Rng shape_rng(555);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t m = 1 + shape_rng.next_below(4), n = 1 + shape_rng.next_below(4);
        const auto B = oracles::random_matrix(m, n, 7000 + seed);
        for (double rv : {0.5, 0.8, 1.0}) {
            for (double sv : {1.0, 1.7, 2.0}) {
                const auto res = op_norm(B, Exponent::finite(rv), Exponent::finite(sv));
                CHECK(res.kind == CertKind::Exact);
                const double ref =
                    brute_force_oracle(B, Exponent::finite(rv), Exponent::finite(sv), 64);
                CHECK(res.value == Catch::Approx(ref).epsilon(1e-4));
            }
            const auto res = op_norm(B, Exponent::finite(rv), kInf);
            const double ref = brute_force_oracle(B, Exponent::finite(rv), kInf, 64);
            CHECK(res.value == Catch::Approx(ref).epsilon(1e-4));
        }
    }
}

TEST_CASE("hadamard square identity", "[opnorm]") {
    // For 1 <= p <= 2, p <= q:  ||A o A: l_{p/2} -> l_{q/2}||^(1/2) =
    // max_j ||col_j(A)||_q, reproduced to 1e-10.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto A = oracles::random_matrix(5, 4, 300 + seed);
        const auto S = A.hadamard_square();
        for (auto [pv, qv] : {std::pair{1.0, 2.0}, {2.0, 3.0}, {1.5, 1.7}, {2.0, 2.0},
                              {1.0, 1.0}, {1.2, 1.4}}) {
            const Exponent p = Exponent::finite(pv), q = Exponent::finite(qv);
            const auto res = op_norm(S, half(p), half(q));
            REQUIRE(res.kind == CertKind::Exact);
            double maxcol = 0.0;
            for (std::size_t j = 0; j < A.cols(); ++j)
                maxcol = std::max(maxcol, vector_norm(A.col(j), q));
            CHECK(std::sqrt(res.value) == Catch::Approx(maxcol).epsilon(1e-10));
        }
        // and with q = inf (p <= 2 <= q)
        const auto res = op_norm(S, Exponent::finite(0.5), kInf);
        double maxcol = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j)
            maxcol = std::max(maxcol, vector_norm(A.col(j), kInf));
        CHECK(std::sqrt(res.value) == Catch::Approx(maxcol).epsilon(1e-10));
    }
}

TEST_CASE("witness invariants across strategies", "[opnorm]") {
    const std::pair<Exponent, Exponent> regimes[] = {
        {kOne, kTwo},                                     // column formula
        {Exponent::finite(0.75), Exponent::finite(0.9)},  // quasi column formula
        {kTwo, kInf},                                     // row formula
        {kTwo, kTwo},                                     // spectral
        {kInf, Exponent::finite(1.5)},                    // sign enumeration
        {Exponent::finite(3), kOne},                      // dual sign enumeration
        {Exponent::finite(3), Exponent::finite(1.5)},     // power iteration
        {Exponent::finite(1.5), Exponent::finite(0.6)},   // ascent + bracket
    };
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto B = oracles::random_matrix(4, 5, 900 + seed);
        for (const auto& [r, s] : regimes) {
            const auto res = op_norm(B, r, s);
            REQUIRE(res.value >= 0.0);
            const double ratio = witness_ratio(B, r, s, res);
            if (res.kind == CertKind::Exact) {
                CHECK(ratio <= res.value + 1e-9);
                CHECK(ratio >= res.value * (1.0 - 1e-9) - 1e-12);
            } else {
                REQUIRE(res.lower <= res.upper);
                CHECK(ratio >= res.lower - 1e-9);
                CHECK(ratio <= res.upper + 1e-9);
                CHECK(res.value == res.lower);
            }
        }
    }
}

TEST_CASE("quasi-norm bracket", "[opnorm]") {
    // ||Id_4: l_1 -> l_{1/2}|| = 4 (uniform mass); the subadditive upper
    // bound collapses to the same value here.
    const auto res = op_norm(identity(4), kOne, Exponent::finite(0.5));
    REQUIRE(res.kind == CertKind::Bracket);
    CHECK(res.upper == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(res.value == Catch::Approx(4.0).epsilon(1e-6));

    // Heuristic lower never exceeds the attached upper.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto B = oracles::random_matrix(4, 4, 40 + seed);
        const auto r = op_norm(B, Exponent::finite(1.5), Exponent::finite(0.7));
        REQUIRE(r.kind == CertKind::Bracket);
        CHECK(r.lower <= r.upper + 1e-12);
        const double ref = brute_force_oracle(B, Exponent::finite(1.5), Exponent::finite(0.7), 64);
        CHECK(r.lower >= ref * (1.0 - 2e-3));
    }
}

TEST_CASE("scaling law", "[opnorm]") {
    const std::pair<Exponent, Exponent> regimes[] = {
        {kOne, kTwo}, {kTwo, kInf}, {kTwo, kTwo}, {kInf, kOne},
        {Exponent::finite(3), Exponent::finite(1.5)}, {kOne, Exponent::finite(0.5)},
    };
    const auto B = oracles::random_matrix(4, 4, 77);
    const auto C = B.scaled(-3.25);
    for (const auto& [r, s] : regimes) {
        const double vb = op_norm(B, r, s).value;
        const double vc = op_norm(C, r, s).value;
        CHECK(vc == Catch::Approx(3.25 * vb).epsilon(1e-12));
    }
}

TEST_CASE("duality on exact pairs", "[opnorm]") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto B = oracles::random_matrix(5, 4, 4000 + seed);
        const auto Bt = B.transpose();
        // (1,q) <-> (q*, inf)
        for (double qv : {1.0, 1.5, 2.0, 3.0}) {
            const Exponent q = Exponent::finite(qv);
            const double lhs = op_norm(B, kOne, q).value;
            const double rhs = op_norm(Bt, conjugate(q), kInf).value;
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-8));
        }
        // (2,2) and (inf,1) are self-dual pairs
        CHECK(op_norm(B, kTwo, kTwo).value ==
              Catch::Approx(op_norm(Bt, kTwo, kTwo).value).epsilon(1e-8));
        CHECK(op_norm(B, kInf, kOne).value ==
              Catch::Approx(op_norm(Bt, kInf, kOne).value).epsilon(1e-8));
    }
}

TEST_CASE("determinism", "[opnorm]") {
    const auto B = oracles::random_matrix(4, 4, 123);
    for (const auto& [r, s] : {std::pair{Exponent::finite(3), Exponent::finite(1.5)},
                               {Exponent::finite(1.5), Exponent::finite(0.6)}}) {
        const auto a = op_norm(B, r, s);
        const auto b = op_norm(B, r, s);
        CHECK(a.value == b.value);
        CHECK(a.witness == b.witness);
    }
}

TEST_CASE("submatrix sup norm", "[opnorm]") {
    const auto B = oracles::random_matrix(4, 3, 11);
    const auto full = submatrix_sup_norm(B, 4, 3, kOne, kTwo);
    CHECK(full.value == Catch::Approx(op_norm(B, kOne, kTwo).value).margin(1e-14));
    CHECK(full.kind == CertKind::Exact);

    const auto D = DenseMatrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}});
    CHECK(submatrix_sup_norm(D, 1, 1, kTwo, kTwo).value == Catch::Approx(3.0).margin(1e-14));

    const auto R = oracles::random_matrix(5, 5, 99);
    DenseMatrix topleft(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) topleft(i, j) = R(i, j);
    const double sup = submatrix_sup_norm(R, 3, 3, kOne, kTwo).value;
    CHECK(sup >= op_norm(topleft, kOne, kTwo).value - 1e-12);

    CHECK_THROWS_AS(submatrix_sup_norm(oracles::random_matrix(40, 40, 1), 20, 20, kOne, kTwo),
                    InputError);
}

TEST_CASE("quasi column formula matches the oracle for r <= s <= 1", "[opnorm]") {
    // Exactness here rests on the subadditivity of t -> |t|^s plus norm
    // monotonicity; validated against the sphere oracle on signed matrices.
    Rng shapes(777);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t m = 1 + shapes.next_below(4), n = 1 + shapes.next_below(3);
        const auto B = oracles::random_matrix(m, n, 5150 + seed);
        for (auto [rv, sv] : {std::pair{0.5, 0.5}, {0.5, 0.8}, {0.6, 1.0}, {0.75, 0.9}}) {
            const auto res = op_norm(B, Exponent::finite(rv), Exponent::finite(sv));
            REQUIRE(res.kind == CertKind::Exact);
            const double ref = brute_force_oracle(B, Exponent::finite(rv), Exponent::finite(sv), 64);
            CHECK(res.value == Catch::Approx(ref).epsilon(1e-4));
            CHECK(res.value >= ref - 1e-12);  // oracle is a lower bound
        }
    }
}

TEST_CASE("ascent heuristic tracks the oracle on quasi targets", "[opnorm]") {
    // The regimes behind the q = 1 boundary norms: nonnegative matrices,
    // target l_{1/2}, source r >= 1 (concave objective over the ball).
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto A = oracles::random_matrix(4, 3, 7100 + seed);
        const auto S = A.hadamard_square();
        for (double rv : {1.0, 1.25, 1.5}) {
            const auto res = op_norm(S, Exponent::finite(rv), Exponent::finite(0.5));
            REQUIRE(res.kind == CertKind::Bracket);
            const double ref = brute_force_oracle(S, Exponent::finite(rv), Exponent::finite(0.5), 128);
            CHECK(res.value >= ref * (1.0 - 2e-3));
            CHECK(res.upper >= ref * (1.0 - 1e-9));
        }
        // signed matrix, quasi target with r > s: heuristic within the bracket
        const auto B = oracles::random_matrix(3, 3, 7200 + seed);
        const auto r = op_norm(B, Exponent::finite(2), Exponent::finite(0.5));
        const double ref = brute_force_oracle(B, Exponent::finite(2), Exponent::finite(0.5), 128);
        CHECK(r.value >= ref * (1.0 - 2e-3));
        CHECK(r.value <= r.upper + 1e-12);
    }
}

TEST_CASE("nonnegative fast paths agree with enumeration", "[opnorm]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto P = oracles::random_matrix01(4, 4, 600 + seed);
        // r = inf: all-ones formula vs generic sign enumeration
        const auto viaones = op_norm(P, kInf, Exponent::finite(1.5));
        CHECK(viaones.strategy == "nonneg-ones");
        CHECK(viaones.value ==
              Catch::Approx(detail::sign_enumeration(P, Exponent::finite(1.5)).value)
                  .epsilon(1e-12));
        // s = 1: column-sum dual vs dual sign enumeration
        const auto viacolsum = op_norm(P, Exponent::finite(1.5), kOne);
        CHECK(viacolsum.strategy == "nonneg-colsum");
        CHECK(viacolsum.value ==
              Catch::Approx(detail::sign_enumeration_dual(P, Exponent::finite(1.5)).value)
                  .epsilon(1e-12));
    }
}
