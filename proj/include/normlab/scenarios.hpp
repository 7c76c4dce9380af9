#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "normlab/matrix.hpp"
#include "normlab/sampling.hpp"

namespace normlab {

/// Coefficient laws for seeded random scenario matrices (these draw the
/// deterministic matrix A, not the random entries X).
enum class CoefficientLaw { Uniform01, UniformSym, Gaussian };

/// Named generators for the coefficient matrices used across experiments.
/// block_ones(k, blocks) places `blocks` all-ones k x k blocks on the
/// diagonal of an otherwise-zero square matrix.
struct ScenarioSpec {
    enum class Kind { Identity, Ones, BlockOnes, Diag, SeededRandom };

    Kind kind = Kind::Identity;
    std::size_t n = 1;
    std::size_t m = 1;
    std::size_t k = 1;
    std::size_t blocks = 1;
    std::vector<double> weights;
    CoefficientLaw law = CoefficientLaw::Uniform01;
    std::uint64_t seed = 0;

    static ScenarioSpec identity(std::size_t n) {
        ScenarioSpec s;
        s.kind = Kind::Identity;
        s.n = n;
        return s;
    }
    static ScenarioSpec ones(std::size_t m, std::size_t n) {
        ScenarioSpec s;
        s.kind = Kind::Ones;
        s.m = m;
        s.n = n;
        return s;
    }
    static ScenarioSpec block_ones(std::size_t k, std::size_t blocks) {
        ScenarioSpec s;
        s.kind = Kind::BlockOnes;
        s.k = k;
        s.blocks = blocks;
        return s;
    }
    static ScenarioSpec diag(std::vector<double> weights) {
        ScenarioSpec s;
        s.kind = Kind::Diag;
        s.weights = std::move(weights);
        return s;
    }
    static ScenarioSpec seeded_random(std::size_t m, std::size_t n, CoefficientLaw law, std::uint64_t seed) {
        ScenarioSpec s;
        s.kind = Kind::SeededRandom;
        s.m = m;
        s.n = n;
        s.law = law;
        s.seed = seed;
        return s;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Identity: return "identity(" + std::to_string(n) + ")";
            case Kind::Ones: return "ones(" + std::to_string(m) + "x" + std::to_string(n) + ")";
            case Kind::BlockOnes:
                return "block_ones(" + std::to_string(k) + "," + std::to_string(blocks) + ")";
            case Kind::Diag: return "diag(" + std::to_string(weights.size()) + ")";
            case Kind::SeededRandom:
                return "seeded_random(" + std::to_string(m) + "x" + std::to_string(n) + ",seed=" +
                       std::to_string(seed) + ")";
        }
        return "?";
    }
};

/// Materializes a scenario. Guards against runaway sizes at 1e8 entries.
inline DenseMatrix scenario_matrix(const ScenarioSpec& spec) {
    const auto guard = [](std::size_t m, std::size_t n) {
        if (m == 0 || n == 0) throw InputError("scenario dimensions must be positive");
        if (static_cast<double>(m) * static_cast<double>(n) > 1e8)
            throw InputError("scenario exceeds the 1e8 entry guard");
    };
    switch (spec.kind) {
        case ScenarioSpec::Kind::Identity: {
            guard(spec.n, spec.n);
            DenseMatrix a(spec.n, spec.n);
            for (std::size_t i = 0; i < spec.n; ++i) a(i, i) = 1.0;
            return a;
        }
        case ScenarioSpec::Kind::Ones: {
            guard(spec.m, spec.n);
            return DenseMatrix(spec.m, spec.n, 1.0);
        }
        case ScenarioSpec::Kind::BlockOnes: {
            const std::size_t side = spec.k * spec.blocks;
            guard(side, side);
            DenseMatrix a(side, side);
            for (std::size_t b = 0; b < spec.blocks; ++b)
                for (std::size_t i = 0; i < spec.k; ++i)
                    for (std::size_t j = 0; j < spec.k; ++j) a(b * spec.k + i, b * spec.k + j) = 1.0;
            return a;
        }
        case ScenarioSpec::Kind::Diag: {
            const std::size_t n = spec.weights.size();
            guard(n, n);
            DenseMatrix a(n, n);
            for (std::size_t i = 0; i < n; ++i) a(i, i) = spec.weights[i];
            return a;
        }
        case ScenarioSpec::Kind::SeededRandom: {
            guard(spec.m, spec.n);
            DenseMatrix a(spec.m, spec.n);
            Rng rng(spec.seed);
            for (std::size_t i = 0; i < spec.m; ++i) {
                auto row = a.row(i);
                for (std::size_t j = 0; j < spec.n; ++j) {
                    switch (spec.law) {
                        case CoefficientLaw::Uniform01: row[j] = rng.next_unit_open(); break;
                        case CoefficientLaw::UniformSym: row[j] = 2.0 * rng.next_unit_open() - 1.0; break;
                        case CoefficientLaw::Gaussian: row[j] = rng.next_gaussian(); break;
                    }
                }
            }
            return a;
        }
    }
    throw InputError("unknown scenario kind");
}

}  // namespace normlab
