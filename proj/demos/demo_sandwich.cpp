// Mini sandwich run: Monte Carlo norm estimates of X_A for the identity
// coefficient matrix against the certified lower pieces and the explicit
// Gaussian upper bound, on a small (p, q) grid.

#include <cstdio>

#include "normlab/normlab.hpp"

int main() {
    using namespace normlab;
    const std::vector<ScenarioSpec> scenarios = {ScenarioSpec::identity(8)};
    const std::vector<std::pair<Exponent, Exponent>> grid = {
        {Exponent::finite(1), Exponent::finite(2)},
        {Exponent::finite(2), Exponent::finite(2)},
        {Exponent::finite(1), Exponent::infinity()},
        {Exponent::infinity(), Exponent::finite(1)},
    };

    const SweepResult r = sandwich_sweep(scenarios, EntryModel::gaussian(), grid, 200, {42});
    std::printf("%-14s %6s %6s  %12s %12s %12s  %s\n", "scenario", "p", "q", "lower_cert",
                "mc_mean", "upper", "violation");
    for (const auto& c : r.cells)
        std::printf("%-14s %6s %6s  %12.6f %12.6f %12.6f  %s\n", c.scenario.c_str(), c.p.c_str(),
                    c.q.c_str(), c.lower_certified, c.mc_mean, c.upper, c.violation ? "YES" : "no");
    std::printf("cells=%zu violations=%zu\n", r.summary.cells, r.summary.violations);
    return r.summary.violations == 0 ? 0 : 2;
}
