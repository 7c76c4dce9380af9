// Small tour of the norm engine: exact regimes, quasi-norm brackets and the
// heuristic fallback, printed for one fixed matrix.

#include <cstdio>

#include "normlab/normlab.hpp"

int main() {
    using namespace normlab;
    const DenseMatrix B = DenseMatrix::from_rows({{1.0, -2.0, 0.5}, {0.0, 3.0, 1.0}, {2.0, 1.0, -1.0}});

    const std::pair<const char*, std::pair<Exponent, Exponent>> cases[] = {
        {"l1 -> l2 (column formula)", {Exponent::finite(1), Exponent::finite(2)}},
        {"l2 -> linf (row formula)", {Exponent::finite(2), Exponent::infinity()}},
        {"l2 -> l2 (spectral)", {Exponent::finite(2), Exponent::finite(2)}},
        {"linf -> l1 (sign enumeration)", {Exponent::infinity(), Exponent::finite(1)}},
        {"l3 -> l1.5 (power iteration)", {Exponent::finite(3), Exponent::finite(1.5)}},
        {"l0.5 -> l0.5 (quasi, exact)", {Exponent::finite(0.5), Exponent::finite(0.5)}},
    };

    for (const auto& [label, pq] : cases) {
        const NormResult r = op_norm(B, pq.first, pq.second);
        std::printf("%-34s value=%.10f kind=%s strategy=%s\n", label, r.value, to_string(r.kind),
                    r.strategy.c_str());
    }

    const double oracle = brute_force_oracle(B, Exponent::finite(3), Exponent::finite(1.5), 128);
    std::printf("%-34s value=%.10f\n", "l3 -> l1.5 (brute force oracle)", oracle);
    return 0;
}
