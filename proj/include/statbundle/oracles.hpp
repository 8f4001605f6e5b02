#ifndef STATBUNDLE_ORACLES_HPP
#define STATBUNDLE_ORACLES_HPP

#include <functional>

#include "statbundle/product_space.hpp"
#include "statbundle/types.hpp"

// Brute-force reference implementations kept deliberately separate from
// the code they cross-validate: plain summation loops, an independent
// Sinkhorn solver, and a 1-D bracketing minimizer. Nothing here calls
// into the chart/transport machinery.

namespace statbundle::oracles {

struct SinkhornResult {
    JointProb plan;
    int iterations;
    double margin_error;
};

// Alternate row/column scaling of e^{-U/eps} (q1 (x) q2) to the target
// margins until the margin sup-error is at most tol; tol in (0, 1e-6].
// Throws ConvergenceFailure after 1e5 sweeps.
SinkhornResult sinkhorn_oracle(const Rv& cost, double eps, const Prob& q1, const Prob& q2,
                               double tol);

struct BruteDivergences {
    double kl;
    double cross_entropy;
    double entropy_q;
    double js;
};

// Naive direct sums, no chart machinery.
BruteDivergences brute_divergences(const Prob& q, const Prob& r);

// Golden-section minimizer for the small-polytope cross-checks.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol);

}  // namespace statbundle::oracles

#endif
