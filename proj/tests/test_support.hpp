#ifndef STATBUNDLE_TEST_SUPPORT_HPP
#define STATBUNDLE_TEST_SUPPORT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "statbundle/random.hpp"
#include "statbundle/rng.hpp"
#include "statbundle/types.hpp"

namespace testsup {

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

inline double sup_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::fabs(x));
    return m;
}

// Exponential-chart curve t -> e_p(t a + t^2 b) with an analytic score,
// used by the chain-rule and commutation checks.
struct ExpCurve {
    statbundle::Prob p;
    statbundle::Fiber a;
    statbundle::Fiber b;

    statbundle::Prob at(double t) const;
    // d/dt log q(t) in the fiber at q(t).
    statbundle::Fiber velocity(double t) const;
};

ExpCurve random_curve(const statbundle::Prob& p, statbundle::SplitMix64& gen, double scale = 0.7);

}  // namespace testsup

#endif
