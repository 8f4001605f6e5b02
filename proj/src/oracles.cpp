#include "statbundle/oracles.hpp"

#include <cmath>

namespace statbundle::oracles {

SinkhornResult sinkhorn_oracle(const Rv& cost, double eps, const Prob& q1, const Prob& q2,
                               double tol) {
    if (!(eps > 0.0)) throw Error("temperature must be positive");
    if (!(tol > 0.0 && tol <= 1e-6)) throw Error("margin tolerance must lie in (0, 1e-6]");
    const std::size_t n1 = q1.size();
    const std::size_t n2 = q2.size();
    if (cost.size() != n1 * n2) throw SpaceMismatch("cost does not match the margin spaces");

    // Tilted product, normalized up front to keep the scaling well ranged.
    std::vector<double> w(n1 * n2);
    double total = 0.0;
    for (std::size_t x = 0; x < n1; ++x) {
        for (std::size_t y = 0; y < n2; ++y) {
            const double v = q1[x] * q2[y] * std::exp(-cost[x * n2 + y] / eps);
            w[x * n2 + y] = v;
            total += v;
        }
    }
    for (double& v : w) v /= total;

    constexpr int kMaxSweeps = 100000;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (std::size_t x = 0; x < n1; ++x) {
            double row = 0.0;
            for (std::size_t y = 0; y < n2; ++y) row += w[x * n2 + y];
            const double s = q1[x] / row;
            for (std::size_t y = 0; y < n2; ++y) w[x * n2 + y] *= s;
        }
        for (std::size_t y = 0; y < n2; ++y) {
            double col = 0.0;
            for (std::size_t x = 0; x < n1; ++x) col += w[x * n2 + y];
            const double s = q2[y] / col;
            for (std::size_t x = 0; x < n1; ++x) w[x * n2 + y] *= s;
        }

        double err = 0.0;
        for (std::size_t x = 0; x < n1; ++x) {
            double row = 0.0;
            for (std::size_t y = 0; y < n2; ++y) row += w[x * n2 + y];
            err = std::max(err, std::fabs(row - q1[x]));
        }
        for (std::size_t y = 0; y < n2; ++y) {
            double col = 0.0;
            for (std::size_t x = 0; x < n1; ++x) col += w[x * n2 + y];
            err = std::max(err, std::fabs(col - q2[y]));
        }
        if (err <= tol) {
            return SinkhornResult{JointProb(q1.space(), q2.space(), std::move(w)), sweep, err};
        }
    }
    throw ConvergenceFailure("sinkhorn scaling did not reach the margin tolerance");
}

BruteDivergences brute_divergences(const Prob& q, const Prob& r) {
    require_same_space(q.space(), r.space());
    const std::size_t n = q.size();
    double kl = 0.0;
    double ce = 0.0;
    double hq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        kl += q[i] * std::log(q[i] / r[i]);
        ce += -q[i] * std::log(r[i]);
        hq += -q[i] * std::log(q[i]);
    }
    double js = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = 0.5 * (q[i] + r[i]);
        js += 0.5 * q[i] * std::log(q[i] / m) + 0.5 * r[i] * std::log(r[i] / m);
    }
    return BruteDivergences{kl, ce, hq, js};
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace statbundle::oracles
