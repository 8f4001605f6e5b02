#ifndef STATBUNDLE_FLOWS_HPP
#define STATBUNDLE_FLOWS_HPP

#include <functional>
#include <vector>

#include "statbundle/types.hpp"

// Gradient-flow integration on the simplex. The state update lives in the
// moving exponential chart: a step is q -> e_q(v), multiplicative in the
// weights, so positivity is structural rather than enforced by clipping.

namespace statbundle {

// A section of the bundle: the returned fiber vector is based at the
// query point.
using VectorField = std::function<Fiber(const Prob&)>;

enum class Scheme { ExpEuler, Rk4 };

struct StepDiagnostics {
    double objective;  // NaN when no objective was supplied
    double grad_norm;  // fiber norm of the field at the state
};

// Time-indexed states. States are raw coordinate vectors so the same
// record serves simplex trajectories (weights) and parameter-space
// trajectories (theta).
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<StepDiagnostics> diagnostics;
};

struct IntegrateOptions {
    double dt = 1e-2;
    int steps = 1;
    Scheme scheme = Scheme::ExpEuler;
    // Recorded per step when present.
    std::function<double(const Prob&)> objective;
};

// Integrates q' = F(q) from q0. ExpEuler performs q -> e_q(dt F(q));
// Rk4 runs a classical step on the chart ODE at the current point,
// pulling field values back with the exponential transport. Throws
// PositivityBreach when a state weight drops below 1e-15.
Trajectory integrate(const Prob& q0, const VectorField& field, const IntegrateOptions& opts);

// Closed-form solution of q' = s_q(r): the exponential family
// q(t) = e_r(e^{-t} s_r(q0)).
Prob exp_flow(const Prob& r, const Prob& q0, double t);

// Closed-form solution of r' = eta_r(q): the mixture family
// r(t) = e^{-t} r0 + (1 - e^{-t}) q.
Prob mix_flow(const Prob& q, const Prob& r0, double t);

}  // namespace statbundle

#endif
