#include "statbundle/flows.hpp"

#include <cmath>
#include <limits>

#include "statbundle/simplex_core.hpp"

namespace statbundle {

namespace {

void check_positivity(const Prob& q) {
    for (double w : q.weights()) {
        if (w < 1e-15) throw PositivityBreach("trajectory state left the open simplex");
    }
}

Prob euler_step(const Prob& q, const VectorField& field, double dt) {
    return exp_chart_inv(q, field(q) * dt);
}

// One classical RK4 step on the chart ODE v' = U^e_{e_p(v) -> p} F(e_p(v))
// with v(0) = 0 in the fiber at the current point p.
Prob rk4_step(const Prob& p, const VectorField& field, double dt) {
    const Fiber k1 = field(p);
    const Prob q2 = exp_chart_inv(p, k1 * (dt / 2.0));
    const Fiber k2 = e_transport(q2, p, field(q2));
    const Prob q3 = exp_chart_inv(p, k2 * (dt / 2.0));
    const Fiber k3 = e_transport(q3, p, field(q3));
    const Prob q4 = exp_chart_inv(p, k3 * dt);
    const Fiber k4 = e_transport(q4, p, field(q4));
    return exp_chart_inv(p, (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0));
}

}  // namespace

Trajectory integrate(const Prob& q0, const VectorField& field, const IntegrateOptions& opts) {
    if (!(opts.dt > 0.0)) throw Error("integration step must be positive");
    if (opts.steps < 1) throw Error("need at least one integration step");

    Trajectory out;
    out.times.reserve(static_cast<std::size_t>(opts.steps) + 1);
    out.states.reserve(static_cast<std::size_t>(opts.steps) + 1);
    out.diagnostics.reserve(static_cast<std::size_t>(opts.steps) + 1);

    Prob q = q0;
    check_positivity(q);
    auto record = [&](double t, const Prob& state) {
        out.times.push_back(t);
        out.states.push_back(state.weights());
        const double obj = opts.objective ? opts.objective(state)
                                          : std::numeric_limits<double>::quiet_NaN();
        out.diagnostics.push_back({obj, fiber_norm(field(state))});
    };
    record(0.0, q);

    for (int step = 1; step <= opts.steps; ++step) {
        q = opts.scheme == Scheme::ExpEuler ? euler_step(q, field, opts.dt)
                                            : rk4_step(q, field, opts.dt);
        check_positivity(q);
        record(static_cast<double>(step) * opts.dt, q);
    }
    return out;
}

Prob exp_flow(const Prob& r, const Prob& q0, double t) {
    require_same_space(r.space(), q0.space());
    if (t < 0.0) throw Error("flow time must be nonnegative");
    return exp_chart_inv(r, exp_chart(r, q0) * std::exp(-t));
}

Prob mix_flow(const Prob& q, const Prob& r0, double t) {
    require_same_space(q.space(), r0.space());
    if (t < 0.0) throw Error("flow time must be nonnegative");
    return mix_probs(std::exp(-t), r0, q);
}

}  // namespace statbundle
