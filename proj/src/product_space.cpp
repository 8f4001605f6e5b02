#include "statbundle/product_space.hpp"

#include <cmath>

#include "statbundle/kernels.hpp"
#include "statbundle/linalg.hpp"
#include "statbundle/simplex_core.hpp"

namespace statbundle {

namespace {

Prob margin_of(const SampleSpace& sub, const std::vector<double>& w, std::size_t rows,
               std::size_t cols, int axis) {
    std::vector<double> m(axis == 1 ? rows : cols, 0.0);
    for (std::size_t x = 0; x < rows; ++x) {
        for (std::size_t y = 0; y < cols; ++y) {
            m[axis == 1 ? x : y] += w[x * cols + y];
        }
    }
    return Prob(sub, std::move(m));
}

void check_axis(int axis) {
    if (axis != 1 && axis != 2) throw Error("axis must be 1 or 2");
}

}  // namespace

SampleSpace product_space(const SampleSpace& space1, const SampleSpace& space2) {
    return SampleSpace(space1.size() * space2.size());
}

JointProb::JointProb(SampleSpace space1, SampleSpace space2, std::vector<double> weights)
    : space1_(space1),
      space2_(space2),
      flat_(product_space(space1, space2), std::move(weights)),
      margin1_(margin_of(space1_, flat_.weights(), space1_.size(), space2_.size(), 1)),
      margin2_(margin_of(space2_, flat_.weights(), space1_.size(), space2_.size(), 2)) {}

JointProb outer(const Prob& q1, const Prob& q2) {
    std::vector<double> w(q1.size() * q2.size());
    for (std::size_t x = 0; x < q1.size(); ++x) {
        for (std::size_t y = 0; y < q2.size(); ++y) w[x * q2.size() + y] = q1[x] * q2[y];
    }
    return JointProb(q1.space(), q2.space(), std::move(w));
}

JointProb joint_from_weights(const SampleSpace& space1, const SampleSpace& space2,
                             const std::vector<double>& weights) {
    return JointProb(space1, space2, weights);
}

Rv lift(const JointProb& r, const Rv& u, int axis) {
    check_axis(axis);
    require_same_space(axis == 1 ? r.space1() : r.space2(), u.space());
    std::vector<double> v(r.rows() * r.cols());
    for (std::size_t x = 0; x < r.rows(); ++x) {
        for (std::size_t y = 0; y < r.cols(); ++y) v[x * r.cols() + y] = u[axis == 1 ? x : y];
    }
    return Rv(r.as_prob().space(), std::move(v));
}

Prob marginal(const JointProb& r, int axis) {
    check_axis(axis);
    return axis == 1 ? r.margin1() : r.margin2();
}

Rv condexp(const JointProb& r, const Rv& v, int axis) {
    check_axis(axis);
    require_same_space(r.as_prob().space(), v.space());
    const Prob& margin = axis == 1 ? r.margin1() : r.margin2();
    std::vector<double> g(margin.size(), 0.0);
    for (std::size_t x = 0; x < r.rows(); ++x) {
        for (std::size_t y = 0; y < r.cols(); ++y) {
            g[axis == 1 ? x : y] += v[x * r.cols() + y] * r(x, y);
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) g[i] /= margin[i];
    return Rv(margin.space(), std::move(g));
}

Fiber d_marginalization(const JointProb& r, const Fiber& rdot, int axis) {
    require_same_base(rdot, r.as_prob());
    return center(marginal(r, axis), condexp(r, rdot.as_rv(), axis));
}

JointProb mean_field(const JointProb& r) { return outer(r.margin1(), r.margin2()); }

Fiber d_mean_field(const JointProb& r, const Fiber& rdot) {
    require_same_base(rdot, r.as_prob());
    const Rv c1 = condexp(r, rdot.as_rv(), 1);
    const Rv c2 = condexp(r, rdot.as_rv(), 2);
    const JointProb bar = mean_field(r);
    return center(bar.as_prob(), lift(bar, c1, 1) + lift(bar, c2, 2));
}

AnovaParts anova(const JointProb& q, const Rv& u) {
    require_same_space(q.as_prob().space(), u.space());
    const std::size_t n1 = q.rows();
    const std::size_t n2 = q.cols();
    const std::size_t m1 = n1 - 1;
    const std::size_t m = m1 + n2 - 1;
    const Prob& q1 = q.margin1();
    const Prob& q2 = q.margin2();

    const double mean = expect(q.as_prob(), u);

    // Basis of the margin-measurable directions: indicator contrasts
    // A_i = 1{x=i} - q1(i), B_j = 1{y=j} - q2(j). Gram entries have closed
    // forms in the margins and the joint.
    std::vector<double> gram(m * m);
    for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < m1; ++j)
            gram[i * m + j] = (i == j ? q1[i] : 0.0) - q1[i] * q1[j];
        for (std::size_t j = 0; j < n2 - 1; ++j)
            gram[i * m + (m1 + j)] = q(i, j) - q1[i] * q2[j];
    }
    for (std::size_t i = 0; i < n2 - 1; ++i) {
        for (std::size_t j = 0; j < m1; ++j) gram[(m1 + i) * m + j] = q(j, i) - q1[j] * q2[i];
        for (std::size_t j = 0; j < n2 - 1; ++j)
            gram[(m1 + i) * m + (m1 + j)] = (i == j ? q2[i] : 0.0) - q2[i] * q2[j];
    }
    if (linalg::cond_inf(gram, m) > 1e12)
        throw IllConditioned("anova normal system is too ill-conditioned");

    // Right-hand side E_q[(u - mean) basis_k].
    std::vector<double> rhs(m, 0.0);
    for (std::size_t x = 0; x < n1; ++x) {
        for (std::size_t y = 0; y < n2; ++y) {
            const double c = q(x, y) * (u[x * n2 + y] - mean);
            if (x < m1) rhs[x] += c;
            if (y < n2 - 1) rhs[m1 + y] += c;
        }
    }
    const std::vector<double> coef = linalg::solve(std::move(gram), std::move(rhs), m);

    std::vector<double> f(n1, 0.0);
    std::vector<double> g(n2, 0.0);
    double off1 = 0.0;
    double off2 = 0.0;
    for (std::size_t i = 0; i < m1; ++i) off1 += coef[i] * q1[i];
    for (std::size_t j = 0; j < n2 - 1; ++j) off2 += coef[m1 + j] * q2[j];
    for (std::size_t x = 0; x < n1; ++x) f[x] = (x < m1 ? coef[x] : 0.0) - off1;
    for (std::size_t y = 0; y < n2; ++y) g[y] = (y < n2 - 1 ? coef[m1 + y] : 0.0) - off2;

    std::vector<double> resid(n1 * n2);
    for (std::size_t x = 0; x < n1; ++x) {
        for (std::size_t y = 0; y < n2; ++y)
            resid[x * n2 + y] = u[x * n2 + y] - mean - f[x] - g[y];
    }
    return AnovaParts{mean, Rv(q.space1(), std::move(f)), Rv(q.space2(), std::move(g)),
                      Rv(q.as_prob().space(), std::move(resid)), q};
}

Fiber grad_kl_meanfield_fwd(const JointProb& r) {
    const JointProb bar = mean_field(r);
    const Fiber s = exp_chart(r.as_prob(), bar.as_prob());
    const Fiber eta = mix_chart(r.as_prob(), bar.as_prob());

    // Conditional expectations under the product law collapse to sums
    // against the opposite margin.
    const Rv c1 = condexp(bar, s.as_rv(), 1);
    const Rv c2 = condexp(bar, s.as_rv(), 2);
    const Rv total = lift(r, c1, 1) + lift(r, c2, 2) - eta.as_rv();
    return center(r.as_prob(), total);
}

Fiber grad_kl_meanfield_rev(const JointProb& r) {
    const JointProb bar = mean_field(r);
    const Fiber s = exp_chart(r.as_prob(), bar.as_prob());
    const Fiber eta = mix_chart(r.as_prob(), bar.as_prob());
    const Rv c1 = condexp(r, eta.as_rv(), 1);
    const Rv c2 = condexp(r, eta.as_rv(), 2);
    const Rv total = lift(r, c1, 1) + lift(r, c2, 2) - s.as_rv();
    return center(r.as_prob(), total);
}

Fiber kantorovich_grad(const JointProb& q, const Rv& cost) {
    return center(q.as_prob(), anova(q, cost).interaction);
}

SchrodingerProblem::SchrodingerProblem(Rv cost, double epsilon, Prob margin1, Prob margin2)
    : cost_(std::move(cost)),
      epsilon_(epsilon),
      margin1_(std::move(margin1)),
      margin2_(std::move(margin2)),
      log_normalizer_(0.0),
      tilted_(uniform(cost_.space())) {
    if (!(epsilon_ > 0.0)) throw Error("temperature must be positive");
    const JointProb ref = outer(margin1_, margin2_);
    require_same_space(cost_.space(), ref.as_prob().space());
    log_normalizer_ = cumulant(ref.as_prob(), cost_ * (-1.0 / epsilon_));

    std::vector<double> t(cost_.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = ref.as_prob()[i] * std::exp(-cost_[i] / epsilon_ - log_normalizer_);
    }
    tilted_ = Prob(cost_.space(), std::move(t));
}

double schrodinger_objective(const SchrodingerProblem& prob, const JointProb& q) {
    return kl(q.as_prob(), prob.tilted_reference());
}

Fiber schrodinger_grad(const SchrodingerProblem& prob, const JointProb& q) {
    // -s_q(tilted reference) written out: centering log q + U/eps - log
    // (q1 (x) q2) at q; the normalizer drops out as a constant.
    const Prob& flat = q.as_prob();
    require_same_space(flat.space(), prob.cost().space());
    const JointProb ref = outer(prob.margin1(), prob.margin2());
    std::vector<double> v(flat.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::log(flat[i] / ref.as_prob()[i]) + prob.cost()[i] / prob.epsilon();
    }
    return center(flat, Rv(flat.space(), std::move(v)));
}

JointProb ipf_project(const JointProb& q, const Prob& margin1, const Prob& margin2, double tol) {
    require_same_space(q.space1(), margin1.space());
    require_same_space(q.space2(), margin2.space());
    const std::size_t n1 = q.rows();
    const std::size_t n2 = q.cols();
    std::vector<double> w = q.as_prob().weights();

    constexpr long long kMaxSweeps = 100000;
    for (long long sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        // Rows are rescaled independently, then columns; the loops are
        // write-disjoint, so the parallel path stays deterministic.
#pragma omp parallel for schedule(static) if (n1 * n2 >= kernels::kParallelCutoff)
        for (long long x = 0; x < static_cast<long long>(n1); ++x) {
            double row = 0.0;
            for (std::size_t y = 0; y < n2; ++y) row += w[x * n2 + y];
            const double scale = margin1[static_cast<std::size_t>(x)] / row;
            for (std::size_t y = 0; y < n2; ++y) w[x * n2 + y] *= scale;
        }
#pragma omp parallel for schedule(static) if (n1 * n2 >= kernels::kParallelCutoff)
        for (long long y = 0; y < static_cast<long long>(n2); ++y) {
            double col = 0.0;
            for (std::size_t x = 0; x < n1; ++x) col += w[x * n2 + static_cast<std::size_t>(y)];
            const double scale = margin2[static_cast<std::size_t>(y)] / col;
            for (std::size_t x = 0; x < n1; ++x) w[x * n2 + static_cast<std::size_t>(y)] *= scale;
        }

        double err = 0.0;
        for (std::size_t x = 0; x < n1; ++x) {
            double row = 0.0;
            for (std::size_t y = 0; y < n2; ++y) row += w[x * n2 + y];
            err = std::max(err, std::fabs(row - margin1[x]));
        }
        for (std::size_t y = 0; y < n2; ++y) {
            double col = 0.0;
            for (std::size_t x = 0; x < n1; ++x) col += w[x * n2 + y];
            err = std::max(err, std::fabs(col - margin2[y]));
        }
        if (err <= tol) return JointProb(q.space1(), q.space2(), std::move(w));
    }
    throw ConvergenceFailure("iterative proportional fitting did not reach the margin tolerance");
}

Trajectory constrained_schrodinger_flow(const SchrodingerProblem& prob, const JointProb& q0,
                                        double dt, int steps) {
    if (!(dt > 0.0)) throw Error("integration step must be positive");
    if (steps < 1) throw Error("need at least one integration step");

    auto margin_gap = [&](const JointProb& q) {
        double gap = 0.0;
        for (std::size_t x = 0; x < q.rows(); ++x)
            gap = std::max(gap, std::fabs(q.margin1()[x] - prob.margin1()[x]));
        for (std::size_t y = 0; y < q.cols(); ++y)
            gap = std::max(gap, std::fabs(q.margin2()[y] - prob.margin2()[y]));
        return gap;
    };
    if (margin_gap(q0) > 1e-10)
        throw Error("initial plan does not match the problem margins");

    Trajectory out;
    JointProb q = q0;
    auto record = [&](double t, const JointProb& state, const Rv& direction) {
        out.times.push_back(t);
        out.states.push_back(state.as_prob().weights());
        out.diagnostics.push_back(
            {schrodinger_objective(prob, state), max_abs(direction.values())});
    };
    auto plan_direction = [&](const JointProb& state) {
        return anova(state, schrodinger_grad(prob, state).as_rv()).interaction;
    };

    record(0.0, q, plan_direction(q));
    for (int step = 1; step <= steps; ++step) {
        const Rv dir = plan_direction(q);
        const Prob moved = exp_chart_inv(q.as_prob(), center(q.as_prob(), dir * (-dt)));
        for (double wgt : moved.weights()) {
            if (wgt < 1e-15) throw PositivityBreach("constrained flow left the open simplex");
        }
        q = ipf_project(JointProb(q.space1(), q.space2(), moved.weights()), prob.margin1(),
                        prob.margin2());
        record(static_cast<double>(step) * dt, q, plan_direction(q));
    }
    return out;
}

}  // namespace statbundle
