#include "statbundle/variational_bayes.hpp"

#include <cmath>

#include "statbundle/kernels.hpp"
#include "statbundle/linalg.hpp"
#include "statbundle/simplex_core.hpp"

namespace statbundle {

namespace {

std::vector<double> gram_cov(const Prob& p, const std::vector<Rv>& u) {
    const std::size_t d = u.size();
    std::vector<double> g(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double c = cov(p, u[i], u[j]);
            g[i * d + j] = c;
            g[j * d + i] = c;
        }
    }
    return g;
}

// log q_{1|2}(x | .) on the latent space.
Rv log_conditional_given_latent(const VBProblem& p) {
    const JointProb& q = p.joint;
    const Prob& q2 = q.margin2();
    std::vector<double> v(q.cols());
    for (std::size_t y = 0; y < q.cols(); ++y) v[y] = std::log(q(p.observation, y) / q2[y]);
    return Rv(q2.space(), std::move(v));
}

}  // namespace

ExpModel::ExpModel(Prob base, std::vector<Rv> suffstats, std::vector<double> theta)
    : base_(std::move(base)), suffstats_(std::move(suffstats)), theta_(std::move(theta)) {
    if (suffstats_.empty()) throw Error("need at least one sufficient statistic");
    if (theta_.size() != suffstats_.size())
        throw Error("parameter dimension does not match the sufficient statistics");
    for (Rv& u : suffstats_) {
        require_same_space(base_.space(), u.space());
        u = center(base_, u).as_rv();
    }
    if (linalg::cond_inf(gram_cov(base_, suffstats_), suffstats_.size()) > 1e12)
        throw IllConditioned("sufficient statistics are numerically dependent");
}

ExpModel ExpModel::with_theta(std::vector<double> theta) const {
    ExpModel m = *this;
    if (theta.size() != m.suffstats_.size())
        throw Error("parameter dimension does not match the sufficient statistics");
    m.theta_ = std::move(theta);
    return m;
}

Rv ExpModel::tilt() const {
    std::vector<double> v(base_.size(), 0.0);
    for (std::size_t i = 0; i < suffstats_.size(); ++i) {
        for (std::size_t y = 0; y < v.size(); ++y) v[y] += theta_[i] * suffstats_[i][y];
    }
    return Rv(base_.space(), std::move(v));
}

Prob model_prob(const ExpModel& m) { return exp_chart_inv(m.base(), center(m.base(), m.tilt())); }

double psi(const ExpModel& m) { return cumulant(m.base(), m.tilt()); }

std::vector<double> hess_psi(const ExpModel& m) {
    return gram_cov(model_prob(m), m.suffstats());
}

VBProblem::VBProblem(JointProb j, std::size_t x) : joint(std::move(j)), observation(x) {
    if (x >= joint.rows()) throw Error("observation index out of range");
}

double elbo(const VBProblem& p, const Prob& r) {
    require_same_space(r.space(), p.joint.space2());
    return -kl(r, p.joint.margin2()) + expect(r, log_conditional_given_latent(p));
}

Fiber elbo_natural_grad(const VBProblem& p, const Prob& r) {
    require_same_space(r.space(), p.joint.space2());
    const JointProb& q = p.joint;
    std::vector<double> v(r.size());
    for (std::size_t y = 0; y < r.size(); ++y) v[y] = std::log(q(p.observation, y) / r[y]);
    return center(r, Rv(r.space(), std::move(v)));
}

std::vector<double> vb_theta_rhs(const VBProblem& p, const ExpModel& m) {
    require_same_space(m.base().space(), p.joint.space2());
    const Prob r = model_prob(m);
    const std::vector<double> hess = hess_psi(m);
    // log q12(x,.) relative to the model base; with the base equal to the
    // latent margin this is log q_{1|2}(x|.), and the covariance makes the
    // formula the exact theta-gradient of the bound for any base.
    std::vector<double> lik(p.joint.cols());
    for (std::size_t y = 0; y < lik.size(); ++y) {
        lik[y] = std::log(p.joint(p.observation, y) / m.base()[y]);
    }
    const Rv loglik(m.base().space(), std::move(lik));
    const std::size_t d = m.dim();

    std::vector<double> rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        double drift = 0.0;
        for (std::size_t j = 0; j < d; ++j) drift += hess[i * d + j] * m.theta()[j];
        rhs[i] = -drift + cov(r, m.suffstats()[i], loglik);
    }
    return rhs;
}

Trajectory vb_flow(const VBProblem& p, const ExpModel& m0, double dt, int steps) {
    if (!(dt > 0.0)) throw Error("integration step must be positive");
    if (steps < 1) throw Error("need at least one integration step");
    const std::size_t d = m0.dim();

    std::vector<double> theta = m0.theta();
    auto rhs_at = [&](const std::vector<double>& th) {
        return vb_theta_rhs(p, m0.with_theta(th));
    };
    auto shifted = [&](const std::vector<double>& th, const std::vector<double>& k, double c) {
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) out[i] = th[i] + c * k[i];
        return out;
    };

    Trajectory out;
    auto record = [&](double t) {
        const std::vector<double> rhs = rhs_at(theta);
        out.times.push_back(t);
        out.states.push_back(theta);
        out.diagnostics.push_back({elbo(p, model_prob(m0.with_theta(theta))), max_abs(rhs)});
    };
    record(0.0);

    for (int step = 1; step <= steps; ++step) {
        const std::vector<double> k1 = rhs_at(theta);
        const std::vector<double> k2 = rhs_at(shifted(theta, k1, dt / 2.0));
        const std::vector<double> k3 = rhs_at(shifted(theta, k2, dt / 2.0));
        const std::vector<double> k4 = rhs_at(shifted(theta, k3, dt));
        for (std::size_t i = 0; i < d; ++i) {
            theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (max_abs(theta) > 1e6) throw Error("parameter flow diverged");
        record(static_cast<double>(step) * dt);
    }
    return out;
}

std::vector<Rv> orthonormal_suffstats(const Prob& q2, std::size_t d) {
    const std::size_t n = q2.size();
    if (d < 1 || d > n - 1) throw Error("sufficient statistic count must lie in [1, n-1]");

    // Gram-Schmidt on the indicator contrasts under <.,.>_{q2}.
    auto pair = [&](const Rv& a, const Rv& b) {
        return kernels::dot3(q2.weights(), a.values(), b.values());
    };
    std::vector<Rv> basis;
    basis.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> v(n, 0.0);
        v[k] = 1.0;
        Rv u = center(q2, Rv(q2.space(), std::move(v))).as_rv();
        for (const Rv& b : basis) u = u - b * pair(u, b);
        const double norm = std::sqrt(pair(u, u));
        if (!(norm > 0.0)) throw IllConditioned("indicator contrasts degenerated");
        basis.push_back(u * (1.0 / norm));
    }
    return basis;
}

std::vector<double> fit_theta(const Prob& q2, const std::vector<Rv>& suffstats,
                              const Prob& target) {
    const std::size_t d = suffstats.size();
    const Fiber w = exp_chart(q2, target);
    std::vector<double> gram(d * d);
    std::vector<double> rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Fiber ui = center(q2, suffstats[i]);
        rhs[i] = fiber_dot(ui, w);
        for (std::size_t j = 0; j < d; ++j) {
            gram[i * d + j] = fiber_dot(ui, center(q2, suffstats[j]));
        }
    }
    if (linalg::cond_inf(gram, d) > 1e12)
        throw IllConditioned("sufficient-statistic Gram system is too ill-conditioned");
    return linalg::solve(std::move(gram), std::move(rhs), d);
}

}  // namespace statbundle
