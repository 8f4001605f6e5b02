#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "statbundle/bayes_gan.hpp"
#include "statbundle/gradients.hpp"
#include "statbundle/simplex_core.hpp"
#include "statbundle/variational_bayes.hpp"
#include "test_support.hpp"

using namespace statbundle;
using testsup::sup_abs;
using testsup::sup_diff;

namespace {

std::vector<double> random_theta(std::size_t d, SplitMix64& gen, double scale = 0.8) {
    std::vector<double> t(d);
    for (double& x : t) x = scale * gen.next_gauss();
    return t;
}

// Joint with latent margin exactly q2 and posterior at x0 equal to the
// model point e_{q2}(theta_bar . u): build the likelihood factorization
// with q_{1|2}(x0|y) proportional to the tilt.
JointProb exact_joint(const Prob& q2, const ExpModel& model_at_bar, std::size_t n1,
                      std::size_t x0, SplitMix64& gen) {
    const std::size_t n2 = q2.size();
    const Rv tilt = model_at_bar.tilt();
    double peak = 0.0;
    for (std::size_t y = 0; y < n2; ++y) peak = std::max(peak, std::exp(tilt[y]));
    const double c = 0.5 / peak;

    std::vector<double> w(n1 * n2);
    for (std::size_t y = 0; y < n2; ++y) {
        const double lik0 = c * std::exp(tilt[y]);
        std::vector<double> rest(n1 - 1);
        double total = 0.0;
        for (double& v : rest) {
            v = 0.1 + gen.next_unit();
            total += v;
        }
        std::size_t k = 0;
        for (std::size_t x = 0; x < n1; ++x) {
            const double lik = x == x0 ? lik0 : (1.0 - lik0) * rest[k++] / total;
            w[x * n2 + y] = lik * q2[y];
        }
    }
    return JointProb(SampleSpace(n1), q2.space(), std::move(w));
}

}  // namespace

TEST_CASE("model construction and cumulant surface") {
    SplitMix64 gen(91);
    const SampleSpace s(5);
    const Prob q2 = random_prob(s, gen);
    const std::vector<Rv> u = orthonormal_suffstats(q2, 3);

    // Orthonormality under the base pairing.
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(std::fabs(expect(q2, u[i])) <= 1e-12);
        for (std::size_t j = 0; j < u.size(); ++j) {
            CHECK(cov(q2, u[i], u[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }

    const ExpModel at_zero(q2, u, std::vector<double>(3, 0.0));
    CHECK(sup_diff(model_prob(at_zero).weights(), q2.weights()) <= 1e-14);
    CHECK(std::fabs(psi(at_zero)) <= 1e-14);

    const ExpModel m = at_zero.with_theta(random_theta(3, gen));
    const Prob r = model_prob(m);

    // grad psi = E_{r_theta}[u] against centered differences of psi.
    const double h = 1e-5;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> tp = m.theta();
        std::vector<double> tm = m.theta();
        tp[i] += h;
        tm[i] -= h;
        const double fd = (psi(m.with_theta(tp)) - psi(m.with_theta(tm))) / (2.0 * h);
        CHECK(std::fabs(fd - expect(r, m.suffstats()[i])) <= 1e-7);
    }

    // Hessian against centered differences of grad psi.
    const std::vector<double> hess = hess_psi(m);
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> tp = m.theta();
        std::vector<double> tm = m.theta();
        tp[j] += h;
        tm[j] -= h;
        const Prob rp = model_prob(m.with_theta(tp));
        const Prob rm = model_prob(m.with_theta(tm));
        for (std::size_t i = 0; i < 3; ++i) {
            const double fd =
                (expect(rp, m.suffstats()[i]) - expect(rm, m.suffstats()[i])) / (2.0 * h);
            CHECK(std::fabs(fd - hess[i * 3 + j]) <= 1e-6);
        }
    }

    // Numerically dependent statistics are rejected.
    std::vector<Rv> dep = {u[0], u[0] * (1.0 + 1e-15)};
    CHECK_THROWS_AS(ExpModel(q2, dep, std::vector<double>(2, 0.0)), IllConditioned);
}

TEST_CASE("fit_theta recovers chart coordinates") {
    SplitMix64 gen(92);
    const SampleSpace s(6);
    const Prob q2 = random_prob(s, gen);
    const std::vector<Rv> u = orthonormal_suffstats(q2, 5);
    const std::vector<double> theta = random_theta(5, gen);
    const Prob target = model_prob(ExpModel(q2, u, theta));
    const std::vector<double> recovered = fit_theta(q2, u, target);
    CHECK(sup_diff(recovered, theta) <= 1e-10);
}

TEST_CASE("elbo identity and exactness at the posterior") {
    SplitMix64 gen(93);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n1 = 2 + trial % 3;
        const std::size_t n2 = 2 + (trial / 3) % 4;
        const JointProb joint = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const std::size_t x0 = gen.next_u64() % n1;
        const VBProblem p(joint, x0);

        const Prob posterior = decompose(joint, 1).row(x0);
        const double logev = std::log(joint.margin1()[x0]);

        CHECK(std::fabs(elbo(p, posterior) - logev) <= 1e-12);

        const Prob r = random_prob(SampleSpace(n2), gen);
        CHECK(elbo(p, r) <= logev + 1e-13);
        CHECK(std::fabs(logev - (kl(r, posterior) + elbo(p, r))) <= 1e-12);
    }
}

TEST_CASE("elbo natural gradient") {
    SplitMix64 gen(94);
    const SampleSpace s1(3);
    const SampleSpace s2(5);
    const JointProb joint = random_joint(s1, s2, gen);
    const VBProblem p(joint, 1);

    const Prob posterior = decompose(joint, 1).row(1);
    CHECK(sup_abs(elbo_natural_grad(p, posterior).values()) <= 1e-13);

    const Prob r = random_prob(s2, gen);
    const Fiber g = elbo_natural_grad(p, r);
    CHECK(std::fabs(expect(r, g.as_rv())) <= 1e-12 * (1.0 + sup_abs(g.values())));

    const Fiber fd =
        fd_natural_grad([&](const Prob& t) { return elbo(p, t); }, r, 1e-4);
    CHECK(sup_diff(g.values(), fd.values()) <= 1e-5 * (1.0 + sup_abs(g.values())));
}

TEST_CASE("parameter flow right-hand side") {
    SplitMix64 gen(95);
    const SampleSpace s2(5);
    const Prob q2 = random_prob(s2, gen);
    const std::vector<Rv> u = orthonormal_suffstats(q2, 3);
    const std::vector<double> theta_bar = random_theta(3, gen);
    const ExpModel at_bar(q2, u, theta_bar);
    const JointProb joint = exact_joint(q2, at_bar, 4, 2, gen);
    const VBProblem p(joint, 2);

    // Stationary at the exact parameter.
    CHECK(sup_abs(vb_theta_rhs(p, at_bar)) <= 1e-10);

    // Exact model at a general parameter: rhs = -Hess psi (theta - bar).
    const std::vector<double> theta = random_theta(3, gen);
    const ExpModel m = at_bar.with_theta(theta);
    const std::vector<double> rhs = vb_theta_rhs(p, m);
    const std::vector<double> hess = hess_psi(m);
    for (std::size_t i = 0; i < 3; ++i) {
        double expected = 0.0;
        for (std::size_t j = 0; j < 3; ++j) expected -= hess[i * 3 + j] * (theta[j] - theta_bar[j]);
        CHECK(std::fabs(rhs[i] - expected) <= 1e-10);
    }

    // Directional agreement with finite differences of the bound. The
    // model base here is unrelated to the joint margin; the covariance
    // form of the right-hand side is base-invariant.
    const JointProb any_joint = random_joint(SampleSpace(4), s2, gen);
    const VBProblem pg(any_joint, 0);
    const ExpModel mg(q2, u, random_theta(3, gen));
    const std::vector<double> rhs_g = vb_theta_rhs(pg, mg);
    SplitMix64 dir_gen(977);
    for (int rep = 0; rep < 5; ++rep) {
        const std::vector<double> delta = random_theta(3, dir_gen, 1.0);
        const double h = 1e-5;
        std::vector<double> tp = mg.theta();
        std::vector<double> tm = mg.theta();
        for (std::size_t i = 0; i < 3; ++i) {
            tp[i] += h * delta[i];
            tm[i] -= h * delta[i];
        }
        const double fd = (elbo(pg, model_prob(mg.with_theta(tp))) -
                           elbo(pg, model_prob(mg.with_theta(tm)))) /
                          (2.0 * h);
        double paired = 0.0;
        for (std::size_t i = 0; i < 3; ++i) paired += rhs_g[i] * delta[i];
        CHECK(std::fabs(fd - paired) <= 1e-5 * (1.0 + std::fabs(paired)));
    }
}

TEST_CASE("full-rank flow converges to the conditional") {
    SplitMix64 gen(96);
    for (int trial = 0; trial < 3; ++trial) {
        const std::size_t n1 = 3;
        const std::size_t n2 = 4 + static_cast<std::size_t>(trial) % 3;
        const JointProb joint = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const std::size_t x0 = trial % n1;
        const VBProblem p(joint, x0);

        const Prob q2 = joint.margin2();
        const std::vector<Rv> u = orthonormal_suffstats(q2, n2 - 1);
        const Prob posterior = decompose(joint, 1).row(x0);
        const std::vector<double> theta_bar = fit_theta(q2, u, posterior);

        const ExpModel m0(q2, u, std::vector<double>(n2 - 1, 0.0));
        const Trajectory traj = vb_flow(p, m0, 1e-2, 3000);

        CHECK(sup_diff(traj.states.back(), theta_bar) <= 1e-6);

        // Stationarity: continuing the flow drives the right-hand side
        // into the noise floor.
        const Trajectory cont = vb_flow(p, m0.with_theta(traj.states.back()), 1e-2, 3000);
        CHECK(cont.diagnostics.back().grad_norm <= 1e-8);

        // The bound is non-decreasing along the ascent.
        for (std::size_t i = 1; i < traj.diagnostics.size(); ++i) {
            CHECK(traj.diagnostics[i].objective >=
                  traj.diagnostics[i - 1].objective - 1e-12);
        }

        // Terminal model matches the conditional in total variation.
        const Prob terminal = model_prob(m0.with_theta(traj.states.back()));
        double tv = 0.0;
        for (std::size_t y = 0; y < n2; ++y) tv += std::fabs(terminal[y] - posterior[y]);
        CHECK(0.5 * tv <= 1e-6);
    }
}

TEST_CASE("problem validation") {
    SplitMix64 gen(97);
    const JointProb joint = random_joint(SampleSpace(3), SampleSpace(3), gen);
    CHECK_THROWS_AS(VBProblem(joint, 3), Error);
    const Prob q2 = joint.margin2();
    CHECK_THROWS_AS(orthonormal_suffstats(q2, 3), Error);
    CHECK_THROWS_AS(vb_flow(VBProblem(joint, 0),
                            ExpModel(q2, orthonormal_suffstats(q2, 2), {0.0, 0.0}), 0.0, 10),
                    Error);
}
