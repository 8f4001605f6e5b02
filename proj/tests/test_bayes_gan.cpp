#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "statbundle/bayes_gan.hpp"
#include "statbundle/simplex_core.hpp"
#include "test_support.hpp"

using namespace statbundle;
using testsup::sup_abs;
using testsup::sup_diff;

namespace {

CondTangent random_tangent(const CondDecomp& d, SplitMix64& gen, double scale = 1.0) {
    CondTangent t{random_fiber(d.margin(), gen, scale), {}};
    t.kernel_dot.reserve(d.kernel().size());
    for (const Prob& row : d.kernel()) t.kernel_dot.push_back(random_fiber(row, gen, scale));
    return t;
}

// Decomposition moved along exponential curves in every slot.
CondDecomp moved(const CondDecomp& d, const CondTangent& t, double s) {
    Prob margin = exp_chart_inv(d.margin(), t.margin_dot * s);
    std::vector<Prob> rows;
    rows.reserve(d.kernel().size());
    for (std::size_t x = 0; x < d.kernel().size(); ++x) {
        rows.push_back(exp_chart_inv(d.row(x), t.kernel_dot[x] * s));
    }
    return CondDecomp(std::move(margin), std::move(rows), d.axis());
}

// The mixture-atlas expression of dB, pushed back to the bundle: the
// second derivation of the same derivative, kept here purely as an
// oracle.
Fiber dB_mixture_route(const CondDecomp& d, const CondTangent& t) {
    const JointProb q = compose(d);
    const Prob p1 = uniform(d.margin().space());
    const Prob p2 = uniform(d.kernel().front().space());
    const std::size_t n1 = d.margin().size();
    const std::size_t n2 = p2.size();

    std::vector<double> v(n1 * n2);
    for (std::size_t x = 0; x < n1; ++x) {
        const double h1 = d.margin()[x] / p1[x] * t.margin_dot[x];
        for (std::size_t y = 0; y < n2; ++y) {
            const double row_ratio = d.row(x)[y] / p2[y];
            const double h2 = row_ratio * t.kernel_dot[x][y];
            const double chart = row_ratio * h1 + (d.margin()[x] / p1[x]) * h2;
            const std::size_t flat = d.axis() == 1 ? x * n2 + y : y * n1 + x;
            v[flat] = p1[x] * p2[y] / q.as_prob()[flat] * chart;
        }
    }
    return center(q.as_prob(), Rv(q.as_prob().space(), std::move(v)));
}

}  // namespace

TEST_CASE("decompose and compose") {
    const SampleSpace s2(2);
    const JointProb j(s2, s2, {0.1, 0.2, 0.3, 0.4});
    const CondDecomp d = decompose(j, 1);
    CHECK(d.margin()[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(d.margin()[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(d.row(0)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(d.row(0)[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(d.row(1)[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
    CHECK(d.row(1)[1] == doctest::Approx(4.0 / 7.0).epsilon(1e-14));

    SplitMix64 gen(81);
    for (int axis : {1, 2}) {
        const JointProb r = random_joint(SampleSpace(3), SampleSpace(4), gen);
        const CondDecomp dec = decompose(r, axis);
        CHECK(sup_diff(compose(dec).as_prob().weights(), r.as_prob().weights()) <= 1e-12);
    }

    // Product joints condition to constant kernel rows.
    const Prob q1 = random_prob(SampleSpace(3), gen);
    const Prob q2 = random_prob(SampleSpace(5), gen);
    const CondDecomp dp = decompose(outer(q1, q2), 1);
    for (std::size_t x = 0; x < 3; ++x) CHECK(sup_diff(dp.row(x).weights(), q2.weights()) <= 1e-13);
}

TEST_CASE("dB vanishes on the zero tangent and is centered") {
    SplitMix64 gen(82);
    const JointProb r = random_joint(SampleSpace(3), SampleSpace(3), gen);
    const CondDecomp d = decompose(r, 1);

    CondTangent zero{Fiber(d.margin(), std::vector<double>(3, 0.0)), {}};
    for (const Prob& row : d.kernel()) {
        zero.kernel_dot.emplace_back(row, std::vector<double>(3, 0.0));
    }
    CHECK(sup_abs(dB(d, zero).values()) <= 1e-15);

    const CondTangent t = random_tangent(d, gen);
    const Fiber v = dB(d, t);
    CHECK(std::fabs(expect(v.base(), v.as_rv())) <= 1e-14 * (1.0 + sup_abs(v.values())));
}

TEST_CASE("dB matches finite differences along decomposition curves") {
    SplitMix64 gen(83);
    for (int axis : {1, 2}) {
        const JointProb r = random_joint(SampleSpace(3), SampleSpace(4), gen);
        const CondDecomp d = decompose(r, axis);
        const CondTangent t = random_tangent(d, gen, 0.6);

        const double h = 1e-5;
        const JointProb jp = compose(moved(d, t, h));
        const JointProb jm = compose(moved(d, t, -h));
        std::vector<double> fd(jp.as_prob().size());
        for (std::size_t i = 0; i < fd.size(); ++i) {
            fd[i] = (std::log(jp.as_prob()[i]) - std::log(jm.as_prob()[i])) / (2.0 * h);
        }
        const JointProb j0 = compose(d);
        const Fiber lhs = center(j0.as_prob(), Rv(j0.as_prob().space(), fd));
        CHECK(sup_diff(lhs.values(), dB(d, t).values()) <= 1e-6);
    }
}

TEST_CASE("dB transpose is the adjoint") {
    SplitMix64 gen(84);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n1 = 2 + trial % 4;
        const std::size_t n2 = 2 + (trial / 4) % 4;
        const JointProb r = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const CondDecomp d = decompose(r, 1);
        const CondTangent t = random_tangent(d, gen);
        const Fiber v = random_fiber(r.as_prob(), gen);

        const double lhs = fiber_dot(v, dB(d, t));
        const double rhs = cond_tangent_dot(dB_transpose(d, v), t);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(lhs)));
    }
}

TEST_CASE("dB transpose is the adjoint when conditioning on the second axis") {
    SplitMix64 gen(841);
    for (int trial = 0; trial < 20; ++trial) {
        const JointProb r = random_joint(SampleSpace(3), SampleSpace(4), gen);
        const CondDecomp d = decompose(r, 2);
        const CondTangent t = random_tangent(d, gen);
        const Fiber v = random_fiber(r.as_prob(), gen);
        const double lhs = fiber_dot(v, dB(d, t));
        const double rhs = cond_tangent_dot(dB_transpose(d, v), t);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(lhs)));
    }
}

TEST_CASE("dB transpose kills margin-measurable directions in the kernel slot") {
    SplitMix64 gen(85);
    const JointProb r = random_joint(SampleSpace(4), SampleSpace(3), gen);
    const CondDecomp d = decompose(r, 1);

    const Fiber zero = Fiber(r.as_prob(), std::vector<double>(12, 0.0));
    const CondTangent t0 = dB_transpose(d, zero);
    CHECK(sup_abs(t0.margin_dot.values()) <= 1e-15);
    for (const Fiber& k : t0.kernel_dot) CHECK(sup_abs(k.values()) <= 1e-15);

    // v = f(Pi_1), centered at the joint.
    const Rv f = random_rv(SampleSpace(4), gen);
    const Fiber v = center(r.as_prob(), lift(r, f, 1));
    const CondTangent t = dB_transpose(d, v);
    for (const Fiber& k : t.kernel_dot) CHECK(sup_abs(k.values()) <= 1e-13);
}

TEST_CASE("dB agrees with the mixture-atlas route") {
    SplitMix64 gen(86);
    for (int axis : {1, 2}) {
        const JointProb r = random_joint(SampleSpace(3), SampleSpace(3), gen);
        const CondDecomp d = decompose(r, axis);
        const CondTangent t = random_tangent(d, gen);
        CHECK(sup_diff(dB(d, t).values(), dB_mixture_route(d, t).values()) <= 1e-12);
    }
}

TEST_CASE("gan gradient closed forms") {
    SplitMix64 gen(87);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n1 = 2 + trial % 4;
        const std::size_t n2 = 2 + (trial / 4) % 4;
        const JointProb p = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const JointProb qj = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const CondDecomp d = decompose(qj, 1);

        const CondTangent g = gan_grad(p, d);

        // Composition route: dB* applied to -eta_{B(d)}(p).
        const Fiber grad_at_joint = -mix_chart(compose(d).as_prob(), p.as_prob());
        const CondTangent viaB = dB_transpose(d, grad_at_joint);
        CHECK(sup_diff(g.margin_dot.values(), viaB.margin_dot.values()) <= 1e-12);
        for (std::size_t x = 0; x < n1; ++x) {
            CHECK(sup_diff(g.kernel_dot[x].values(), viaB.kernel_dot[x].values()) <= 1e-12);
        }
    }
}

TEST_CASE("gan gradient vanishes at the target") {
    SplitMix64 gen(88);
    const JointProb p = random_joint(SampleSpace(3), SampleSpace(4), gen);
    const CondTangent g = gan_grad(p, decompose(p, 1));
    CHECK(sup_abs(g.margin_dot.values()) <= 1e-13);
    for (const Fiber& k : g.kernel_dot) CHECK(sup_abs(k.values()) <= 1e-13);
}

TEST_CASE("uniform discriminator specialization") {
    SplitMix64 gen(89);
    const SampleSpace s1(4);
    const SampleSpace s2(3);
    const Prob g = random_prob(s1, gen);
    const JointProb p = outer(g, uniform(s2));
    const JointProb qj = random_joint(s1, s2, gen);
    const CondDecomp d = decompose(qj, 1);

    const CondTangent grad = gan_grad(p, d);
    CHECK(sup_diff(grad.margin_dot.values(), (-mix_chart(d.margin(), g)).values()) <= 1e-13);
    for (std::size_t x = 0; x < 4; ++x) {
        // -p1(x) eta_{row x}(uniform), with p1 = g.
        const Fiber expected = mix_chart(d.row(x), uniform(s2)) * -g[x];
        CHECK(sup_diff(grad.kernel_dot[x].values(), expected.values()) <= 1e-13);
    }
}

TEST_CASE("one descent step does not increase the divergence") {
    SplitMix64 gen(90);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n1 = 2 + trial % 3;
        const std::size_t n2 = 2 + (trial / 3) % 3;
        const JointProb p = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const JointProb qj = random_joint(SampleSpace(n1), SampleSpace(n2), gen);
        const CondDecomp d = decompose(qj, 1);

        const CondTangent g = scale(gan_grad(p, d), -1e-3);
        const CondDecomp stepped = moved(d, g, 1.0);
        const double before = kl(p.as_prob(), compose(d).as_prob());
        const double after = kl(p.as_prob(), compose(stepped).as_prob());
        CHECK(after <= before + 1e-15);
    }
}
