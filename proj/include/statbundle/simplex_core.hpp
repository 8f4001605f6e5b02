#ifndef STATBUNDLE_SIMPLEX_CORE_HPP
#define STATBUNDLE_SIMPLEX_CORE_HPP

#include "statbundle/types.hpp"

// Dually affine calculus on the open simplex: the covariance pairing, the
// exponential and mixture charts with their inverses, the two parallel
// transports, the cumulant functional with first and second derivatives,
// and the divergence zoo (KL, entropy, cross entropy, Jensen-Shannon).

namespace statbundle {

double expect(const Prob& p, const Rv& u);

// Covariance pairing Cov_p(u, w) = E_p[uw] - E_p[u] E_p[w].
double cov(const Prob& p, const Rv& u, const Rv& w);

// Projects u onto the fiber at p: u - E_p[u].
Fiber center(const Prob& p, const Rv& u);

// Exponential chart s_p(q) = log(q/p) - E_p[log(q/p)].
Fiber exp_chart(const Prob& p, const Prob& q);

// Inverse chart e_p(v) = e^{v - K_p(v)} p, evaluated with a max shift and
// an explicit normalization so the result is an exact simplex point.
Prob exp_chart_inv(const Prob& p, const Fiber& v);

// Mixture chart eta_p(q) = q/p - 1.
Fiber mix_chart(const Prob& p, const Prob& q);

// Inverse mixture chart (1 + w) p. Throws NonPositive when any factor
// 1 + w(x) <= 1e-15.
Prob mix_chart_inv(const Prob& p, const Fiber& w);

// kappa_p(v) = log E_p[e^v]. K_p is its restriction to the fiber at p;
// the same evaluation serves both, so v is any random variable here.
double cumulant(const Prob& p, const Rv& v);

// dK_p(v)[h] = E_{e_p(v)}[h].
double cumulant_d1(const Prob& p, const Fiber& v, const Rv& h);

// d2K_p(v)[h,k] = Cov_{e_p(v)}(h, k).
double cumulant_d2(const Prob& p, const Fiber& v, const Rv& h, const Rv& k);

// Exponential transport of v from the fiber at q to the fiber at r:
// v - E_r[v].
Fiber e_transport(const Prob& q, const Prob& r, const Fiber& v);

// Mixture transport, (q/r) v; dual to the exponential transport.
Fiber m_transport(const Prob& q, const Prob& r, const Fiber& w);

double kl(const Prob& q, const Prob& r);
double entropy(const Prob& q);
double cross_entropy(const Prob& q, const Prob& r);
// Jensen-Shannon divergence through the half-mixture form.
double js(const Prob& q, const Prob& r);

// Fiber pairing <v,w>_q = E_q[vw] (means vanish on the fiber).
double fiber_dot(const Fiber& v, const Fiber& w);
double fiber_norm(const Fiber& v);
double sup_norm(const Fiber& v);

Prob uniform(const SampleSpace& space);
// Convex combination a q + (1-a) r, a in (0,1) kept open for positivity.
Prob mix_probs(double a, const Prob& q, const Prob& r);

}  // namespace statbundle

#endif
