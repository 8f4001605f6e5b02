#ifndef STATBUNDLE_GRADIENTS_HPP
#define STATBUNDLE_GRADIENTS_HPP

#include <functional>

#include "statbundle/simplex_core.hpp"
#include "statbundle/types.hpp"

// Natural gradients of the scalar fields on the simplex, and the
// finite-difference natural-gradient probe every analytic gradient is
// tested against.

namespace statbundle {

using ScalarField = std::function<double(const Prob&)>;

// Total natural gradient of a two-argument functional: one fiber vector
// per slot, each based at its own point.
struct GradPair {
    Fiber first;
    Fiber second;
};

// Grad E_q[u] = u - E_q[u].
Fiber grad_expect(const Prob& q, const Rv& u);

// Grad KL(q||r) = (-s_q(r), -eta_r(q)).
GradPair grad_kl_total(const Prob& q, const Prob& r);

// Grad H(q,r) = (-log r - H(q,r), -eta_r(q)).
GradPair grad_cross_entropy_total(const Prob& q, const Prob& r);

// Grad H(q) = -log q - H(q).
Fiber grad_entropy(const Prob& q);

// Grad of q -> JS(q,r): -s_q((q+r)/2) / 2.
Fiber grad_js(const Prob& q, const Prob& r);

// Grad of p -> (KL(q||p) + KL(r||p)) / 2: -(eta_p(q) + eta_p(r)) / 2,
// stationary at the midpoint.
Fiber grad_phi_mixture_center(const Prob& p, const Prob& q, const Prob& r);

// Central-difference natural gradient of an arbitrary scalar field.
// Probes along the exponential-family curves e_q(t b_k) through the basis
// b_k = 1{x_k} - q(x_k) of the fiber at q, then solves the Gram system to
// express the differential in the covariance pairing. eps in (0, 1e-2].
// Throws IllConditioned when the Gram condition number exceeds 1e12.
Fiber fd_natural_grad(const ScalarField& phi, const Prob& q, double eps = 1e-4);

}  // namespace statbundle

#endif
