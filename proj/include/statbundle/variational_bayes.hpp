#ifndef STATBUNDLE_VARIATIONAL_BAYES_HPP
#define STATBUNDLE_VARIATIONAL_BAYES_HPP

#include <vector>

#include "statbundle/flows.hpp"
#include "statbundle/product_space.hpp"
#include "statbundle/types.hpp"

// Lower-bound machinery for approximating a conditional q(.|x) by an
// exponential tilt of the latent margin, and the gradient flow in the
// tilt parameter.

namespace statbundle {

// Exponential family e^{theta.u - psi(theta)} q2 with sufficient
// statistics re-centered under q2 at construction. The Gram matrix
// Cov_{q2}(u_i, u_j) must be nonsingular (condition below 1e12).
class ExpModel {
public:
    ExpModel(Prob base, std::vector<Rv> suffstats, std::vector<double> theta);

    const Prob& base() const { return base_; }
    const std::vector<Rv>& suffstats() const { return suffstats_; }
    const std::vector<double>& theta() const { return theta_; }
    std::size_t dim() const { return suffstats_.size(); }

    ExpModel with_theta(std::vector<double> theta) const;

    // theta.u as a random variable on the base space.
    Rv tilt() const;

private:
    Prob base_;
    std::vector<Rv> suffstats_;
    std::vector<double> theta_;
};

Prob model_prob(const ExpModel& m);
// psi(theta) = log E_{q2}[e^{theta.u}].
double psi(const ExpModel& m);
// Hessian of psi: Cov_{r_theta}(u_i, u_j), d x d row-major.
std::vector<double> hess_psi(const ExpModel& m);

// Joint law over (observed, latent) plus the observed atom.
struct VBProblem {
    JointProb joint;
    std::size_t observation;

    VBProblem(JointProb j, std::size_t x);
};

// L(r, x) = -KL(r || q2) + E_r[log q_{1|2}(x|.)], so that
// log q1(x) = KL(r || q_{2|1}(.|x)) + L(r, x).
double elbo(const VBProblem& p, const Prob& r);

// Grad of r -> L(r, x): log(q12(x,.)/r) centered at r.
Fiber elbo_natural_grad(const VBProblem& p, const Prob& r);

// Right-hand side of the parameter flow maximizing the bound:
// theta' = -Hess psi(theta) theta + Cov_{r_theta}(u, log q_{1|2}(x|.)).
std::vector<double> vb_theta_rhs(const VBProblem& p, const ExpModel& m);

// Classical RK4 on vb_theta_rhs with fixed step. Diagnostics record the
// bound and the sup norm of the right-hand side; throws on parameter
// blow-up past 1e6.
Trajectory vb_flow(const VBProblem& p, const ExpModel& m0, double dt, int steps);

// Orthonormal basis of the fiber at q2 built from indicator contrasts,
// truncated to the first d directions. With d = n2 - 1 the family spans
// every positive law on the latent space.
std::vector<Rv> orthonormal_suffstats(const Prob& q2, std::size_t d);

// Chart coordinates of a model point: solves the Gram system
// <u_i, u_j>_{q2} theta_j = <u_i, s_{q2}(target)>_{q2}. Recovers the tilt
// exactly when the target lies in the family.
std::vector<double> fit_theta(const Prob& q2, const std::vector<Rv>& suffstats,
                              const Prob& target);

}  // namespace statbundle

#endif
