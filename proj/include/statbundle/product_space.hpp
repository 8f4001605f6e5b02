#ifndef STATBUNDLE_PRODUCT_SPACE_HPP
#define STATBUNDLE_PRODUCT_SPACE_HPP

#include <cstddef>
#include <vector>

#include "statbundle/flows.hpp"
#include "statbundle/types.hpp"

// Factorial sample spaces: margins and conditional expectations, the
// mean-field approximation with its KL gradients, the ANOVA split of a
// random variable into simple effects and interaction, and the
// Kantorovich/Schroedinger machinery on transport plans.

namespace statbundle {

// Strictly positive joint probability on a product space, stored row-major
// (index (x, y) -> x * cols + y) and normalized like Prob. Margins are
// computed once at construction.
class JointProb {
public:
    JointProb(SampleSpace space1, SampleSpace space2, std::vector<double> weights);

    const SampleSpace& space1() const { return space1_; }
    const SampleSpace& space2() const { return space2_; }
    std::size_t rows() const { return space1_.size(); }
    std::size_t cols() const { return space2_.size(); }

    double operator()(std::size_t x, std::size_t y) const { return flat_[x * cols() + y]; }
    // The joint seen as a point of the simplex on the flattened space.
    const Prob& as_prob() const { return flat_; }

    const Prob& margin1() const { return margin1_; }
    const Prob& margin2() const { return margin2_; }

private:
    SampleSpace space1_;
    SampleSpace space2_;
    Prob flat_;
    Prob margin1_;
    Prob margin2_;
};

// The flattened sample space shared by all joints over (space1, space2).
SampleSpace product_space(const SampleSpace& space1, const SampleSpace& space2);

// q1 (x) q2 as a joint.
JointProb outer(const Prob& q1, const Prob& q2);

// Reads flat weights back as a joint on the given factor spaces.
JointProb joint_from_weights(const SampleSpace& space1, const SampleSpace& space2,
                             const std::vector<double>& weights);

// Lifts a margin variable to the product space as a function of the
// respective coordinate.
Rv lift(const JointProb& r, const Rv& u, int axis);

Prob marginal(const JointProb& r, int axis);

// E_r[v | Pi_axis], a random variable on the conditioning margin.
Rv condexp(const JointProb& r, const Rv& v, int axis);

// Derivative of the marginalization: the conditional expectation of the
// velocity, in the fiber at the margin.
Fiber d_marginalization(const JointProb& r, const Fiber& rdot, int axis = 1);

// Mean-field approximation r1 (x) r2.
JointProb mean_field(const JointProb& r);

// Derivative of r -> r1 (x) r2: E_r[rdot|Pi_1] + E_r[rdot|Pi_2], in the
// fiber at the product.
Fiber d_mean_field(const JointProb& r, const Fiber& rdot);

// u = mean + effect1(Pi_1) + effect2(Pi_2) + interaction, with the effects
// the L2(base) projection onto margin-measurable directions and the
// interaction the base-orthogonal residual.
struct AnovaParts {
    double mean;
    Rv effect1;
    Rv effect2;
    Rv interaction;
    JointProb base;
};

AnovaParts anova(const JointProb& q, const Rv& u);

// Grad of r -> KL(Pi(r) || r).
Fiber grad_kl_meanfield_fwd(const JointProb& r);

// Grad of r -> KL(r || Pi(r)), the mutual information.
Fiber grad_kl_meanfield_rev(const JointProb& r);

// Derivative of the transport cost q -> E_q[U] restricted to plan
// velocities: the interaction component of U.
Fiber kantorovich_grad(const JointProb& q, const Rv& cost);

// Entropic transport objective data: cost U, temperature eps, the fixed
// margins, and the log normalizer psi(eps) = log E_{q1 (x) q2}[e^{-U/eps}]
// of the tilted reference e^{-U/eps - psi} (q1 (x) q2).
class SchrodingerProblem {
public:
    SchrodingerProblem(Rv cost, double epsilon, Prob margin1, Prob margin2);

    const Rv& cost() const { return cost_; }
    double epsilon() const { return epsilon_; }
    const Prob& margin1() const { return margin1_; }
    const Prob& margin2() const { return margin2_; }
    double log_normalizer() const { return log_normalizer_; }
    // The tilted reference as a simplex point on the product space.
    const Prob& tilted_reference() const { return tilted_; }

private:
    Rv cost_;
    double epsilon_;
    Prob margin1_;
    Prob margin2_;
    double log_normalizer_;
    Prob tilted_;
};

// S_eps(q) = KL(q || tilted reference), by direct summation.
double schrodinger_objective(const SchrodingerProblem& prob, const JointProb& q);

// Grad S_eps(q) = (U - E_q U)/eps - s_q(q1 (x) q2), centered at q.
Fiber schrodinger_grad(const SchrodingerProblem& prob, const JointProb& q);

// Gradient flow restricted to the transport plans Gamma(q1, q2): each step
// moves along minus the interaction part of Grad S_eps and is pulled back
// onto the margin polytope by iterative proportional fitting. q0 must
// already match the problem margins within 1e-10.
Trajectory constrained_schrodinger_flow(const SchrodingerProblem& prob, const JointProb& q0,
                                        double dt, int steps);

// KL-projection onto Gamma(margin1, margin2) by alternate row/column
// scaling until the margin sup-error is at most tol. Throws
// ConvergenceFailure after 1e5 sweeps.
JointProb ipf_project(const JointProb& q, const Prob& margin1, const Prob& margin2,
                      double tol = 1e-12);

}  // namespace statbundle

#endif
