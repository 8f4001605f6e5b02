#ifndef STATBUNDLE_BAYES_GAN_HPP
#define STATBUNDLE_BAYES_GAN_HPP

#include <vector>

#include "statbundle/product_space.hpp"
#include "statbundle/types.hpp"

// Conditional representation of a joint law: the margin over one axis and
// one simplex point per conditioning atom. The composition map B sends the
// pair back to the joint; dB and its transpose move velocities across, and
// the GAN gradients are the closed forms of dB* applied to the KL
// gradient at the joint.

namespace statbundle {

class CondDecomp {
public:
    // axis 1: margin on the first factor, kernel rows on the second.
    CondDecomp(Prob margin, std::vector<Prob> kernel, int axis = 1);

    int axis() const { return axis_; }
    const Prob& margin() const { return margin_; }
    const std::vector<Prob>& kernel() const { return kernel_; }
    const Prob& row(std::size_t x) const { return kernel_[x]; }

private:
    Prob margin_;
    std::vector<Prob> kernel_;
    int axis_;
};

// Tangent of a decomposition: a fiber vector at the margin plus one fiber
// vector per kernel row.
struct CondTangent {
    Fiber margin_dot;
    std::vector<Fiber> kernel_dot;
};

CondDecomp decompose(const JointProb& q, int axis = 1);
JointProb compose(const CondDecomp& d);

// Total derivative of B: (x, y) -> margin_dot(x) + kernel_dot[x](y), in
// the fiber at compose(d).
Fiber dB(const CondDecomp& d, const CondTangent& t);

// Transposed total derivative: margin slot E_q[v|Pi_axis], kernel slot
// q1(x) (v(x,.) - E_{row x}[v(x,.)]); adjoint to dB under the fiber
// pairings.
CondTangent dB_transpose(const CondDecomp& d, const Fiber& v);

// Grad of (q1, kernel) -> KL(p || B(q1, kernel)): margin slot
// -eta_{q1}(p1), kernel slot x -> -p1(x) eta_{row x}(p(.|x)).
CondTangent gan_grad(const JointProb& p, const CondDecomp& d);

// Pairing of two tangents at the same decomposition: the margin pairing
// plus the per-row pairings.
double cond_tangent_dot(const CondTangent& a, const CondTangent& b);

CondTangent scale(const CondTangent& t, double c);

}  // namespace statbundle

#endif
