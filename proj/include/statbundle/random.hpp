#ifndef STATBUNDLE_RANDOM_HPP
#define STATBUNDLE_RANDOM_HPP

#include "statbundle/product_space.hpp"
#include "statbundle/rng.hpp"
#include "statbundle/types.hpp"

// Seeded instance generators shared by the test suites and the gradcheck
// runner. A uniform_mix floor keeps instances away from the simplex
// boundary so finite-difference Gram systems stay well conditioned.

namespace statbundle {

// Dirichlet(1,...,1) draw blended with the uniform law:
// (1 - uniform_mix) dirichlet + uniform_mix / n.
Prob random_prob(const SampleSpace& space, SplitMix64& gen, double uniform_mix = 0.1);

// Independent standard normals scaled by `scale`.
Rv random_rv(const SampleSpace& space, SplitMix64& gen, double scale = 1.0);

Fiber random_fiber(const Prob& base, SplitMix64& gen, double scale = 1.0);

JointProb random_joint(const SampleSpace& space1, const SampleSpace& space2, SplitMix64& gen,
                       double uniform_mix = 0.1);

}  // namespace statbundle

#endif
