#include "statbundle/random.hpp"

#include "statbundle/simplex_core.hpp"

namespace statbundle {

Prob random_prob(const SampleSpace& space, SplitMix64& gen, double uniform_mix) {
    const std::size_t n = space.size();
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = gen.next_exp();
        total += x;
    }
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (1.0 - uniform_mix) * w[i] / total + uniform_mix / static_cast<double>(n);
    }
    return Prob(space, std::move(w));
}

Rv random_rv(const SampleSpace& space, SplitMix64& gen, double scale) {
    std::vector<double> v(space.size());
    for (double& x : v) x = scale * gen.next_gauss();
    return Rv(space, std::move(v));
}

Fiber random_fiber(const Prob& base, SplitMix64& gen, double scale) {
    return center(base, random_rv(base.space(), gen, scale));
}

JointProb random_joint(const SampleSpace& space1, const SampleSpace& space2, SplitMix64& gen,
                       double uniform_mix) {
    const Prob flat = random_prob(product_space(space1, space2), gen, uniform_mix);
    return JointProb(space1, space2, flat.weights());
}

}  // namespace statbundle
