#include "statbundle/gradients.hpp"

#include <cmath>

#include "statbundle/kernels.hpp"
#include "statbundle/linalg.hpp"

namespace statbundle {

Fiber grad_expect(const Prob& q, const Rv& u) { return center(q, u); }

GradPair grad_kl_total(const Prob& q, const Prob& r) {
    return GradPair{-exp_chart(q, r), -mix_chart(r, q)};
}

GradPair grad_cross_entropy_total(const Prob& q, const Prob& r) {
    require_same_space(q.space(), r.space());
    std::vector<double> neglog(r.size());
    kernels::map(neglog.data(), r.weights().data(), r.size(),
                 [](double ri) { return -std::log(ri); });
    // Centering -log r at q subtracts E_q[-log r] = H(q,r). The second
    // slot matches Grad_2 of the KL total gradient, as it must with
    // KL(q||r) = H(q,r) - H(q) and H(q) free of r.
    return GradPair{center(q, Rv(q.space(), std::move(neglog))), -mix_chart(r, q)};
}

Fiber grad_entropy(const Prob& q) {
    std::vector<double> neglog(q.size());
    kernels::map(neglog.data(), q.weights().data(), q.size(),
                 [](double qi) { return -std::log(qi); });
    return center(q, Rv(q.space(), std::move(neglog)));
}

Fiber grad_js(const Prob& q, const Prob& r) {
    return exp_chart(q, mix_probs(0.5, q, r)) * -0.5;
}

Fiber grad_phi_mixture_center(const Prob& p, const Prob& q, const Prob& r) {
    return (mix_chart(p, q) + mix_chart(p, r)) * -0.5;
}

Fiber fd_natural_grad(const ScalarField& phi, const Prob& q, double eps) {
    if (!(eps > 0.0 && eps <= 1e-2)) throw Error("fd step must lie in (0, 1e-2]");
    const std::size_t n = q.size();
    const std::size_t m = n - 1;

    // b_k = 1{x_k} - q(x_k) spans the fiber at q; e_q(+-eps b_k) are the
    // probe points of the central difference.
    auto basis_values = [&](std::size_t k, double scale) {
        std::vector<double> b(n, -q[k] * scale);
        b[k] += scale;
        return b;
    };

    std::vector<double> d(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Prob fwd = exp_chart_inv(q, Fiber(q, basis_values(k, eps)));
        const Prob bwd = exp_chart_inv(q, Fiber(q, basis_values(k, -eps)));
        d[k] = (phi(fwd) - phi(bwd)) / (2.0 * eps);
    }

    // Gram matrix <b_j, b_k>_q = q_j delta_jk - q_j q_k.
    std::vector<double> gram(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            gram[j * m + k] = (j == k ? q[j] : 0.0) - q[j] * q[k];
        }
    }
    if (linalg::cond_inf(gram, m) > 1e12)
        throw IllConditioned("fd gradient Gram system is too ill-conditioned");
    const std::vector<double> coef = linalg::solve(std::move(gram), std::move(d), m);

    // sum_k c_k b_k, which is q-centered by construction of the basis.
    const double offset = kernels::dot(coef.data(), q.weights().data(), m);
    std::vector<double> g(n, -offset);
    for (std::size_t k = 0; k < m; ++k) g[k] += coef[k];
    return center(q, Rv(q.space(), std::move(g)));
}

}  // namespace statbundle
