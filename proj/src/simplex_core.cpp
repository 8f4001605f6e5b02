#include "statbundle/simplex_core.hpp"

#include <cmath>

#include "statbundle/kernels.hpp"

namespace statbundle {

double expect(const Prob& p, const Rv& u) {
    require_same_space(p.space(), u.space());
    return kernels::dot(p.weights(), u.values());
}

double cov(const Prob& p, const Rv& u, const Rv& w) {
    require_same_space(p.space(), u.space());
    require_same_space(p.space(), w.space());
    const double euw = kernels::dot3(p.weights(), u.values(), w.values());
    const double eu = kernels::dot(p.weights(), u.values());
    const double ew = kernels::dot(p.weights(), w.values());
    return euw - eu * ew;
}

Fiber center(const Prob& p, const Rv& u) {
    require_same_space(p.space(), u.space());
    const double mean = kernels::dot(p.weights(), u.values());
    std::vector<double> out(u.size());
    kernels::map(out.data(), u.values().data(), u.size(), [mean](double x) { return x - mean; });
    return Fiber(p, std::move(out));
}

Fiber exp_chart(const Prob& p, const Prob& q) {
    require_same_space(p.space(), q.space());
    std::vector<double> logratio(p.size());
    kernels::map2(logratio.data(), q.weights().data(), p.weights().data(), p.size(),
                  [](double qi, double pi) { return std::log(qi / pi); });
    return center(p, Rv(p.space(), std::move(logratio)));
}

Prob exp_chart_inv(const Prob& p, const Fiber& v) {
    require_same_base(v, p);
    const double shift = kernels::max(v.values());
    std::vector<double> w(p.size());
    kernels::map2(w.data(), p.weights().data(), v.values().data(), p.size(),
                  [shift](double pi, double vi) { return pi * std::exp(vi - shift); });
    const double total = kernels::sum(w);
    for (double& x : w) x /= total;
    return Prob(p.space(), std::move(w));
}

Fiber mix_chart(const Prob& p, const Prob& q) {
    require_same_space(p.space(), q.space());
    std::vector<double> out(p.size());
    kernels::map2(out.data(), q.weights().data(), p.weights().data(), p.size(),
                  [](double qi, double pi) { return qi / pi - 1.0; });
    return Fiber(p, std::move(out));
}

Prob mix_chart_inv(const Prob& p, const Fiber& w) {
    require_same_base(w, p);
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double factor = 1.0 + w[i];
        if (factor <= 1e-15) throw NonPositive("mixture chart inverse leaves the open simplex");
        out[i] = factor * p[i];
    }
    return Prob(p.space(), std::move(out));
}

double cumulant(const Prob& p, const Rv& v) {
    require_same_space(p.space(), v.space());
    const double shift = kernels::max(v.values());
    return std::log(kernels::sum_scaled_exp(p.weights().data(), v.values().data(), shift,
                                            p.size())) +
           shift;
}

double cumulant_d1(const Prob& p, const Fiber& v, const Rv& h) {
    return expect(exp_chart_inv(p, v), h);
}

double cumulant_d2(const Prob& p, const Fiber& v, const Rv& h, const Rv& k) {
    return cov(exp_chart_inv(p, v), h, k);
}

Fiber e_transport(const Prob& q, const Prob& r, const Fiber& v) {
    require_same_base(v, q);
    require_same_space(q.space(), r.space());
    return center(r, v.as_rv());
}

Fiber m_transport(const Prob& q, const Prob& r, const Fiber& w) {
    require_same_base(w, q);
    require_same_space(q.space(), r.space());
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = q[i] / r[i] * w[i];
    return Fiber(r, std::move(out));
}

double kl(const Prob& q, const Prob& r) {
    require_same_space(q.space(), r.space());
    std::vector<double> logratio(q.size());
    kernels::map2(logratio.data(), q.weights().data(), r.weights().data(), q.size(),
                  [](double qi, double ri) { return std::log(qi / ri); });
    return kernels::dot(q.weights(), logratio);
}

double entropy(const Prob& q) {
    std::vector<double> neglog(q.size());
    kernels::map(neglog.data(), q.weights().data(), q.size(),
                 [](double qi) { return -std::log(qi); });
    return kernels::dot(q.weights(), neglog);
}

double cross_entropy(const Prob& q, const Prob& r) {
    require_same_space(q.space(), r.space());
    std::vector<double> neglog(q.size());
    kernels::map(neglog.data(), r.weights().data(), q.size(),
                 [](double ri) { return -std::log(ri); });
    return kernels::dot(q.weights(), neglog);
}

double js(const Prob& q, const Prob& r) {
    const Prob mid = mix_probs(0.5, q, r);
    return 0.5 * kl(q, mid) + 0.5 * kl(r, mid);
}

double fiber_dot(const Fiber& v, const Fiber& w) {
    require_same_base(v, w);
    return kernels::dot3(v.base().weights(), v.values(), w.values());
}

double fiber_norm(const Fiber& v) { return std::sqrt(fiber_dot(v, v)); }

double sup_norm(const Fiber& v) { return max_abs(v.values()); }

Prob uniform(const SampleSpace& space) {
    return Prob(space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
}

Prob mix_probs(double a, const Prob& q, const Prob& r) {
    require_same_space(q.space(), r.space());
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = a * q[i] + (1.0 - a) * r[i];
    return Prob(q.space(), std::move(out));
}

}  // namespace statbundle
