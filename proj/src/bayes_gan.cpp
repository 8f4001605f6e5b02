#include "statbundle/bayes_gan.hpp"

#include "statbundle/simplex_core.hpp"

namespace statbundle {

CondDecomp::CondDecomp(Prob margin, std::vector<Prob> kernel, int axis)
    : margin_(std::move(margin)), kernel_(std::move(kernel)), axis_(axis) {
    if (axis_ != 1 && axis_ != 2) throw Error("axis must be 1 or 2");
    if (kernel_.size() != margin_.size())
        throw SpaceMismatch("need one kernel row per margin atom");
    for (const Prob& row : kernel_) require_same_space(row.space(), kernel_.front().space());
}

CondDecomp decompose(const JointProb& q, int axis) {
    if (axis != 1 && axis != 2) throw Error("axis must be 1 or 2");
    const Prob margin = marginal(q, axis);
    const std::size_t outer_n = margin.size();
    const std::size_t inner_n = axis == 1 ? q.cols() : q.rows();
    const SampleSpace& inner_space = axis == 1 ? q.space2() : q.space1();

    std::vector<Prob> kernel;
    kernel.reserve(outer_n);
    for (std::size_t x = 0; x < outer_n; ++x) {
        std::vector<double> row(inner_n);
        for (std::size_t y = 0; y < inner_n; ++y) {
            row[y] = (axis == 1 ? q(x, y) : q(y, x)) / margin[x];
        }
        kernel.emplace_back(inner_space, std::move(row));
    }
    return CondDecomp(std::move(margin), std::move(kernel), axis);
}

JointProb compose(const CondDecomp& d) {
    const std::size_t outer_n = d.margin().size();
    const std::size_t inner_n = d.kernel().front().size();
    const bool first = d.axis() == 1;
    const std::size_t rows = first ? outer_n : inner_n;
    const std::size_t cols = first ? inner_n : outer_n;
    std::vector<double> w(rows * cols);
    for (std::size_t x = 0; x < outer_n; ++x) {
        for (std::size_t y = 0; y < inner_n; ++y) {
            const double v = d.margin()[x] * d.row(x)[y];
            w[first ? x * cols + y : y * cols + x] = v;
        }
    }
    const SampleSpace& s1 = first ? d.margin().space() : d.kernel().front().space();
    const SampleSpace& s2 = first ? d.kernel().front().space() : d.margin().space();
    return JointProb(s1, s2, std::move(w));
}

Fiber dB(const CondDecomp& d, const CondTangent& t) {
    require_same_base(t.margin_dot, d.margin());
    if (t.kernel_dot.size() != d.kernel().size())
        throw SpaceMismatch("tangent and decomposition kernel sizes differ");
    const JointProb q = compose(d);
    const std::size_t outer_n = d.margin().size();
    const std::size_t inner_n = d.kernel().front().size();
    const bool first = d.axis() == 1;
    const std::size_t cols = q.cols();

    std::vector<double> v(q.rows() * q.cols());
    for (std::size_t x = 0; x < outer_n; ++x) {
        require_same_base(t.kernel_dot[x], d.row(x));
        for (std::size_t y = 0; y < inner_n; ++y) {
            v[first ? x * cols + y : y * cols + x] = t.margin_dot[x] + t.kernel_dot[x][y];
        }
    }
    return center(q.as_prob(), Rv(q.as_prob().space(), std::move(v)));
}

CondTangent dB_transpose(const CondDecomp& d, const Fiber& v) {
    const JointProb q = compose(d);
    require_same_base(v, q.as_prob());
    const bool first = d.axis() == 1;
    const std::size_t outer_n = d.margin().size();
    const std::size_t inner_n = d.kernel().front().size();
    const std::size_t cols = q.cols();

    const Fiber margin_dot = center(d.margin(), condexp(q, v.as_rv(), d.axis()));

    std::vector<Fiber> kernel_dot;
    kernel_dot.reserve(outer_n);
    for (std::size_t x = 0; x < outer_n; ++x) {
        std::vector<double> slice(inner_n);
        for (std::size_t y = 0; y < inner_n; ++y) slice[y] = v[first ? x * cols + y : y * cols + x];
        const Fiber centered = center(d.row(x), Rv(d.row(x).space(), std::move(slice)));
        kernel_dot.push_back(centered * d.margin()[x]);
    }
    return CondTangent{margin_dot, std::move(kernel_dot)};
}

CondTangent gan_grad(const JointProb& p, const CondDecomp& d) {
    const JointProb q = compose(d);
    require_same_space(p.as_prob().space(), q.as_prob().space());
    const CondDecomp target = decompose(p, d.axis());

    const Fiber first = -mix_chart(d.margin(), target.margin());
    std::vector<Fiber> kernel_dot;
    kernel_dot.reserve(d.kernel().size());
    for (std::size_t x = 0; x < d.kernel().size(); ++x) {
        kernel_dot.push_back(mix_chart(d.row(x), target.row(x)) * -target.margin()[x]);
    }
    return CondTangent{first, std::move(kernel_dot)};
}

double cond_tangent_dot(const CondTangent& a, const CondTangent& b) {
    double total = fiber_dot(a.margin_dot, b.margin_dot);
    if (a.kernel_dot.size() != b.kernel_dot.size())
        throw SpaceMismatch("tangent kernel sizes differ");
    for (std::size_t x = 0; x < a.kernel_dot.size(); ++x)
        total += fiber_dot(a.kernel_dot[x], b.kernel_dot[x]);
    return total;
}

CondTangent scale(const CondTangent& t, double c) {
    CondTangent out{t.margin_dot * c, {}};
    out.kernel_dot.reserve(t.kernel_dot.size());
    for (const Fiber& f : t.kernel_dot) out.kernel_dot.push_back(f * c);
    return out;
}

}  // namespace statbundle
