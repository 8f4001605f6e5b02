#include "statbundle/types.hpp"

#include <cmath>
#include <unordered_set>

#include "statbundle/kernels.hpp"

namespace statbundle {

namespace {

void check_space_size(std::size_t size) {
    if (size < 2) throw Error("sample space needs at least two atoms");
}

}  // namespace

SampleSpace::SampleSpace(std::size_t size) : size_(size) { check_space_size(size); }

SampleSpace::SampleSpace(std::size_t size, std::vector<std::string> labels)
    : size_(size), labels_(std::move(labels)) {
    check_space_size(size);
    if (labels_->size() != size_) throw Error("label count does not match the space size");
    std::unordered_set<std::string> seen(labels_->begin(), labels_->end());
    if (seen.size() != size_) throw Error("labels must be distinct");
}

Prob::Prob(SampleSpace space, std::vector<double> weights)
    : space_(std::move(space)), w_(std::move(weights)) {
    if (w_.size() != space_.size()) throw SpaceMismatch("weight count does not match the space");
    for (double w : w_) {
        if (!(w >= kWeightFloor)) throw NonPositive("probability weights must be strictly positive");
    }
    const double total = kernels::sum(w_);
    if (std::fabs(total - 1.0) > kSumSlack)
        throw Error("weights do not sum to one within tolerance");
    if (total != 1.0) {
        for (double& w : w_) w /= total;
    }
}

Rv::Rv(SampleSpace space, std::vector<double> values)
    : space_(std::move(space)), v_(std::move(values)) {
    if (v_.size() != space_.size()) throw SpaceMismatch("value count does not match the space");
    for (double x : v_) {
        if (!std::isfinite(x)) throw Error("random variable values must be finite");
    }
}

Rv Rv::operator+(const Rv& other) const {
    require_same_space(space_, other.space_);
    std::vector<double> out(v_.size());
    kernels::map2(out.data(), v_.data(), other.v_.data(), v_.size(),
                  [](double a, double b) { return a + b; });
    return Rv(space_, std::move(out));
}

Rv Rv::operator-(const Rv& other) const {
    require_same_space(space_, other.space_);
    std::vector<double> out(v_.size());
    kernels::map2(out.data(), v_.data(), other.v_.data(), v_.size(),
                  [](double a, double b) { return a - b; });
    return Rv(space_, std::move(out));
}

Rv Rv::operator*(double c) const {
    std::vector<double> out(v_.size());
    kernels::map(out.data(), v_.data(), v_.size(), [c](double a) { return c * a; });
    return Rv(space_, std::move(out));
}

Fiber::Fiber(Prob base, std::vector<double> values) : base_(std::move(base)), v_(std::move(values)) {
    if (v_.size() != base_.size()) throw SpaceMismatch("value count does not match the base space");
    for (double x : v_) {
        if (!std::isfinite(x)) throw Error("fiber values must be finite");
    }
    const double mean = kernels::dot(base_.weights(), v_);
    if (std::fabs(mean) > kCenterTolScale * (1.0 + max_abs(v_)))
        throw Error("fiber vector is not centered at its base");
}

Fiber Fiber::operator+(const Fiber& other) const {
    require_same_base(*this, other);
    std::vector<double> out(v_.size());
    kernels::map2(out.data(), v_.data(), other.v_.data(), v_.size(),
                  [](double a, double b) { return a + b; });
    return Fiber(base_, std::move(out));
}

Fiber Fiber::operator-(const Fiber& other) const {
    require_same_base(*this, other);
    std::vector<double> out(v_.size());
    kernels::map2(out.data(), v_.data(), other.v_.data(), v_.size(),
                  [](double a, double b) { return a - b; });
    return Fiber(base_, std::move(out));
}

Fiber Fiber::operator*(double c) const {
    std::vector<double> out(v_.size());
    kernels::map(out.data(), v_.data(), v_.size(), [c](double a) { return c * a; });
    return Fiber(base_, std::move(out));
}

Fiber Fiber::operator-() const { return *this * -1.0; }

void require_same_space(const SampleSpace& a, const SampleSpace& b) {
    if (!(a == b)) throw SpaceMismatch("values live on different sample spaces");
}

bool same_point(const Prob& p, const Prob& q) {
    if (!(p.space() == q.space())) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::fabs(p[i] - q[i]) > kBasePointTol) return false;
    }
    return true;
}

void require_same_base(const Fiber& v, const Prob& p) {
    if (!same_point(v.base(), p)) throw BaseMismatch("fiber vector is based at a different point");
}

void require_same_base(const Fiber& v, const Fiber& w) {
    if (!same_point(v.base(), w.base()))
        throw BaseMismatch("fiber vectors are based at different points");
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        const double a = std::fabs(x);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace statbundle
