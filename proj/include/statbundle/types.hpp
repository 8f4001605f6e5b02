#ifndef STATBUNDLE_TYPES_HPP
#define STATBUNDLE_TYPES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "statbundle/errors.hpp"

// Points of the open probability simplex, random variables on the same
// sample space, and fiber vectors (a base point plus a random variable
// centered under it). Everything is immutable once constructed; all
// operations on these values are pure.

namespace statbundle {

// Construction-time tolerances.
inline constexpr double kWeightFloor = 1e-300;    // strict positivity of weights
inline constexpr double kSumSlack = 1e-9;         // |sum-1| accepted before renormalizing
inline constexpr double kBasePointTol = 1e-15;    // element-wise base identity
inline constexpr double kCenterTolScale = 1e-10;  // fiber centering, scaled by 1+max|v|

class SampleSpace {
public:
    explicit SampleSpace(std::size_t size);
    SampleSpace(std::size_t size, std::vector<std::string> labels);

    std::size_t size() const { return size_; }
    const std::optional<std::vector<std::string>>& labels() const { return labels_; }

    friend bool operator==(const SampleSpace& a, const SampleSpace& b) {
        return a.size_ == b.size_ && a.labels_ == b.labels_;
    }

private:
    std::size_t size_;
    std::optional<std::vector<std::string>> labels_;
};

// Strictly positive probability function. Weights below kWeightFloor are
// rejected outright: the geometry lives on the open simplex only. A sum
// within kSumSlack of one is renormalized, anything further off is an
// error rather than silently rescaled.
class Prob {
public:
    Prob(SampleSpace space, std::vector<double> weights);

    const SampleSpace& space() const { return space_; }
    const std::vector<double>& weights() const { return w_; }
    double operator[](std::size_t i) const { return w_[i]; }
    std::size_t size() const { return w_.size(); }

private:
    SampleSpace space_;
    std::vector<double> w_;
};

// Real random variable on a finite sample space.
class Rv {
public:
    Rv(SampleSpace space, std::vector<double> values);

    const SampleSpace& space() const { return space_; }
    const std::vector<double>& values() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::size_t size() const { return v_.size(); }

    Rv operator+(const Rv& other) const;
    Rv operator-(const Rv& other) const;
    Rv operator*(double c) const;

private:
    SampleSpace space_;
    std::vector<double> v_;
};

// Fiber vector: a random variable attached to a base point and mean-zero
// under it. The base is stored by value; binary operations insist on the
// same base point element-wise to kBasePointTol.
class Fiber {
public:
    Fiber(Prob base, std::vector<double> values);

    const Prob& base() const { return base_; }
    const std::vector<double>& values() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::size_t size() const { return v_.size(); }

    Rv as_rv() const { return Rv(base_.space(), v_); }

    Fiber operator+(const Fiber& other) const;
    Fiber operator-(const Fiber& other) const;
    Fiber operator*(double c) const;
    Fiber operator-() const;

private:
    Prob base_;
    std::vector<double> v_;
};

inline Fiber operator*(double c, const Fiber& v) { return v * c; }
inline Rv operator*(double c, const Rv& u) { return u * c; }

void require_same_space(const SampleSpace& a, const SampleSpace& b);
// True when p and q agree element-wise within kBasePointTol.
bool same_point(const Prob& p, const Prob& q);
void require_same_base(const Fiber& v, const Prob& p);
void require_same_base(const Fiber& v, const Fiber& w);

double max_abs(const std::vector<double>& v);

}  // namespace statbundle

#endif
