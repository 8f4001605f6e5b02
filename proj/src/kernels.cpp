#include "statbundle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace statbundle::kernels {

namespace serial {

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
    return acc;
}

double max(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

double sum_scaled_exp(const double* w, const double* v, double shift, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::exp(v[i] - shift);
    return acc;
}

}  // namespace serial

namespace {

// Chunked reduction driver: Partial computes one chunk serially, Combine
// folds the partials in chunk order. Identical bits for any thread count.
template <class Partial, class Combine>
double reduce_chunks(std::size_t n, double init, Partial partial, Combine combine) {
    if (n == 0) return init;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks == 1) return combine(init, partial(0, n));

    std::vector<double> partials(nchunks);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        partials[static_cast<std::size_t>(c)] = partial(lo, hi);
    }
    double acc = init;
    for (double p : partials) acc = combine(acc, p);
    return acc;
}

inline double add(double a, double b) { return a + b; }

}  // namespace

double sum(const double* x, std::size_t n) {
    return reduce_chunks(
        n, 0.0, [x](std::size_t lo, std::size_t hi) { return serial::sum(x + lo, hi - lo); },
        add);
}

double dot(const double* x, const double* y, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [x, y](std::size_t lo, std::size_t hi) { return serial::dot(x + lo, y + lo, hi - lo); },
        add);
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [w, x, y](std::size_t lo, std::size_t hi) {
            return serial::dot3(w + lo, x + lo, y + lo, hi - lo);
        },
        add);
}

double max(const double* x, std::size_t n) {
    return reduce_chunks(
        n, -std::numeric_limits<double>::infinity(),
        [x](std::size_t lo, std::size_t hi) { return serial::max(x + lo, hi - lo); },
        [](double a, double b) { return std::max(a, b); });
}

double sum_scaled_exp(const double* w, const double* v, double shift, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [w, v, shift](std::size_t lo, std::size_t hi) {
            return serial::sum_scaled_exp(w + lo, v + lo, shift, hi - lo);
        },
        add);
}

}  // namespace statbundle::kernels
