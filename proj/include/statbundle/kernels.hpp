#ifndef STATBUNDLE_KERNELS_HPP
#define STATBUNDLE_KERNELS_HPP

#include <cstddef>
#include <vector>

// Array kernels shared by every module. Reductions are computed over
// fixed-size chunks whose partial sums are combined in chunk order, so a
// result never depends on the number of OpenMP threads: threads only
// decide who computes a chunk, not the arithmetic. The plain serial
// variants in kernels::serial are the reference implementations used by
// the tests and the benchmark.

namespace statbundle::kernels {

// Chunk width for deterministic reductions.
inline constexpr std::size_t kChunk = 2048;

// Below this length the chunk loop runs on the calling thread. Desk-scale
// problems never cross it, which keeps small-n code free of OpenMP
// scheduling overhead.
inline constexpr std::size_t kParallelCutoff = 1u << 15;

namespace serial {

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// sum_i w[i]*x[i]*y[i]
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double max(const double* x, std::size_t n);
// sum_i w[i]*exp(v[i]-shift)
double sum_scaled_exp(const double* w, const double* v, double shift, std::size_t n);

}  // namespace serial

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double max(const double* x, std::size_t n);
double sum_scaled_exp(const double* w, const double* v, double shift, std::size_t n);

inline double sum(const std::vector<double>& x) { return sum(x.data(), x.size()); }
inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    return dot(x.data(), y.data(), x.size());
}
inline double dot3(const std::vector<double>& w, const std::vector<double>& x,
                   const std::vector<double>& y) {
    return dot3(w.data(), x.data(), y.data(), x.size());
}
inline double max(const std::vector<double>& x) { return max(x.data(), x.size()); }

// Elementwise maps. Writes go to distinct slots, so the parallel path is
// bitwise identical to the serial one.
template <class F>
void map(double* out, const double* a, std::size_t n, F f) {
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (long long i = 0; i < static_cast<long long>(n); ++i) out[i] = f(a[i]);
}

template <class F>
void map2(double* out, const double* a, const double* b, std::size_t n, F f) {
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (long long i = 0; i < static_cast<long long>(n); ++i) out[i] = f(a[i], b[i]);
}

}  // namespace statbundle::kernels

#endif
