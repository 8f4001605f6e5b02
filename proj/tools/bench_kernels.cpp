// Timing comparison of the chunked (OpenMP above the cutoff) kernels
// against the plain serial reference, across array sizes. Prints one row
// per (kernel, size) with ns/element for both lanes and the speedup.
//
//   bench_kernels [max_exponent]
//
// sizes run from 2^12 to 2^max_exponent (default 2^23).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "statbundle/kernels.hpp"
#include "statbundle/rng.hpp"

namespace k = statbundle::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    statbundle::SplitMix64 gen(seed);
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * gen.next_unit() - 1.0;
    return v;
}

// Best-of-k wall time for one call, in seconds.
template <class F>
double time_best(F&& f, int reps, double& sink) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        sink += f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, std::size_t n, double serial_s, double fast_s) {
    std::printf("%-16s %10zu %12.3f %12.3f %8.2fx\n", name, n,
                serial_s / static_cast<double>(n) * 1e9,
                fast_s / static_cast<double>(n) * 1e9, serial_s / fast_s);
}

}  // namespace

int main(int argc, char** argv) {
    const int max_exp = argc > 1 ? std::atoi(argv[1]) : 23;
    const int reps = 7;

#ifdef _OPENMP
    std::printf("threads: %d, parallel cutoff: %zu, chunk: %zu\n", omp_get_max_threads(),
                k::kParallelCutoff, k::kChunk);
#else
    std::printf("built without OpenMP; both lanes are serial\n");
#endif
    std::printf("%-16s %10s %12s %12s %9s\n", "kernel", "n", "serial ns/el", "kernel ns/el",
                "speedup");

    double sink = 0.0;
    for (int e = 12; e <= max_exp; e += 2) {
        const std::size_t n = 1ull << e;
        const std::vector<double> x = random_vec(n, 1);
        const std::vector<double> y = random_vec(n, 2);
        const std::vector<double> w = random_vec(n, 3);
        std::vector<double> out(n);

        row("sum", n, time_best([&] { return k::serial::sum(x.data(), n); }, reps, sink),
            time_best([&] { return k::sum(x.data(), n); }, reps, sink));
        row("dot", n,
            time_best([&] { return k::serial::dot(x.data(), y.data(), n); }, reps, sink),
            time_best([&] { return k::dot(x.data(), y.data(), n); }, reps, sink));
        row("dot3", n,
            time_best([&] { return k::serial::dot3(w.data(), x.data(), y.data(), n); }, reps,
                      sink),
            time_best([&] { return k::dot3(w.data(), x.data(), y.data(), n); }, reps, sink));
        row("sum_scaled_exp", n,
            time_best([&] { return k::serial::sum_scaled_exp(w.data(), x.data(), 1.0, n); },
                      reps, sink),
            time_best([&] { return k::sum_scaled_exp(w.data(), x.data(), 1.0, n); }, reps,
                      sink));
        row("map2(ratio)", n,
            time_best(
                [&] {
                    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / (2.0 + y[i]);
                    return out[n / 2];
                },
                reps, sink),
            time_best(
                [&] {
                    k::map2(out.data(), x.data(), y.data(), n,
                            [](double a, double b) { return a / (2.0 + b); });
                    return out[n / 2];
                },
                reps, sink));
    }
    std::printf("checksum %g\n", sink);
    return 0;
}
