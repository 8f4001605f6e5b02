#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <vector>

#include "statbundle/kernels.hpp"
#include "statbundle/rng.hpp"

namespace k = statbundle::kernels;
using statbundle::SplitMix64;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo = -1.0,
                               double hi = 1.0) {
    SplitMix64 gen(seed);
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * gen.next_unit();
    return v;
}

}  // namespace

TEST_CASE("chunked reductions agree with the serial reference") {
    for (std::size_t n : {1ul, 7ul, 2048ul, 2049ul, 100000ul}) {
        const auto x = random_vec(n, 11 + n);
        const auto y = random_vec(n, 99 + n);
        const auto w = random_vec(n, 7 + n, 0.0, 1.0);

        CHECK(k::sum(x.data(), n) ==
              doctest::Approx(k::serial::sum(x.data(), n)).epsilon(1e-12));
        CHECK(k::dot(x.data(), y.data(), n) ==
              doctest::Approx(k::serial::dot(x.data(), y.data(), n)).epsilon(1e-12));
        CHECK(k::dot3(w.data(), x.data(), y.data(), n) ==
              doctest::Approx(k::serial::dot3(w.data(), x.data(), y.data(), n)).epsilon(1e-12));
        CHECK(k::max(x.data(), n) == k::serial::max(x.data(), n));
        CHECK(k::sum_scaled_exp(w.data(), x.data(), 1.0, n) ==
              doctest::Approx(k::serial::sum_scaled_exp(w.data(), x.data(), 1.0, n))
                  .epsilon(1e-12));
    }
}

TEST_CASE("reductions are bitwise invariant under the thread count") {
    const std::size_t n = 3 * k::kParallelCutoff + 17;
    const auto x = random_vec(n, 5);
    const auto y = random_vec(n, 6);

    const double sum1 = k::sum(x.data(), n);
    const double dot1 = k::dot(x.data(), y.data(), n);
    const double max1 = k::max(x.data(), n);

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 3, 7}) {
        omp_set_num_threads(threads);
        CHECK(k::sum(x.data(), n) == sum1);
        CHECK(k::dot(x.data(), y.data(), n) == dot1);
        CHECK(k::max(x.data(), n) == max1);
    }
    omp_set_num_threads(saved);
#else
    CHECK(k::sum(x.data(), n) == sum1);
    CHECK(k::dot(x.data(), y.data(), n) == dot1);
    CHECK(k::max(x.data(), n) == max1);
#endif
}

TEST_CASE("maps match a hand loop across the cutoff") {
    for (std::size_t n : {5ul, 2 * k::kParallelCutoff}) {
        const auto a = random_vec(n, 21);
        const auto b = random_vec(n, 22, 0.5, 2.0);
        std::vector<double> out(n);
        k::map2(out.data(), a.data(), b.data(), n, [](double p, double q) { return p / q; });
        for (std::size_t i = 0; i < n; i += n / 5 + 1) CHECK(out[i] == a[i] / b[i]);
    }
}

TEST_CASE("splitmix64 reference values stay fixed") {
    // Known stream for seed 1234567 (Vigna's reference implementation).
    SplitMix64 gen(1234567);
    CHECK(gen.next_u64() == 6457827717110365317ull);
    CHECK(gen.next_u64() == 3203168211198807973ull);

    SplitMix64 unit(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = unit.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("derived trial seeds differ across streams") {
    const std::uint64_t master = 99;
    CHECK(statbundle::derive_seed(master, 0) != statbundle::derive_seed(master, 1));
    CHECK(statbundle::derive_seed(master, 1) != statbundle::derive_seed(master, 2));
    CHECK(statbundle::derive_seed(master, 0) == statbundle::derive_seed(master, 0));
}
