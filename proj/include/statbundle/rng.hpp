#ifndef STATBUNDLE_RNG_HPP
#define STATBUNDLE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace statbundle {

// SplitMix64 (Steele, Lea & Flood 2014). A fixed 64-bit stream with a
// one-word state, so identical seeds give identical streams on every
// platform. All randomized code in the library derives from this
// generator; nothing uses std::random distributions, whose output is
// implementation-defined.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1], safe as a log argument.
    double next_unit_pos() { return 1.0 - next_unit(); }

    // Standard normal via Box-Muller, no cached spare.
    double next_gauss() {
        const double u = next_unit_pos();
        const double v = next_unit();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
    }

    // Exponential(1).
    double next_exp() { return -std::log(next_unit_pos()); }

private:
    std::uint64_t state_;
};

// Decorrelated per-stream seed for concurrent trials: trial k of a run
// seeded with `master` uses derive_seed(master, k).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0x632BE59BD9B4E019ull * (stream + 1)));
    g.next_u64();
    return g.next_u64();
}

}  // namespace statbundle

#endif
