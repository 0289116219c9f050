#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace smoothcut {

// SplitMix64 finalizer. Used to derive per-trial and per-stream seeds from a
// master seed: seed(trial k, stream s) = mix(master ^ mix(k+1) ^ mix((s+1) << 32)).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class RngStream : std::uint64_t {
    Context = 0,    // adversary context draws
    Label = 1,      // Rademacher / tie-break label draws
    Learner = 2,    // learner-internal randomness (affine z_t, IGW sampling)
    MonteCarlo = 3, // harness estimators
    Oracle = 4      // ground-truth parameter draws
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, RngStream stream) {
    return mix64(master ^ mix64(trial + 1) ^ mix64((static_cast<std::uint64_t>(stream) + 1) << 32));
}

// mt19937_64 with hand-rolled distributions; std:: distributions are
// implementation-defined and would break seed reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection sampling keeps the draw exactly uniform
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    int rademacher() { return (engine_() & 1ULL) ? 1 : -1; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // polar Box-Muller
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace smoothcut
