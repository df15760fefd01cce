#ifndef AEGO_RNG_HPP
#define AEGO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace aego {

// All randomness in the project flows through RngStream so that results are
// reproducible bit-for-bit across platforms. std::mt19937_64 is fully
// specified by the standard; the distribution helpers below avoid
// std::uniform_real_distribution and friends, whose output is
// implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Pure function of (seed, label): the basis of hierarchical seeding. Phase
// seeds, per-sample streams, and per-network init streams are all derived
// this way, so any stage can be re-run in isolation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return a ^ (b << 1);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    return derive_seed(seed, hash_tag(tag));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t state = seed;
        engine_.seed(splitmix64(state));
    }

    std::uint64_t raw() { return engine_(); }

    // [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes exactly two raw draws per call.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 0x1.0p-1022) u1 = 0x1.0p-1022;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // [0, bound) via multiply-shift; bound must be >= 1.
    std::uint64_t integer(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace aego

#endif
