#pragma once

#include <cstdint>
#include <string_view>

namespace horokit {

// Deterministic 64-bit generator (splitmix64).  Used instead of <random>
// engines/distributions so that streams are bit-identical across platforms
// and standard-library versions; every randomized routine derives its own
// stream from a single user seed via child_rng().
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, bound), bound > 0.  Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

  private:
    std::uint64_t state_;
};

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Named child stream: one master seed fans out into independent streams,
// one per (name, index) pair.
inline SplitMix64 child_rng(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
    SplitMix64 mixer(seed ^ fnv1a64(name));
    std::uint64_t s = mixer.next();
    SplitMix64 mixer2(s ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return SplitMix64(mixer2.next());
}

}  // namespace horokit
