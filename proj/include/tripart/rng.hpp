#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

// Seeded, counter-splittable randomness.  All randomized code in the library
// draws from streams derived here, never from std::random_device or from the
// (implementation-defined) standard distributions, so that identical seeds
// give identical results on every platform and at every thread count.

namespace tripart {

// SplitMix64 (Steele--Lea--Vigna); also used as a 64-bit finalizer below.
struct SplitMix64 {
    std::uint64_t state = 0;

    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream seed for (master, tag, index).  Streams with distinct
// (tag, index) pairs are usable concurrently; results do not depend on the
// order in which streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    std::uint64_t a = mix64(master ^ (0x9e3779b97f4a7c15ull * (tag + 1)));
    return mix64(a ^ (0xc2b2ae3d27d4eb4full * (index + 1)));
}

// Uniform draw from [0, n) without modulo bias.
inline std::uint64_t bounded(SplitMix64& g, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t x = g.next();
        if (x >= threshold) return x % n;
    }
}

// Fisher-Yates from a derived stream.
inline std::vector<unsigned> random_permutation(unsigned n, std::uint64_t seed) {
    std::vector<unsigned> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    SplitMix64 g(seed);
    for (unsigned i = n; i > 1; --i) {
        std::uint64_t j = bounded(g, i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace tripart
