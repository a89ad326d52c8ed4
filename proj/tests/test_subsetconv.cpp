#include <catch2/catch_amalgamated.hpp>

#include "tripart/subsetconv.hpp"

using namespace tripart;

namespace {

SetFamily random_family(unsigned n, std::size_t size, SplitMix64& g) {
    std::vector<std::uint64_t> masks;
    for (std::size_t i = 0; i < size; ++i) masks.push_back(bounded(g, 1ull << n));
    return SetFamily(n, std::move(masks));
}

template <class R>
IndicatorVector<R> random_01_vector(const R& ring, unsigned n, SplitMix64& g) {
    IndicatorVector<R> iv(ring, n);
    for (auto& e : iv.v) e = bounded(g, 2) ? ring.one() : ring.zero();
    return iv;
}

}  // namespace

TEST_CASE("set families") {
    auto F = SetFamily::from_sets(4, {{0, 1}, {2}, {0, 1}});
    REQUIRE(F.size() == 2);  // duplicates removed
    REQUIRE(F.contains(0b0011));
    REQUIRE_THROWS_AS(SetFamily(3, {0b1000}), std::invalid_argument);
    REQUIRE_THROWS_AS(SetFamily::from_sets(3, {{3}}), std::invalid_argument);
}

TEST_CASE("complement vector") {
    RationalRing q;
    SECTION("n=1 swaps the two entries") {
        IndicatorVector<RationalRing> w(q, 1);
        w.v[0] = Rational(2);
        w.v[1] = Rational(3);
        auto c = complement_vector(w);
        REQUIRE(c.v[0] == Rational(3));
        REQUIRE(c.v[1] == Rational(2));
    }
    SECTION("involution") {
        SplitMix64 g(5);
        auto w = random_01_vector(q, 5, g);
        REQUIRE(complement_vector(complement_vector(w)).v == w.v);
    }
    SECTION("unit vector moves to the complemented mask") {
        IndicatorVector<RationalRing> w(q, 3);
        w.v[0b101] = q.one();
        auto c = complement_vector(w);
        REQUIRE(c.v[0b010] == Rational(1));
        int nonzero = 0;
        for (const auto& e : c.v) nonzero += !e.is_zero();
        REQUIRE(nonzero == 1);
    }
}

TEST_CASE("subset convolution, small closed forms") {
    RationalRing q;
    SECTION("n=1 expands the definition") {
        SplitMix64 g(11);
        for (int t = 0; t < 20; ++t) {
            IndicatorVector<RationalRing> u(q, 1), v(q, 1);
            for (auto* iv : {&u, &v})
                for (auto& e : iv->v)
                    e = q.from_int(static_cast<long long>(bounded(g, 9)) - 4);
            auto w = subset_convolution(u, v);
            REQUIRE(w.v[0] == u.v[0] * v.v[0]);
            REQUIRE(w.v[1] == u.v[0] * v.v[1] + u.v[1] * v.v[0]);
        }
    }
    SECTION("all-ones vectors give 2^|X|") {
        IndicatorVector<RationalRing> u(q, 2);
        for (auto& e : u.v) e = q.one();
        auto w = subset_convolution(u, u);
        for (std::uint64_t x = 0; x < 4; ++x)
            REQUIRE(w.v[x] == Rational(1ull << std::popcount(x)));
    }
    SECTION("exhaustive n=2 with entries in {0,1,2}") {
        for (unsigned a = 0; a < 81; ++a)
            for (unsigned b = 0; b < 81; ++b) {
                IndicatorVector<RationalRing> u(q, 2), v(q, 2);
                unsigned ua = a, ub = b;
                for (int i = 0; i < 4; ++i) {
                    u.v[i] = q.from_int(ua % 3);
                    v.v[i] = q.from_int(ub % 3);
                    ua /= 3;
                    ub /= 3;
                }
                auto fast = subset_convolution(u, v);
                auto slow = brute_subset_convolution(u, v);
                REQUIRE(fast.v == slow.v);
            }
    }
}

TEST_CASE("subset convolution matches the brute oracle") {
    RationalRing q;
    Gf2 f2;
    SplitMix64 g(2718);
    for (unsigned n = 1; n <= 8; ++n) {
        for (int t = 0; t < 10; ++t) {
            auto uq = random_01_vector(q, n, g), vq = random_01_vector(q, n, g);
            REQUIRE(subset_convolution(uq, vq).v ==
                    brute_subset_convolution(uq, vq).v);
            auto u2 = random_01_vector(f2, n, g), v2 = random_01_vector(f2, n, g);
            REQUIRE(subset_convolution(u2, v2).v ==
                    brute_subset_convolution(u2, v2).v);
        }
    }
    SECTION("n=10 random 0/1 vectors over the rationals") {
        auto u = random_01_vector(q, 10, g), v = random_01_vector(q, 10, g);
        REQUIRE(subset_convolution(u, v).v == brute_subset_convolution(u, v).v);
    }
}

TEST_CASE("convolution is the complement of the bilinear partition map") {
    RationalRing q;
    SplitMix64 g(31);
    for (unsigned n = 1; n <= 6; ++n) {
        auto u = random_01_vector(q, n, g), v = random_01_vector(q, n, g);
        auto via_tensor = complement_vector(partition_bilinear_map(u, v));
        REQUIRE(via_tensor.v == brute_subset_convolution(u, v).v);
    }
}

TEST_CASE("convolution algebra over the rationals") {
    RationalRing q;
    SplitMix64 g(1618);
    for (unsigned n : {3u, 5u}) {
        auto u = random_01_vector(q, n, g), v = random_01_vector(q, n, g),
             w = random_01_vector(q, n, g);
        auto uv = subset_convolution(u, v);
        REQUIRE(uv.v == subset_convolution(v, u).v);
        REQUIRE(subset_convolution(uv, w).v ==
                subset_convolution(u, subset_convolution(v, w)).v);
    }
}

TEST_CASE("trilinear partition count") {
    RationalRing q;
    SECTION("single-element universe") {
        SetFamily F = SetFamily::from_sets(1, {{0}});
        SetFamily E = SetFamily::from_sets(1, {{}});
        REQUIRE(trilinear_partition_count(q, F, E, E) == Rational(1));
        REQUIRE(trilinear_partition_count(q, E, E, E) == Rational(0));
    }
    SECTION("full families over [2] give 9 = 3^2") {
        SetFamily all(2, {0, 1, 2, 3});
        REQUIRE(trilinear_partition_count(q, all, all, all) == Rational(9));
    }
    SECTION("random families against the brute triple loop") {
        SplitMix64 g(97);
        for (unsigned n : {4u, 7u, 10u}) {
            for (int t = 0; t < 5; ++t) {
                auto F = random_family(n, 50, g), G = random_family(n, 50, g),
                     H = random_family(n, 50, g);
                REQUIRE(trilinear_partition_count(q, F, G, H) ==
                        Rational(brute_partition_count(F, G, H)));
            }
        }
    }
    SECTION("GF(2) value is the parity of the rational count") {
        Gf2 f2;
        SplitMix64 g(98);
        for (int t = 0; t < 10; ++t) {
            auto F = random_family(6, 20, g), G = random_family(6, 20, g),
                 H = random_family(6, 20, g);
            auto count = brute_partition_count(F, G, H);
            REQUIRE(trilinear_partition_count(f2, F, G, H) ==
                    static_cast<std::uint8_t>(count % 2));
        }
    }
}

TEST_CASE("brute partition count on the full lattice") {
    for (unsigned n = 1; n <= 8; ++n) {
        std::vector<std::uint64_t> all(1ull << n);
        for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
        SetFamily F(n, all);
        std::uint64_t want = 1;
        for (unsigned i = 0; i < n; ++i) want *= 3;
        REQUIRE(brute_partition_count(F, F, F) == want);
    }
}

TEST_CASE("partition counts are permutation invariant") {
    SplitMix64 g(555);
    auto F = random_family(8, 30, g), G = random_family(8, 30, g),
         H = random_family(8, 30, g);
    auto perm = random_permutation(8, 777);
    REQUIRE(brute_partition_count(permute_family(F, perm), permute_family(G, perm),
                                  permute_family(H, perm)) ==
            brute_partition_count(F, G, H));
}

TEST_CASE("dense universe cap") {
    RationalRing q;
    REQUIRE_THROWS_AS(IndicatorVector<RationalRing>(q, 30), std::length_error);
}
