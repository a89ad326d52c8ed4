#include <catch2/catch_amalgamated.hpp>

#include "tripart/analysis.hpp"
#include "tripart/broken.hpp"

using namespace tripart;

namespace {

SetFamily random_family(unsigned n, std::size_t size, SplitMix64& g) {
    std::vector<std::uint64_t> masks;
    for (std::size_t i = 0; i < size; ++i) masks.push_back(bounded(g, 1ull << n));
    return SetFamily(n, std::move(masks));
}

// brute-force count of partitions with all three sets good
std::uint64_t brute_good_count(const SetFamily& F, const SetFamily& G,
                               const SetFamily& H, const BlockStructure& bs) {
    const std::uint64_t full = F.full_mask();
    std::uint64_t count = 0;
    for (auto x : F.members) {
        if (!is_good(x, bs)) continue;
        for (auto y : G.members) {
            if ((x & y) || !is_good(y, bs)) continue;
            for (auto z : H.members)
                if (((x | y) & z) == 0 && (x | y | z) == full && is_good(z, bs))
                    ++count;
        }
    }
    return count;
}

SetFamily all_good_sets(const BlockStructure& bs) {
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 0; m < (1ull << bs.n); ++m)
        if (is_good(m, bs)) masks.push_back(m);
    return SetFamily(bs.n, std::move(masks));
}

}  // namespace

TEST_CASE("block structure and good sets") {
    SECTION("full block is bad, partial block is good") {
        BlockStructure bs(0, 1, 1);  // n = 3
        REQUIRE(bs.n == 3);
        REQUIRE_FALSE(is_good(0b111, bs));
        REQUIRE(is_good(0b011, bs));
        REQUIRE(is_good(0, bs));
    }
    SECTION("good-set census is 2^p 7^(dq)") {
        for (auto [p, d, q] : {std::array<unsigned, 3>{0, 1, 1},
                               std::array<unsigned, 3>{2, 1, 1},
                               std::array<unsigned, 3>{1, 1, 2},
                               std::array<unsigned, 3>{0, 2, 1}}) {
            BlockStructure bs(p, d, q);
            std::uint64_t census = 0;
            for (std::uint64_t m = 0; m < (1ull << bs.n); ++m) census += is_good(m, bs);
            REQUIRE(census == bs.good_count());
        }
    }
    SECTION("invalid structures are rejected") {
        REQUIRE_THROWS_AS(BlockStructure(0, 0, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(BlockStructure::for_universe(5, 1, 2), std::invalid_argument);
    }
}

TEST_CASE("mixed-base indexing") {
    SECTION("hand-evaluated values") {
        BlockStructure b3(0, 1, 1);
        REQUIRE(mixed_base_index(0, b3) == 0);
        REQUIRE(mixed_base_index(0b001, b3) == 1);
        REQUIRE(mixed_base_index(0b101, b3) == 5);
        BlockStructure b4(1, 1, 1);
        REQUIRE(mixed_base_index(0b1000, b4) == 7);  // high binary part
    }
    SECTION("bad sets are rejected") {
        BlockStructure b3(0, 1, 1);
        REQUIRE_THROWS_AS(mixed_base_index(0b111, b3), std::invalid_argument);
        REQUIRE_THROWS_AS(mixed_base_inverse(7, b3), std::out_of_range);
        REQUIRE(mixed_base_inverse(0, b3) == 0);
    }
    SECTION("bijection between good sets and [2^p 7^(dq)]") {
        for (auto [p, d, q] : {std::array<unsigned, 3>{0, 1, 1},
                               std::array<unsigned, 3>{1, 1, 2},
                               std::array<unsigned, 3>{2, 1, 2},
                               std::array<unsigned, 3>{3, 2, 1}}) {
            BlockStructure bs(p, d, q);
            std::vector<bool> seen(bs.good_count(), false);
            for (std::uint64_t m = 0; m < (1ull << bs.n); ++m) {
                if (!is_good(m, bs)) continue;
                auto idx = mixed_base_index(m, bs);
                REQUIRE(idx < bs.good_count());
                REQUIRE_FALSE(seen[idx]);
                seen[idx] = true;
                REQUIRE(mixed_base_inverse(idx, bs) == m);
            }
            for (std::uint64_t idx = 0; idx < bs.good_count(); ++idx)
                REQUIRE(mixed_base_index(mixed_base_inverse(idx, bs), bs) == idx);
        }
    }
}

TEST_CASE("q decompositions") {
    RationalRing q;
    SECTION("trivial decomposition verifies, r = 24") {
        auto dec = trivial_q_decomposition(q, 1);
        REQUIRE(dec.rank() == 24);
        REQUIRE(dec.verify());
    }
    SECTION("corrupted decomposition fails verification") {
        auto dec = trivial_q_decomposition(q, 1);
        dec.A.at(0, 0) = q.from_int(1) - dec.A.at(0, 0);  // flip one entry
        REQUIRE_FALSE(dec.verify());
    }
    SECTION("trivial decomposition of the square, r = 576") {
        Gf2 f2;
        auto dec = trivial_q_decomposition(f2, 2);
        REQUIRE(dec.rank() == 576);
        REQUIRE(dec.verify());
    }
}

TEST_CASE("broken counting over the rationals") {
    RationalRing q;
    auto dec = trivial_q_decomposition(q, 1);
    SECTION("all good sets over [3] give 24 good partitions") {
        BlockStructure bs(0, 1, 1);
        auto F = all_good_sets(bs);
        REQUIRE(F.size() == 7);
        REQUIRE(broken_count_rational(F, F, F, bs, dec) == 24);
    }
    SECTION("empty-set families cover nothing") {
        BlockStructure bs(0, 1, 1);
        SetFamily E = SetFamily::from_sets(3, {{}});
        REQUIRE(broken_count_rational(E, E, E, bs, dec) == 0);
    }
    SECTION("random families against the filtered brute count") {
        SplitMix64 g(12);
        for (auto [p, d, q_] : {std::array<unsigned, 3>{0, 1, 2},
                                std::array<unsigned, 3>{2, 1, 1},
                                std::array<unsigned, 3>{3, 1, 2},
                                std::array<unsigned, 3>{2, 1, 0},
                                std::array<unsigned, 3>{0, 2, 1}}) {
            BlockStructure bs(p, d, q_);
            QDecomposition<RationalRing> dd = trivial_q_decomposition(q, d);
            for (int t = 0; t < 10; ++t) {
                auto F = random_family(bs.n, 25, g), G = random_family(bs.n, 25, g),
                     H = random_family(bs.n, 25, g);
                REQUIRE(broken_count_rational(F, G, H, bs, dd) ==
                        BigInt(brute_good_count(F, G, H, bs)));
            }
        }
    }
    SECTION("with q = 0 every partition is good") {
        SplitMix64 g(13);
        BlockStructure bs(5, 1, 0);
        auto F = random_family(5, 12, g), G = random_family(5, 12, g),
             H = random_family(5, 12, g);
        REQUIRE(broken_count_rational(F, G, H, bs, dec) ==
                BigInt(brute_partition_count(F, G, H)));
    }
    SECTION("output depends on the tensor, not the witness") {
        BlockStructure bs(1, 1, 1);
        SplitMix64 g(14);
        auto F = random_family(4, 10, g), G = random_family(4, 10, g),
             H = random_family(4, 10, g);
        auto base = broken_count_rational(F, G, H, bs, dec);

        // split the first rank-1 term in two halves: r = 25
        QDecomposition<RationalRing> split;
        split.d = 1;
        split.A = Matrix<RationalRing>(q, 7, 25);
        split.B = Matrix<RationalRing>(q, 7, 25);
        split.C = Matrix<RationalRing>(q, 7, 25);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t l = 0; l < 24; ++l) {
                split.A.at(i, l + 1) = dec.A.at(i, l);
                split.B.at(i, l + 1) = dec.B.at(i, l);
                split.C.at(i, l + 1) = dec.C.at(i, l);
            }
        for (std::size_t i = 0; i < 7; ++i) {
            split.A.at(i, 0) = dec.A.at(i, 0);
            split.B.at(i, 0) = dec.B.at(i, 0);
            split.C.at(i, 0) = dec.C.at(i, 0) / 2;
            split.C.at(i, 1) = dec.C.at(i, 0) / 2;
        }
        REQUIRE(split.verify());
        REQUIRE(broken_count_rational(F, G, H, bs, split) == base);

        // permute the columns of the trivial witness
        QDecomposition<RationalRing> perm;
        perm.d = 1;
        perm.A = Matrix<RationalRing>(q, 7, 24);
        perm.B = Matrix<RationalRing>(q, 7, 24);
        perm.C = Matrix<RationalRing>(q, 7, 24);
        auto cols = random_permutation(24, 5);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t l = 0; l < 24; ++l) {
                perm.A.at(i, cols[l]) = dec.A.at(i, l);
                perm.B.at(i, cols[l]) = dec.B.at(i, l);
                perm.C.at(i, cols[l]) = dec.C.at(i, l);
            }
        REQUIRE(perm.verify());
        REQUIRE(broken_count_rational(F, G, H, bs, perm) == base);
    }
    SECTION("unverified decompositions are refused") {
        BlockStructure bs(0, 1, 1);
        auto bad = trivial_q_decomposition(q, 1);
        bad.B.at(3, 7) = q.from_int(5);
        auto F = all_good_sets(bs);
        REQUIRE_THROWS_AS(broken_count_rational(F, F, F, bs, bad),
                          std::invalid_argument);
    }
}

TEST_CASE("broken detection over a finite field") {
    Gf2 f2;
    auto dec2 = trivial_q_decomposition(f2, 1);
    SECTION("no good partition means no detection, ever") {
        // partitions exist but every one uses the bad set [3]
        BlockStructure bs(0, 1, 1);
        SetFamily F = SetFamily::from_sets(3, {{0, 1, 2}});
        SetFamily E = SetFamily::from_sets(3, {{}});
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            REQUIRE_FALSE(broken_detect_field<2>(F, E, E, bs, dec2, seed).nonzero);
            REQUIRE_FALSE(broken_detect_field<2>(E, E, E, bs, dec2, seed).nonzero);
        }
    }
    SECTION("planted partition at n = 9 is detected almost always") {
        BlockStructure bs(3, 1, 2);
        SplitMix64 g(7);
        auto mk = [&](std::vector<unsigned> planted) {
            auto fam = random_family(9, 10, g);
            auto masks = fam.members;
            std::uint64_t m = 0;
            for (auto e : planted) m |= 1ull << e;
            masks.push_back(m);
            return SetFamily(9, masks);
        };
        auto F = mk({0, 3, 6}), G = mk({1, 4, 7}), H = mk({2, 5, 8});
        REQUIRE(brute_good_count(F, G, H, bs) > 0);
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            hits += broken_detect_field<2>(F, G, H, bs, dec2, seed).nonzero;
        REQUIRE(hits >= 45);  // per-run failure probability is at most 3/512
    }
    SECTION("detection is one-sided on random instances") {
        BlockStructure bs(1, 1, 1);
        SplitMix64 g(18);
        for (int t = 0; t < 60; ++t) {
            auto F = random_family(4, 5, g), G = random_family(4, 5, g),
                 H = random_family(4, 5, g);
            auto r = broken_detect_field<2>(F, G, H, bs, dec2, 1000 + t);
            if (r.nonzero) REQUIRE(brute_good_count(F, G, H, bs) > 0);
            if (brute_good_count(F, G, H, bs) == 0) REQUIRE_FALSE(r.nonzero);
        }
    }
    SECTION("agreement with the rational count on all-good families") {
        BlockStructure bs(0, 1, 1);
        RationalRing q;
        auto F = all_good_sets(bs);
        REQUIRE(broken_count_rational(F, F, F, bs, trivial_q_decomposition(q, 1)) > 0);
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            hits += broken_detect_field<2>(F, F, F, bs, dec2, seed).nonzero;
        // |E| = 2^3 leaves real failure probability; the bound is 1 - 3/8
        REQUIRE(hits >= 40);
    }
    SECTION("the modulus is reported and seed-stable") {
        BlockStructure bs(0, 1, 1);
        SetFamily E = SetFamily::from_sets(3, {{}});
        auto r1 = broken_detect_field<2>(E, E, E, bs, dec2, 99);
        auto r2 = broken_detect_field<2>(E, E, E, bs, dec2, 99);
        REQUIRE(r1.modulus == r2.modulus);
        REQUIRE(r1.modulus.size() == 4);  // monic cubic
        REQUIRE(is_irreducible<2>(r1.modulus));
    }
}

TEST_CASE("random permutation wrapper") {
    Gf2 f2;
    auto dec2 = trivial_q_decomposition(f2, 1);
    SECTION("one-sided: no partition at all stays NO") {
        BlockStructure bs(0, 1, 1);
        SetFamily F = SetFamily::from_sets(3, {{0}, {1}});
        SetFamily G = SetFamily::from_sets(3, {{0}});
        SetFamily H = SetFamily::from_sets(3, {{1}});
        auto r = random_permutation_wrapper<2>(F, G, H, bs, dec2, 25, 7);
        REQUIRE_FALSE(r.found);
        REQUIRE(r.repeats_used == 25);
    }
    SECTION("zero repeats always answer NO") {
        BlockStructure bs(0, 1, 1);
        auto F = all_good_sets(bs);
        REQUIRE_FALSE(random_permutation_wrapper<2>(F, F, F, bs, dec2, 0, 7).found);
    }
    SECTION("a bad-only partition becomes visible under permutations") {
        BlockStructure bs(0, 1, 2);  // n = 6, two blocks
        SetFamily F = SetFamily::from_sets(6, {{0, 1, 2}});
        SetFamily G = SetFamily::from_sets(6, {{3, 4}});
        SetFamily H = SetFamily::from_sets(6, {{5}});
        auto r = random_permutation_wrapper<2>(F, G, H, bs, dec2, 40, 11);
        REQUIRE(r.found);
    }
    SECTION("identical results at any thread count") {
        BlockStructure bs(1, 1, 1);
        SplitMix64 g(77);
        auto F = random_family(4, 6, g), G = random_family(4, 6, g),
             H = random_family(4, 6, g);
        auto a = random_permutation_wrapper<2>(F, G, H, bs, dec2, 17, 12345, 1);
        auto b = random_permutation_wrapper<2>(F, G, H, bs, dec2, 17, 12345, 3);
        REQUIRE(a.found == b.found);
        REQUIRE(a.repeats_used == b.repeats_used);
        REQUIRE(a.modulus == b.modulus);
    }
    SECTION("detection rate tracks the Monte Carlo permutation estimate") {
        // one partition only; the first set is bad exactly when pi maps it
        // onto one of the two blocks, so the good probability is 1 - 2/20
        Gf7 f7;
        auto dec7 = trivial_q_decomposition(f7, 1);
        BlockStructure bs(0, 1, 2);
        SetFamily F = SetFamily::from_sets(6, {{0, 1, 2}});
        SetFamily G = SetFamily::from_sets(6, {{3, 4}});
        SetFamily H = SetFamily::from_sets(6, {{5}});
        std::uint64_t good = 0;
        const int perms = 20000;
        for (int i = 0; i < perms; ++i) {
            auto pi = random_permutation(6, derive_seed(4242, 1, i));
            good += is_good(permute_mask(F.members[0], pi), bs) &&
                    is_good(permute_mask(G.members[0], pi), bs) &&
                    is_good(permute_mask(H.members[0], pi), bs);
        }
        double theta_hat = double(good) / perms;
        REQUIRE(theta_hat == Catch::Approx(0.9).margin(0.02));
        int found = 0;
        const int runs = 400;
        for (int i = 0; i < runs; ++i)
            found += random_permutation_wrapper<7>(F, G, H, bs, dec7, 1,
                                                   derive_seed(5555, 2, i))
                         .found;
        double rate = double(found) / runs;
        // with s = 1 and a field of size 7^6 the rate is theta up to noise
        REQUIRE(rate >= theta_hat - 0.06);
        REQUIRE(rate <= theta_hat + 0.06);
    }
}

TEST_CASE("theta, the success bound and the repeat count") {
    SECTION("paper constants give 0 < theta < 1") {
        auto th = theta_value(Rational(1, 1000), Rational(1, 1000));
        auto v = th.value();
        REQUIRE(v > 0);
        REQUIRE(v < 1);
        REQUIRE(th.base == theta_inner(Rational(1, 1000), Rational(1, 1000)));
    }
    SECTION("inner value stays positive across the sigma range") {
        for (int k = 1; k <= 11; ++k) {
            Rational sigma(k, 12 * 12);  // up to 11/144 < 1/12
            REQUIRE(theta_inner(sigma, Rational(1, 6) - Rational(1, 1000)) > 0);
        }
    }
    SECTION("parameter ranges are enforced") {
        REQUIRE_THROWS_AS(theta_value(Rational(1, 12), Rational(1, 1000)),
                          std::domain_error);
        REQUIRE_THROWS_AS(theta_value(Rational(1, 1000), Rational(1, 6)),
                          std::domain_error);
    }
    SECTION("repeat count, exact cases") {
        REQUIRE(repeat_count(3, PowExpr{Rational(1, 2), Rational(1)}) == 24);
        REQUIRE_THROWS_AS(repeat_count(3, PowExpr{Rational(1), Rational(1)}),
                          std::domain_error);
    }
    SECTION("repeat count is monotone in n for the paper constants") {
        auto th = theta_value(Rational(1, 1000), Rational(1, 1000));
        BigInt prev = 0;
        for (unsigned n : {10u, 20u, 40u, 80u, 160u}) {
            BigInt s = repeat_count(n, th);
            REQUIRE(s > prev);
            REQUIRE(s > n);
            prev = s;
        }
    }
    SECTION("Monte Carlo check of the good-probability bound") {
        // n = 12, one block, |X|=|Y|=|Z|=4 partitioning [12]
        BlockStructure bs(9, 1, 1);
        std::uint64_t x = 0xF, y = 0xF0, z = 0xF00;
        std::uint64_t good = 0;
        const int perms = 10000;
        for (int i = 0; i < perms; ++i) {
            auto pi = random_permutation(12, derive_seed(31415, 3, i));
            good += is_good(permute_mask(x, pi), bs) &&
                    is_good(permute_mask(y, pi), bs) &&
                    is_good(permute_mask(z, pi), bs);
        }
        // sigma at the boundary dq/n = 1/12, tau = 1/1000; sigma*n = 1 makes
        // the bound exactly rational
        auto bound = good_probability_lower_bound(12, Rational(1, 12), Rational(1, 1000));
        auto exact = bound.exact();
        REQUIRE(exact.has_value());
        REQUIRE(Rational(good, perms) >= *exact);
    }
}

TEST_CASE("runtime exponents and constant validation") {
    SECTION("paper constants stay strictly below 2") {
        auto [b1, b2] = runtime_exponent_bases(Rational(1, 1000), Rational(1, 1000),
                                               Rational(1, 1000));
        REQUIRE(b1 < 2);
        REQUIRE(b2 < 2);
        HighPrec margin = 2 - std::max(b1, b2);
        REQUIRE(margin > HighPrec("0.00001"));  // delta = 1/100000
    }
    SECTION("sigma = 0 removes the speedup entirely") {
        auto [b1, b2] = runtime_exponent_bases(Rational(0), Rational(1, 1000),
                                               Rational(1, 1000));
        using boost::multiprecision::abs;
        REQUIRE(abs(b2 - 2) < HighPrec("1e-40"));
        REQUIRE(b1 < 2);
    }
    SECTION("entropy values") {
        using boost::multiprecision::abs;
        REQUIRE(abs(binary_entropy(Rational(1, 2)) - 1) < HighPrec("1e-40"));
        REQUIRE(abs(binary_entropy(Rational(1, 3)) - HighPrec("0.918295834054489593")) <
                HighPrec("1e-6"));
        REQUIRE_THROWS_AS(binary_entropy(Rational(1)), std::domain_error);
    }
    SECTION("the published kappa and beta admit a positive epsilon") {
        auto eps = validate_constants(Rational(1, 10000000), Rational(1, 100000));
        REQUIRE(eps.has_value());
        REQUIRE(*eps >= Rational(1, 10000000));  // the published choice is valid
    }
}
