#pragma once

#include <cstdint>
#include <thread>

#include "tripart/rng.hpp"
#include "tripart/subsetconv.hpp"

// The deliberately broken three-way partition detector and its
// random-permutation correction.
//
// Universe layout: with n = p + 3dq, block j in [dq] occupies positions
// {3j, 3j+1, 3j+2} and the remaining p positions are [n] \ [3dq].  A set is
// bad when it contains a whole block; the broken algorithm sees only good
// sets, evaluating the trilinear form of P^(x)p (x) (Q^(x)d)^(x)q through the
// border factors of P and a supplied rank decomposition of Q^(x)d.  Every
// partition whose three sets are good is counted exactly; partitions with a
// bad set are invisible, which the wrapper repairs by rerunning under
// uniformly random relabelings of the universe.

namespace tripart {

struct BlockStructure {
    unsigned n = 0, p = 0, d = 1, q = 0;

    BlockStructure() = default;
    BlockStructure(unsigned p_, unsigned d_, unsigned q_)
        : n(p_ + 3 * d_ * q_), p(p_), d(d_), q(q_) {
        if (d < 1) throw std::invalid_argument("BlockStructure: d must be >= 1");
        if (n > 63) throw std::invalid_argument("BlockStructure: universe above 63");
    }
    static BlockStructure for_universe(unsigned n, unsigned d, unsigned q) {
        if (3ull * d * q > n)
            throw std::invalid_argument("BlockStructure: 3dq exceeds n");
        return BlockStructure(n - 3 * d * q, d, q);
    }

    unsigned blocks() const { return d * q; }
    // 2^p * 7^(dq); fits in 64 bits since it is at most 2^n <= 2^63
    std::uint64_t good_count() const {
        std::uint64_t c = 1ull << p;
        for (unsigned j = 0; j < blocks(); ++j) c *= 7;
        return c;
    }
};

inline bool is_good(std::uint64_t mask, const BlockStructure& bs) {
    for (unsigned j = 0; j < bs.blocks(); ++j)
        if (((mask >> (3 * j)) & 0x7) == 0x7) return false;
    return true;
}

// The mixed-base bijection from good subsets onto [2^p * 7^(dq)]: base-7
// digits for the blocks (low blocks least significant), the p free positions
// as the binary high part.
inline std::uint64_t mixed_base_index(std::uint64_t mask, const BlockStructure& bs) {
    if (!is_good(mask, bs))
        throw std::invalid_argument("mixed_base_index: bad set");
    std::uint64_t low = 0, weight = 1;
    for (unsigned j = 0; j < bs.blocks(); ++j) {
        low += weight * ((mask >> (3 * j)) & 0x7);
        weight *= 7;
    }
    std::uint64_t high = mask >> (3 * bs.blocks());
    return high * weight + low;
}

inline std::uint64_t mixed_base_inverse(std::uint64_t index, const BlockStructure& bs) {
    if (index >= bs.good_count())
        throw std::out_of_range("mixed_base_inverse: index out of range");
    std::uint64_t block_span = 1;
    for (unsigned j = 0; j < bs.blocks(); ++j) block_span *= 7;
    std::uint64_t low = index % block_span, high = index / block_span;
    std::uint64_t mask = high << (3 * bs.blocks());
    for (unsigned j = 0; j < bs.blocks(); ++j) {
        mask |= (low % 7) << (3 * j);
        low /= 7;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Plug-in rank decompositions of Q^(x)d
// ---------------------------------------------------------------------------

template <class R>
struct QDecomposition {
    unsigned d = 1;
    Matrix<R> A, B, C;  // 7^d x r each

    std::size_t rank() const { return A.cols; }

    // K(A,B,C) = Q^(x)d, checked once and cached
    bool verify() const {
        if (state_ == 0) {
            bool ok = A.cols == B.cols && B.cols == C.cols;
            std::size_t dim = 1;
            for (unsigned i = 0; i < d; ++i) dim *= 7;
            ok = ok && A.rows == dim && B.rows == dim && C.rows == dim &&
                 A.cols >= dim;
            if (ok) {
                RankDecomposition<R> rd{A, B, C};
                ok = verify_rank_decomposition(rd, build_Q_power(A.ring, d));
            }
            state_ = ok ? 1 : -1;
        }
        return state_ == 1;
    }

  private:
    mutable int state_ = 0;
};

// One rank-1 term per support element: r = 24^d.
template <class R>
QDecomposition<R> trivial_q_decomposition(const R& ring, unsigned d = 1) {
    auto rd = trivial_rank_decomposition(build_Q_power(ring, d));
    QDecomposition<R> out;
    out.d = d;
    out.A = std::move(rd.A);
    out.B = std::move(rd.B);
    out.C = std::move(rd.C);
    return out;
}

// ---------------------------------------------------------------------------
// The broken algorithm
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kTagField = 0xf1e1d;
constexpr std::uint64_t kTagPhi = 0x9a1;
constexpr std::uint64_t kTagPsi = 0x9a2;
constexpr std::uint64_t kTagChi = 0x9a3;
constexpr std::uint64_t kTagPerm = 0x9e4;
constexpr std::uint64_t kTagRepeat = 0x9e5;

// indicator of the good members of F on mixed-base indices, with a caller
// supplied weight per index
template <class R, class Weight>
std::vector<typename R::Elem> good_vector(const R& ring, const SetFamily& F,
                                          const BlockStructure& bs, Weight&& w) {
    std::vector<typename R::Elem> v(bs.good_count(), ring.zero());
    for (auto mask : F.members)
        if (is_good(mask, bs)) {
            std::uint64_t idx = mixed_base_index(mask, bs);
            v[idx] = w(idx);
        }
    return v;
}

// factor list ((X_eps^T)^(x)p (x) (X_Q^T)^(x)q) over the eps-ring
template <class ER, class RQ, class Lift>
std::vector<Matrix<ER>> broken_factors(const ER& er, const Matrix<ER>& p_factor,
                                       const Matrix<RQ>& q_mat,
                                       const BlockStructure& bs, Lift&& lift_q) {
    std::vector<Matrix<ER>> fs;
    fs.reserve(bs.p + bs.q);
    for (unsigned i = 0; i < bs.p; ++i) fs.push_back(p_factor);
    if (bs.q > 0) {
        auto lifted = map_matrix(er, q_mat.transpose(), lift_q);
        for (unsigned i = 0; i < bs.q; ++i) fs.push_back(lifted);
    }
    return fs;
}

}  // namespace detail

// Deterministic variant over the rationals with all random scalars set to 1:
// returns exactly the number of triples (X,Y,Z) in F x G x H with
// X, Y, Z disjoint, covering [n], and all three good.
inline BigInt broken_count_rational(const SetFamily& F, const SetFamily& G,
                                    const SetFamily& H, const BlockStructure& bs,
                                    const QDecomposition<RationalRing>& dec,
                                    bool require_verified = true) {
    if (F.n != bs.n || G.n != bs.n || H.n != bs.n)
        throw std::invalid_argument("broken_count_rational: universe mismatch");
    if (bs.q > 0) {
        if (dec.d != bs.d)
            throw std::invalid_argument("broken_count_rational: d mismatch");
        if (require_verified && !dec.verify())
            throw std::invalid_argument("broken_count_rational: unverified decomposition");
    }
    RationalRing ring;
    EpsPolyRing<RationalRing> er(ring, bs.p);
    auto borders = border_P_factors(ring);
    auto lift_p = [&](const Matrix<EpsPolyRing<RationalRing>>& M) {
        return map_matrix(
            er, M, [](const typename EpsPolyRing<RationalRing>::Elem& e) { return e; });
    };
    auto lift_q = [&](const Rational& x) { return er.from_base(x); };
    auto unit = [&](std::uint64_t) { return ring.one(); };

    auto fsA = detail::broken_factors(er, lift_p(borders.A.transpose()), dec.A, bs,
                                      lift_q);
    auto fsB = detail::broken_factors(er, lift_p(borders.B.transpose()), dec.B, bs,
                                      lift_q);
    auto fsC = detail::broken_factors(er, lift_p(borders.C.transpose()), dec.C, bs,
                                      lift_q);

    auto lift_vec = [&](const std::vector<Rational>& v) {
        return detail::lift_vector(er, v);
    };
    auto ft = yates_matvec(er, fsA, lift_vec(detail::good_vector(ring, F, bs, unit))).out;
    auto gt = yates_matvec(er, fsB, lift_vec(detail::good_vector(ring, G, bs, unit))).out;
    auto ht = yates_matvec(er, fsC, lift_vec(detail::good_vector(ring, H, bs, unit))).out;

    auto acc = er.zero();
    for (std::size_t x = 0; x < ft.size(); ++x)
        er.add_in(acc, er.mul(ft[x], er.mul(gt[x], ht[x])));
    Rational gamma = er.coeff(acc, bs.p);
    if (denominator(gamma) != 1)
        throw std::logic_error("broken_count_rational: non-integer output");
    return numerator(gamma);
}

template <unsigned P>
struct BrokenDetectResult {
    bool nonzero = false;
    std::vector<std::uint8_t> modulus;  // of the degree-n extension field used
};

// The randomized detector over GF(P): draws independent uniform field weights
// per touched index, evaluates Gamma in the degree-n extension, reports
// Gamma != 0.  Never answers true when no good partition exists; answers true
// with probability at least 1 - 3/P^n when one does.
template <unsigned P>
BrokenDetectResult<P> broken_detect_field(const SetFamily& F, const SetFamily& G,
                                          const SetFamily& H,
                                          const BlockStructure& bs,
                                          const QDecomposition<Gf<P>>& dec,
                                          std::uint64_t seed,
                                          const ExtField<P>* field = nullptr,
                                          bool require_verified = true) {
    if (F.n != bs.n || G.n != bs.n || H.n != bs.n)
        throw std::invalid_argument("broken_detect_field: universe mismatch");
    if (bs.q > 0) {
        if (dec.d != bs.d)
            throw std::invalid_argument("broken_detect_field: d mismatch");
        if (require_verified && !dec.verify())
            throw std::invalid_argument("broken_detect_field: unverified decomposition");
    }
    ExtField<P> local;
    if (!field) {
        local = ExtField<P>::with_degree(bs.n, derive_seed(seed, detail::kTagField));
        field = &local;
    }
    const ExtField<P>& E = *field;
    EpsPolyRing<ExtField<P>> er(E, bs.p);

    auto borders = border_P_factors(E);
    auto lift_p = [&](const Matrix<EpsPolyRing<ExtField<P>>>& M) {
        return map_matrix(
            er, M, [](const typename EpsPolyRing<ExtField<P>>::Elem& e) { return e; });
    };
    auto lift_q = [&](std::uint8_t x) { return er.from_base(E.embed(x)); };

    auto weight = [&](std::uint64_t tag) {
        return [&, tag](std::uint64_t idx) {
            SplitMix64 g(derive_seed(seed, tag, idx));
            return random_element(E, g);
        };
    };

    auto fsA = detail::broken_factors(er, lift_p(borders.A.transpose()), dec.A, bs,
                                      lift_q);
    auto fsB = detail::broken_factors(er, lift_p(borders.B.transpose()), dec.B, bs,
                                      lift_q);
    auto fsC = detail::broken_factors(er, lift_p(borders.C.transpose()), dec.C, bs,
                                      lift_q);

    auto ft = yates_matvec(er, fsA,
                           detail::lift_vector(
                               er, detail::good_vector(E, F, bs, weight(detail::kTagPhi))))
                  .out;
    auto gt = yates_matvec(er, fsB,
                           detail::lift_vector(
                               er, detail::good_vector(E, G, bs, weight(detail::kTagPsi))))
                  .out;
    auto ht = yates_matvec(er, fsC,
                           detail::lift_vector(
                               er, detail::good_vector(E, H, bs, weight(detail::kTagChi))))
                  .out;

    auto acc = er.zero();
    for (std::size_t x = 0; x < ft.size(); ++x)
        er.add_in(acc, er.mul(ft[x], er.mul(gt[x], ht[x])));
    BrokenDetectResult<P> out;
    out.nonzero = !E.is_zero(er.coeff(acc, bs.p));
    out.modulus = E.modulus();
    return out;
}

struct WrapperResult {
    bool found = false;
    std::uint64_t repeats_used = 0;  // index of the first hit + 1, or s
    std::vector<std::uint8_t> modulus;
};

// s independent repeats, each with a fresh uniform permutation of [n] and a
// fresh weight stream; one-sided (false positives impossible).  The answer
// and repeats_used depend only on the seed, never on the thread count: the
// reported hit is always the smallest repeat index that detects.
template <unsigned P>
WrapperResult random_permutation_wrapper(const SetFamily& F, const SetFamily& G,
                                         const SetFamily& H,
                                         const BlockStructure& bs,
                                         const QDecomposition<Gf<P>>& dec,
                                         std::uint64_t s, std::uint64_t seed,
                                         unsigned threads = 1) {
    if (bs.q > 0 && !dec.verify())
        throw std::invalid_argument("random_permutation_wrapper: unverified decomposition");
    auto field = ExtField<P>::with_degree(bs.n, derive_seed(seed, detail::kTagField));
    WrapperResult out;
    out.modulus = field.modulus();
    out.repeats_used = s;
    if (threads < 1) threads = 1;

    auto run_one = [&](std::uint64_t rep) {
        auto perm = random_permutation(bs.n, derive_seed(seed, detail::kTagPerm, rep));
        auto r = broken_detect_field<P>(permute_family(F, perm),
                                        permute_family(G, perm),
                                        permute_family(H, perm), bs, dec,
                                        derive_seed(seed, detail::kTagRepeat, rep),
                                        &field, false);
        return r.nonzero;
    };

    const std::uint64_t block = std::max<std::uint64_t>(threads, 8);
    for (std::uint64_t base = 0; base < s; base += block) {
        const std::uint64_t hi = std::min(s, base + block);
        std::vector<char> hit(hi - base, 0);
        if (threads == 1) {
            for (std::uint64_t r = base; r < hi; ++r) hit[r - base] = run_one(r);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (std::uint64_t r = base + t; r < hi; r += threads)
                        hit[r - base] = run_one(r);
                });
            for (auto& th : pool) th.join();
        }
        for (std::uint64_t r = base; r < hi; ++r)
            if (hit[r - base]) {
                out.found = true;
                out.repeats_used = r + 1;
                return out;
            }
    }
    return out;
}

}  // namespace tripart
