#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "tripart/partition_tensors.hpp"
#include "tripart/yates.hpp"

// Subset convolution and three-way partition counting through the border
// decomposition of P.  With T = P^(x)n and d = 1, three Yates passes over the
// eps-polynomial ring with bound n compute the bilinear map T[u,v] (whose
// complement is the subset convolution u*v) and the trilinear form T[f,g,h]
// (which over the rationals counts the partition triples exactly).  Bound n
// is enough: every intermediate polynomial coefficient of degree <= n is
// carried exactly, and only {eps^n} is read off.

namespace tripart {

// Dense 2^n vectors are refused above this cap (default 24, overridable with
// the TC_MAX_N environment variable).
inline unsigned max_dense_universe() {
    static const unsigned cap = [] {
        if (const char* s = std::getenv("TC_MAX_N")) {
            long v = std::strtol(s, nullptr, 10);
            if (v >= 1 && v <= 30) return static_cast<unsigned>(v);
        }
        return 24u;
    }();
    return cap;
}

inline void check_dense_universe(unsigned n) {
    if (n > max_dense_universe())
        throw std::length_error("universe size " + std::to_string(n) +
                                " above dense cap " +
                                std::to_string(max_dense_universe()) +
                                " (see TC_MAX_N)");
}

// ---------------------------------------------------------------------------
// Set families as n-bit masks
// ---------------------------------------------------------------------------

struct SetFamily {
    unsigned n = 0;                      // universe size, <= 63
    std::vector<std::uint64_t> members;  // sorted, duplicates removed

    SetFamily() = default;
    SetFamily(unsigned n_, std::vector<std::uint64_t> masks)
        : n(n_), members(std::move(masks)) {
        if (n > 63) throw std::invalid_argument("SetFamily: universe above 63");
        for (auto m : members)
            if (n < 64 && (m >> n) != 0)
                throw std::invalid_argument("SetFamily: mask outside universe");
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    }

    static SetFamily from_sets(unsigned n,
                               const std::vector<std::vector<unsigned>>& sets) {
        std::vector<std::uint64_t> masks;
        masks.reserve(sets.size());
        for (const auto& s : sets) {
            std::uint64_t m = 0;
            for (unsigned e : s) {
                if (e >= n) throw std::invalid_argument("SetFamily: element out of range");
                m |= 1ull << e;
            }
            masks.push_back(m);
        }
        return SetFamily(n, std::move(masks));
    }

    std::size_t size() const { return members.size(); }
    std::uint64_t full_mask() const { return n == 0 ? 0 : (~0ull >> (64 - n)); }
    bool contains(std::uint64_t m) const {
        return std::binary_search(members.begin(), members.end(), m);
    }
};

inline std::uint64_t permute_mask(std::uint64_t m,
                                  const std::vector<unsigned>& perm) {
    std::uint64_t out = 0;
    for (unsigned i = 0; i < perm.size(); ++i)
        if (m & (1ull << i)) out |= 1ull << perm[i];
    return out;
}

inline SetFamily permute_family(const SetFamily& F,
                                const std::vector<unsigned>& perm) {
    std::vector<std::uint64_t> masks;
    masks.reserve(F.size());
    for (auto m : F.members) masks.push_back(permute_mask(m, perm));
    return SetFamily(F.n, std::move(masks));
}

// ---------------------------------------------------------------------------
// Indicator vectors, indexed by subset mask through the binary representation
// ---------------------------------------------------------------------------

template <class R>
struct IndicatorVector {
    R ring;
    unsigned n = 0;
    std::vector<typename R::Elem> v;

    IndicatorVector() = default;
    IndicatorVector(R r, unsigned n_)
        : ring(std::move(r)), n(n_), v(checked_size(n_), ring.zero()) {}

  private:
    static std::size_t checked_size(unsigned n) {
        check_dense_universe(n);
        return std::size_t(1) << n;
    }
};

template <class R>
IndicatorVector<R> indicator(const R& ring, const SetFamily& F) {
    IndicatorVector<R> iv(ring, F.n);
    for (auto m : F.members) iv.v[m] = ring.one();
    return iv;
}

// w-bar_x = w_{complement of x within n bits}
template <class R>
IndicatorVector<R> complement_vector(const IndicatorVector<R>& w) {
    IndicatorVector<R> out(w.ring, w.n);
    const std::uint64_t full = (w.n == 0) ? 0 : (~0ull >> (64 - w.n));
    for (std::uint64_t x = 0; x < w.v.size(); ++x) out.v[x] = w.v[full ^ x];
    return out;
}

// ---------------------------------------------------------------------------
// Border-decomposition evaluation of T = P^(x)n
// ---------------------------------------------------------------------------

namespace detail {

// the three transposed border factors of P and the untransposed A, lifted
// into the eps-ring with bound D
template <class R>
struct BorderFactorSet {
    EpsPolyRing<R> er;
    Matrix<EpsPolyRing<R>> At, Bt, Ct, A;
    explicit BorderFactorSet(const R& ring, unsigned D) : er(ring, D) {
        auto P = border_P_factors(ring);
        auto lift = [&](const Matrix<EpsPolyRing<R>>& M) {
            return map_matrix(er, M,
                              [](const typename EpsPolyRing<R>::Elem& e) { return e; });
        };
        A = lift(P.A);
        At = lift(P.A.transpose());
        Bt = lift(P.B.transpose());
        Ct = lift(P.C.transpose());
    }
};

template <class R>
std::vector<typename EpsPolyRing<R>::Elem> lift_vector(
    const EpsPolyRing<R>& er, const std::vector<typename R::Elem>& x) {
    std::vector<typename EpsPolyRing<R>::Elem> out;
    out.reserve(x.size());
    for (const auto& e : x) out.push_back(er.from_base(e));
    return out;
}

}  // namespace detail

// T[u,v] for T = P^(x)n via the border decomposition: transform u and v,
// take the Hadamard product, transform back, extract {eps^n}.
template <class R>
IndicatorVector<R> partition_bilinear_map(const IndicatorVector<R>& u,
                                          const IndicatorVector<R>& v) {
    if (u.n != v.n || !(u.ring == v.ring))
        throw std::invalid_argument("partition_bilinear_map: operand mismatch");
    const unsigned n = u.n;
    detail::BorderFactorSet<R> F(u.ring, n);
    std::vector<Matrix<EpsPolyRing<R>>> fsB(n, F.Bt), fsC(n, F.Ct), fsA(n, F.A);
    auto uh = yates_matvec(F.er, fsB, detail::lift_vector(F.er, u.v)).out;
    auto vh = yates_matvec(F.er, fsC, detail::lift_vector(F.er, v.v)).out;
    auto wh = hadamard(F.er, uh, vh);
    auto we = yates_matvec(F.er, fsA, wh).out;
    IndicatorVector<R> w(u.ring, n);
    for (std::size_t x = 0; x < w.v.size(); ++x) w.v[x] = F.er.coeff(we[x], n);
    return w;
}

// (u*v)_X = sum_{Y subseteq X} u_Y v_{X\Y}, computed as the complement of
// T[u,v].
template <class R>
IndicatorVector<R> subset_convolution(const IndicatorVector<R>& u,
                                      const IndicatorVector<R>& v) {
    return complement_vector(partition_bilinear_map(u, v));
}

// T[f,g,h] for T = P^(x)n; over the rationals this is exactly the number of
// triples (X,Y,Z) in F x G x H with X, Y, Z disjoint and covering [n], and
// over GF(p) that count reduced mod p.
template <class R>
typename R::Elem trilinear_partition_count(const R& ring, const SetFamily& F,
                                           const SetFamily& G,
                                           const SetFamily& H) {
    if (F.n != G.n || G.n != H.n)
        throw std::invalid_argument("trilinear_partition_count: universe mismatch");
    const unsigned n = F.n;
    if (n == 0)  // the empty universe: one empty partition if all families have {}
        return (F.contains(0) && G.contains(0) && H.contains(0)) ? ring.one()
                                                                 : ring.zero();
    detail::BorderFactorSet<R> Fac(ring, n);
    std::vector<Matrix<EpsPolyRing<R>>> fsA(n, Fac.At), fsB(n, Fac.Bt),
        fsC(n, Fac.Ct);
    auto fh = yates_matvec(Fac.er, fsA,
                           detail::lift_vector(Fac.er, indicator(ring, F).v))
                  .out;
    auto gh = yates_matvec(Fac.er, fsB,
                           detail::lift_vector(Fac.er, indicator(ring, G).v))
                  .out;
    auto hh = yates_matvec(Fac.er, fsC,
                           detail::lift_vector(Fac.er, indicator(ring, H).v))
                  .out;
    auto acc = Fac.er.zero();
    for (std::size_t x = 0; x < fh.size(); ++x)
        Fac.er.add_in(acc, Fac.er.mul(fh[x], Fac.er.mul(gh[x], hh[x])));
    return Fac.er.coeff(acc, n);
}

// ---------------------------------------------------------------------------
// Brute-force oracles (definitionally correct, deliberately independent of
// the border path)
// ---------------------------------------------------------------------------

template <class R>
IndicatorVector<R> brute_subset_convolution(const IndicatorVector<R>& u,
                                            const IndicatorVector<R>& v) {
    if (u.n != v.n || !(u.ring == v.ring))
        throw std::invalid_argument("brute_subset_convolution: operand mismatch");
    if (u.n > 16)
        throw std::length_error("brute_subset_convolution: n above 16");
    const R& ring = u.ring;
    IndicatorVector<R> out(ring, u.n);
    for (std::uint64_t x = 0; x < out.v.size(); ++x) {
        auto acc = ring.zero();
        std::uint64_t y = x;
        for (;;) {
            if (!ring.is_zero(u.v[y]) && !ring.is_zero(v.v[x ^ y]))
                ring.add_in(acc, ring.mul(u.v[y], v.v[x ^ y]));
            if (y == 0) break;
            y = (y - 1) & x;
        }
        out.v[x] = std::move(acc);
    }
    return out;
}

inline std::uint64_t brute_partition_count(const SetFamily& F, const SetFamily& G,
                                           const SetFamily& H) {
    if (F.n != G.n || G.n != H.n)
        throw std::invalid_argument("brute_partition_count: universe mismatch");
    if (F.size() > 10000 || G.size() > 10000 || H.size() > 10000)
        throw std::length_error("brute_partition_count: family above 10^4 sets");
    const std::uint64_t full = F.full_mask();
    std::uint64_t count = 0;
    for (auto x : F.members)
        for (auto y : G.members) {
            if (x & y) continue;
            const std::uint64_t xy = x | y;
            for (auto z : H.members)
                if ((xy & z) == 0 && (xy | z) == full) ++count;
        }
    return count;
}

}  // namespace tripart
