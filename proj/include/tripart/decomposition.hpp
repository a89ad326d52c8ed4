#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "tripart/rng.hpp"
#include "tripart/tensor.hpp"

// Rank over a field, witnesses for tensor rank and border rank, conciseness
// and tightness.  Rank and border rank themselves are not computed (NP-hard
// in general); decompositions are verified against their target tensors.

namespace tripart {

// Matrix rank by Gaussian elimination over a field ring.
template <class R>
std::size_t rank_over_field(const Matrix<R>& M_in) {
    const R& ring = M_in.ring;
    Matrix<R> M = M_in;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < M.cols && rank < M.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < M.rows && ring.is_zero(M.at(pivot, col))) ++pivot;
        if (pivot == M.rows) continue;
        for (std::size_t j = 0; j < M.cols; ++j)
            std::swap(M.at(rank, j), M.at(pivot, j));
        auto piv_inv = ring.inv(M.at(rank, col));
        for (std::size_t i = rank + 1; i < M.rows; ++i) {
            if (ring.is_zero(M.at(i, col))) continue;
            auto factor = ring.mul(M.at(i, col), piv_inv);
            for (std::size_t j = col; j < M.cols; ++j)
                M.at(i, j) = ring.sub(M.at(i, j), ring.mul(factor, M.at(rank, j)));
        }
        ++rank;
    }
    return rank;
}

// Rank over the rationals: clear denominators row by row, then fraction-free
// (Bareiss) elimination over the integers, so intermediate entries stay
// minors of the scaled matrix instead of growing through gcd churn.
inline std::size_t rank_over_field(const Matrix<RationalRing>& M_in) {
    const std::size_t rows = M_in.rows, cols = M_in.cols;
    std::vector<BigInt> m(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        BigInt lcm = 1;
        for (std::size_t j = 0; j < cols; ++j) {
            BigInt den = denominator(M_in.at(i, j));
            lcm = boost::multiprecision::lcm(lcm, den);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const Rational& x = M_in.at(i, j);
            m[i * cols + j] = numerator(x) * (lcm / denominator(x));
        }
    }
    auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * cols + j]; };
    BigInt prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(rank, j), at(pivot, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                at(i, j) = (at(rank, col) * at(i, j) - at(i, col) * at(rank, j)) / prev;
            at(i, col) = 0;
        }
        prev = at(rank, col);
        ++rank;
    }
    return rank;
}

// rk S^[i] equals the axis length for every axis
template <class R>
bool is_concise(const Tensor3<R>& T) {
    return rank_over_field(flatten(T, 1)) == T.m &&
           rank_over_field(flatten(T, 2)) == T.n &&
           rank_over_field(flatten(T, 3)) == T.p;
}

// ---------------------------------------------------------------------------
// Rank decompositions
// ---------------------------------------------------------------------------

template <class R>
struct RankDecomposition {
    Matrix<R> A, B, C;  // shapes m x r, n x r, p x r
    std::size_t rank() const { return A.cols; }
};

template <class R>
bool verify_rank_decomposition(const RankDecomposition<R>& D, const Tensor3<R>& T) {
    if (D.A.cols != D.B.cols || D.B.cols != D.C.cols) return false;
    if (D.A.rows != T.m || D.B.rows != T.n || D.C.rows != T.p) return false;
    return equal(kruskal(D.A, D.B, D.C), T);
}

// One rank-1 term per support element of a 0/1 tensor; r = |supp T|.
template <class R>
RankDecomposition<R> trivial_rank_decomposition(const Tensor3<R>& T) {
    const R& ring = T.ring;
    for (const auto& e : T.a)
        if (!ring.is_zero(e) && !ring.is_one(e))
            throw std::invalid_argument(
                "trivial_rank_decomposition: entries must be 0 or 1");
    auto supp = support(T);
    RankDecomposition<R> D{Matrix<R>(ring, T.m, supp.size()),
                           Matrix<R>(ring, T.n, supp.size()),
                           Matrix<R>(ring, T.p, supp.size())};
    for (std::size_t l = 0; l < supp.size(); ++l) {
        D.A.at(supp[l][0], l) = ring.one();
        D.B.at(supp[l][1], l) = ring.one();
        D.C.at(supp[l][2], l) = ring.one();
    }
    return D;
}

// ---------------------------------------------------------------------------
// Border decompositions: K(A_eps, B_eps, C_eps) = eps^d T + eps^(d+1) E_eps
// ---------------------------------------------------------------------------

template <class R>
struct BorderDecomposition {
    using ERing = EpsPolyRing<R>;
    Matrix<ERing> A, B, C;
    unsigned degree = 0;                  // d
    std::optional<Tensor3<ERing>> error;  // E_eps, when known
    std::size_t rank() const { return A.cols; }
};

// Checks the defining identity coefficient by coefficient over the
// eps-polynomial ring with bound 2d+2: coefficients below d vanish, the
// coefficient of eps^d is T, and when the error tensor is supplied the
// coefficients d+1 .. 2d+2 match eps^(d+1) E_eps as well.  Entry polynomials
// of degree above d in A, B, C are rejected.
template <class R>
bool verify_border_decomposition(const BorderDecomposition<R>& D,
                                 const Tensor3<R>& T) {
    if (D.A.cols != D.B.cols || D.B.cols != D.C.cols) return false;
    if (D.A.rows != T.m || D.B.rows != T.n || D.C.rows != T.p) return false;
    const unsigned d = D.degree;
    for (const auto* M : {&D.A, &D.B, &D.C})
        for (const auto& e : M->a)
            if (M->ring.degree(e) > static_cast<int>(d)) return false;
    EpsPolyRing<R> check(T.ring, 2 * d + 2);
    auto lift = [&](const Matrix<EpsPolyRing<R>>& M) {
        return map_matrix(check, M,
                          [](const typename EpsPolyRing<R>::Elem& e) { return e; });
    };
    auto K = kruskal(lift(D.A), lift(D.B), lift(D.C));
    for (std::size_t i = 0; i < T.m; ++i)
        for (std::size_t j = 0; j < T.n; ++j)
            for (std::size_t k = 0; k < T.p; ++k) {
                const auto& entry = K.at(i, j, k);
                for (unsigned t = 0; t < d; ++t)
                    if (!T.ring.is_zero(check.coeff(entry, t))) return false;
                if (!T.ring.equal(check.coeff(entry, d), T.at(i, j, k)))
                    return false;
                if (D.error) {
                    const auto& err = D.error->at(i, j, k);
                    for (unsigned t = d + 1; t <= 2 * d + 2; ++t) {
                        unsigned et = t - d - 1;
                        auto want = et < err.c.size() ? err.c[et] : T.ring.zero();
                        if (!T.ring.equal(check.coeff(entry, t), want)) return false;
                    }
                }
            }
    return true;
}

// ---------------------------------------------------------------------------
// Tightness: injective mu, nu, pi with mu(i)+nu(j)+pi(k) = 0 on the support
// ---------------------------------------------------------------------------

struct TightnessWitness {
    std::vector<long long> mu, nu, pi;
};

namespace detail {

inline bool injective(const std::vector<long long>& v) {
    std::vector<long long> s = v;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

}  // namespace detail

template <class R>
bool verify_tightness(const TightnessWitness& w, const Tensor3<R>& T) {
    if (w.mu.size() != T.m || w.nu.size() != T.n || w.pi.size() != T.p)
        return false;
    if (!detail::injective(w.mu) || !detail::injective(w.nu) ||
        !detail::injective(w.pi))
        return false;
    for (const auto& s : support(T))
        if (w.mu[s[0]] + w.nu[s[1]] + w.pi[s[2]] != 0) return false;
    return true;
}

// Bounded search for a tightness witness.  The zero-sum conditions on the
// support form a homogeneous linear system; its rational kernel basis is
// scaled to primitive integer vectors, and small integer combinations of the
// basis are enumerated (exhaustive boxes first, then seeded random draws for
// kernels too large to sweep), keeping the first combination whose values
// stay within [-bound, bound] and are injective on each axis.
template <class R>
std::optional<TightnessWitness> find_tightness_witness(const Tensor3<R>& T,
                                                       long long bound) {
    if (bound < 1) throw std::invalid_argument("find_tightness_witness: bound");
    const std::size_t vars = T.m + T.n + T.p;
    auto supp = support(T);

    // row-reduce the constraint matrix over the rationals
    RationalRing q;
    Matrix<RationalRing> M(q, supp.size(), vars);
    for (std::size_t r = 0; r < supp.size(); ++r) {
        M.at(r, supp[r][0]) = q.one();
        M.at(r, T.m + supp[r][1]) = q.one();
        M.at(r, T.m + T.n + supp[r][2]) = q.one();
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < vars && rank < M.rows; ++col) {
        std::size_t pr = rank;
        while (pr < M.rows && M.at(pr, col).is_zero()) ++pr;
        if (pr == M.rows) continue;
        for (std::size_t j = 0; j < vars; ++j) std::swap(M.at(rank, j), M.at(pr, j));
        Rational inv = Rational(1) / M.at(rank, col);
        for (std::size_t j = col; j < vars; ++j) M.at(rank, j) *= inv;
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == rank || M.at(i, col).is_zero()) continue;
            Rational f = M.at(i, col);
            for (std::size_t j = col; j < vars; ++j)
                M.at(i, j) -= f * M.at(rank, j);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(vars, false);
    for (auto c : pivot_col) is_pivot[c] = true;

    // integer kernel basis, one vector per free column
    std::vector<std::vector<long long>> basis;
    for (std::size_t fc = 0; fc < vars; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Rational> v(vars, Rational(0));
        v[fc] = 1;
        for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -M.at(r, fc);
        BigInt lcm = 1;
        for (const auto& x : v) lcm = boost::multiprecision::lcm(lcm, denominator(x));
        std::vector<BigInt> iv(vars);
        BigInt g = 0;
        for (std::size_t i = 0; i < vars; ++i) {
            iv[i] = numerator(v[i]) * (lcm / denominator(v[i]));
            g = boost::multiprecision::gcd(g, iv[i]);
        }
        if (g.is_zero()) continue;
        std::vector<long long> ivs(vars);
        for (std::size_t i = 0; i < vars; ++i)
            ivs[i] = static_cast<long long>(iv[i] / g);
        basis.push_back(std::move(ivs));
    }
    if (basis.empty()) return std::nullopt;
    const std::size_t dim = basis.size();

    auto candidate = [&](const std::vector<long long>& coeffs)
        -> std::optional<TightnessWitness> {
        std::vector<long long> v(vars, 0);
        for (std::size_t t = 0; t < dim; ++t) {
            if (coeffs[t] == 0) continue;
            for (std::size_t i = 0; i < vars; ++i) v[i] += coeffs[t] * basis[t][i];
        }
        for (long long x : v)
            if (x > bound || x < -bound) return std::nullopt;
        TightnessWitness w;
        w.mu.assign(v.begin(), v.begin() + T.m);
        w.nu.assign(v.begin() + T.m, v.begin() + T.m + T.n);
        w.pi.assign(v.begin() + T.m + T.n, v.end());
        if (!detail::injective(w.mu) || !detail::injective(w.nu) ||
            !detail::injective(w.pi))
            return std::nullopt;
        return w;
    };

    // exhaustive boxes of growing radius while affordable
    const std::uint64_t box_budget = 2'000'000;
    long long radius_done = 0;
    for (long long radius = 1; radius <= bound; ++radius) {
        double combos = 1;
        for (std::size_t t = 0; t < dim; ++t) combos *= 2.0 * radius + 1.0;
        if (combos > static_cast<double>(box_budget)) break;
        std::vector<long long> c(dim, -radius);
        for (;;) {
            bool on_shell = false;
            for (auto x : c)
                if (x > radius_done || x < -radius_done) on_shell = true;
            if (on_shell)
                if (auto w = candidate(c)) return w;
            std::size_t t = 0;
            while (t < dim && c[t] == radius) c[t++] = -radius;
            if (t == dim) break;
            ++c[t];
        }
        radius_done = radius;
    }

    // seeded random combinations for larger kernels
    SplitMix64 gen(derive_seed(0x7167u, dim, static_cast<std::uint64_t>(bound)));
    for (std::uint64_t attempt = 0; attempt < 4'000'000; ++attempt) {
        long long radius = 1 + static_cast<long long>(attempt / 500'000);
        std::vector<long long> c(dim);
        for (auto& x : c)
            x = static_cast<long long>(bounded(gen, 2 * radius + 1)) - radius;
        if (auto w = candidate(c)) return w;
    }
    return std::nullopt;
}

}  // namespace tripart
