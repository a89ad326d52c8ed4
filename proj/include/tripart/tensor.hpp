#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tripart/ring.hpp"

// Dense matrices and order-3 tensors over a ring object.  Index convention
// throughout: a tensor entry lives at (level i, row j, column k), stored
// row-major within each level, levels consecutive.  All values are immutable
// after construction in the sense that every operation returns a fresh
// object.

namespace tripart {

template <class R>
struct Matrix {
    using Ring = R;
    using Elem = typename R::Elem;

    R ring;
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(R r, std::size_t m, std::size_t n)
        : ring(std::move(r)), rows(m), cols(n), a(m * n, ring.zero()) {}

    Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Matrix identity(R r, std::size_t n) {
        Matrix m(r, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.ring.one();
        return m;
    }

    // rows x cols from a row-major list of small integers
    static Matrix from_ints(R r, std::size_t m, std::size_t n,
                            std::initializer_list<long long> vals) {
        if (vals.size() != m * n)
            throw std::invalid_argument("Matrix::from_ints: size mismatch");
        Matrix out(r, m, n);
        std::size_t idx = 0;
        for (long long v : vals) out.a[idx++] = out.ring.from_int(v);
        return out;
    }

    Matrix transpose() const {
        Matrix t(ring, cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }
};

template <class R>
struct Tensor3 {
    using Ring = R;
    using Elem = typename R::Elem;

    R ring;
    std::size_t m = 0, n = 0, p = 0;  // levels, rows, columns
    std::vector<Elem> a;

    Tensor3() = default;
    Tensor3(R r, std::size_t m_, std::size_t n_, std::size_t p_)
        : ring(std::move(r)), m(m_), n(n_), p(p_), a(m_ * n_ * p_, ring.zero()) {}

    Elem& at(std::size_t i, std::size_t j, std::size_t k) {
        return a[(i * n + j) * p + k];
    }
    const Elem& at(std::size_t i, std::size_t j, std::size_t k) const {
        return a[(i * n + j) * p + k];
    }

    static Tensor3 from_ints(R r, std::size_t m, std::size_t n, std::size_t p,
                             std::initializer_list<long long> vals) {
        if (vals.size() != m * n * p)
            throw std::invalid_argument("Tensor3::from_ints: size mismatch");
        Tensor3 out(r, m, n, p);
        std::size_t idx = 0;
        for (long long v : vals) out.a[idx++] = out.ring.from_int(v);
        return out;
    }
};

template <class R>
bool equal(const Matrix<R>& x, const Matrix<R>& y) {
    if (x.rows != y.rows || x.cols != y.cols) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!x.ring.equal(x.a[i], y.a[i])) return false;
    return true;
}

template <class R>
bool equal(const Tensor3<R>& x, const Tensor3<R>& y) {
    if (x.m != y.m || x.n != y.n || x.p != y.p) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!x.ring.equal(x.a[i], y.a[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

template <class R>
Matrix<R> mat_mul(const Matrix<R>& A, const Matrix<R>& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    const R& ring = A.ring;
    Matrix<R> C(ring, A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const auto& aik = A.at(i, k);
            if (ring.is_zero(aik)) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                if (!ring.is_zero(B.at(k, j)))
                    ring.add_in(C.at(i, j), ring.mul(aik, B.at(k, j)));
        }
    return C;
}

template <class R>
std::vector<typename R::Elem> mat_vec(const Matrix<R>& A,
                                      const std::vector<typename R::Elem>& x) {
    if (A.cols != x.size()) throw std::invalid_argument("mat_vec: length mismatch");
    const R& ring = A.ring;
    std::vector<typename R::Elem> y(A.rows, ring.zero());
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            if (!ring.is_zero(A.at(i, j)) && !ring.is_zero(x[j]))
                ring.add_in(y[i], ring.mul(A.at(i, j), x[j]));
    return y;
}

// (A (x) B)_{iu+k, jv+l} = A_{i,j} B_{k,l}
template <class R>
Matrix<R> kronecker(const Matrix<R>& A, const Matrix<R>& B) {
    const R& ring = A.ring;
    Matrix<R> C(ring, A.rows * B.rows, A.cols * B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) {
            const auto& aij = A.at(i, j);
            if (ring.is_zero(aij)) continue;
            for (std::size_t k = 0; k < B.rows; ++k)
                for (std::size_t l = 0; l < B.cols; ++l)
                    C.at(i * B.rows + k, j * B.cols + l) = ring.mul(aij, B.at(k, l));
        }
    return C;
}

// (S (x) T)_{iu+a, jv+b, kw+c} = S_{i,j,k} T_{a,b,c}
template <class R>
Tensor3<R> kronecker(const Tensor3<R>& S, const Tensor3<R>& T) {
    const R& ring = S.ring;
    Tensor3<R> U(ring, S.m * T.m, S.n * T.n, S.p * T.p);
    for (std::size_t i = 0; i < S.m; ++i)
        for (std::size_t j = 0; j < S.n; ++j)
            for (std::size_t k = 0; k < S.p; ++k) {
                const auto& s = S.at(i, j, k);
                if (ring.is_zero(s)) continue;
                for (std::size_t a = 0; a < T.m; ++a)
                    for (std::size_t b = 0; b < T.n; ++b)
                        for (std::size_t c = 0; c < T.p; ++c)
                            U.at(i * T.m + a, j * T.n + b, k * T.p + c) =
                                ring.mul(s, T.at(a, b, c));
            }
    return U;
}

template <class Z>
Z kronecker_power(const Z& S, unsigned n) {
    if (n < 1) throw std::invalid_argument("kronecker_power: n must be >= 1");
    Z out = S;
    for (unsigned i = 1; i < n; ++i) out = kronecker(out, S);
    return out;
}

// Kruskal product: T_{i,j,k} = sum_l A_{i,l} B_{j,l} C_{k,l}
template <class R>
Tensor3<R> kruskal(const Matrix<R>& A, const Matrix<R>& B, const Matrix<R>& C) {
    if (A.cols != B.cols || B.cols != C.cols)
        throw std::invalid_argument("kruskal: column counts differ");
    const R& ring = A.ring;
    Tensor3<R> T(ring, A.rows, B.rows, C.rows);
    for (std::size_t l = 0; l < A.cols; ++l)
        for (std::size_t i = 0; i < A.rows; ++i) {
            const auto& ail = A.at(i, l);
            if (ring.is_zero(ail)) continue;
            for (std::size_t j = 0; j < B.rows; ++j) {
                if (ring.is_zero(B.at(j, l))) continue;
                auto ab = ring.mul(ail, B.at(j, l));
                for (std::size_t k = 0; k < C.rows; ++k)
                    if (!ring.is_zero(C.at(k, l)))
                        ring.add_in(T.at(i, j, k), ring.mul(ab, C.at(k, l)));
            }
        }
    return T;
}

template <class R>
std::vector<typename R::Elem> hadamard(const R& ring,
                                       const std::vector<typename R::Elem>& x,
                                       const std::vector<typename R::Elem>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("hadamard: length mismatch");
    std::vector<typename R::Elem> z;
    z.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z.push_back(ring.mul(x[i], y[i]));
    return z;
}

// Bilinear map w = T[u,v], w_i = sum_{j,k} T_{i,j,k} u_j v_k
template <class R>
std::vector<typename R::Elem> bilinear_map(const Tensor3<R>& T,
                                           const std::vector<typename R::Elem>& u,
                                           const std::vector<typename R::Elem>& v) {
    if (u.size() != T.n || v.size() != T.p)
        throw std::invalid_argument("bilinear_map: length mismatch");
    const R& ring = T.ring;
    std::vector<typename R::Elem> w(T.m, ring.zero());
    for (std::size_t i = 0; i < T.m; ++i)
        for (std::size_t j = 0; j < T.n; ++j) {
            if (ring.is_zero(u[j])) continue;
            for (std::size_t k = 0; k < T.p; ++k)
                if (!ring.is_zero(T.at(i, j, k)) && !ring.is_zero(v[k]))
                    ring.add_in(w[i], ring.mul(T.at(i, j, k), ring.mul(u[j], v[k])));
        }
    return w;
}

// Trilinear form T[f,g,h]
template <class R>
typename R::Elem trilinear_form(const Tensor3<R>& T,
                                const std::vector<typename R::Elem>& f,
                                const std::vector<typename R::Elem>& g,
                                const std::vector<typename R::Elem>& h) {
    if (f.size() != T.m || g.size() != T.n || h.size() != T.p)
        throw std::invalid_argument("trilinear_form: length mismatch");
    const R& ring = T.ring;
    auto acc = ring.zero();
    for (std::size_t i = 0; i < T.m; ++i) {
        if (ring.is_zero(f[i])) continue;
        for (std::size_t j = 0; j < T.n; ++j) {
            if (ring.is_zero(g[j])) continue;
            auto fg = ring.mul(f[i], g[j]);
            for (std::size_t k = 0; k < T.p; ++k)
                if (!ring.is_zero(T.at(i, j, k)) && !ring.is_zero(h[k]))
                    ring.add_in(acc, ring.mul(T.at(i, j, k), ring.mul(fg, h[k])));
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Flattenings and support
// ---------------------------------------------------------------------------

// S^[1]_{i, j*p+k} = S^[2]_{j, k*m+i} = S^[3]_{k, i*n+j} = S_{i,j,k}
template <class R>
Matrix<R> flatten(const Tensor3<R>& S, int axis) {
    Matrix<R> M;
    switch (axis) {
        case 1:
            M = Matrix<R>(S.ring, S.m, S.n * S.p);
            for (std::size_t i = 0; i < S.m; ++i)
                for (std::size_t j = 0; j < S.n; ++j)
                    for (std::size_t k = 0; k < S.p; ++k)
                        M.at(i, j * S.p + k) = S.at(i, j, k);
            break;
        case 2:
            M = Matrix<R>(S.ring, S.n, S.p * S.m);
            for (std::size_t i = 0; i < S.m; ++i)
                for (std::size_t j = 0; j < S.n; ++j)
                    for (std::size_t k = 0; k < S.p; ++k)
                        M.at(j, k * S.m + i) = S.at(i, j, k);
            break;
        case 3:
            M = Matrix<R>(S.ring, S.p, S.m * S.n);
            for (std::size_t i = 0; i < S.m; ++i)
                for (std::size_t j = 0; j < S.n; ++j)
                    for (std::size_t k = 0; k < S.p; ++k)
                        M.at(k, i * S.n + j) = S.at(i, j, k);
            break;
        default:
            throw std::invalid_argument("flatten: axis must be 1, 2 or 3");
    }
    return M;
}

template <class R>
std::vector<std::array<std::size_t, 3>> support(const Tensor3<R>& T) {
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t i = 0; i < T.m; ++i)
        for (std::size_t j = 0; j < T.n; ++j)
            for (std::size_t k = 0; k < T.p; ++k)
                if (!T.ring.is_zero(T.at(i, j, k))) out.push_back({i, j, k});
    return out;
}

// Listed entries set to zero, everything else untouched.
template <class R>
Tensor3<R> punch_holes(const Tensor3<R>& T,
                       const std::vector<std::array<std::size_t, 3>>& coords) {
    Tensor3<R> out = T;
    for (const auto& c : coords) {
        if (c[0] >= T.m || c[1] >= T.n || c[2] >= T.p)
            throw std::out_of_range("punch_holes: coordinate out of range");
        out.at(c[0], c[1], c[2]) = out.ring.zero();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entry-wise ring changes (e.g. lift a GF(2) matrix into an eps-polynomial
// or extension-field matrix).
// ---------------------------------------------------------------------------

template <class R2, class R1, class F>
Matrix<R2> map_matrix(const R2& ring2, const Matrix<R1>& M, F&& f) {
    Matrix<R2> out(ring2, M.rows, M.cols);
    for (std::size_t i = 0; i < M.a.size(); ++i) out.a[i] = f(M.a[i]);
    return out;
}

template <class R2, class R1, class F>
Tensor3<R2> map_tensor(const R2& ring2, const Tensor3<R1>& T, F&& f) {
    Tensor3<R2> out(ring2, T.m, T.n, T.p);
    for (std::size_t i = 0; i < T.a.size(); ++i) out.a[i] = f(T.a[i]);
    return out;
}

}  // namespace tripart
