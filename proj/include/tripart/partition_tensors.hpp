#pragma once

#include "tripart/decomposition.hpp"
#include "tripart/tensor.hpp"

// The 2x2x2 three-way partitioning tensor P, its dense Kronecker powers, the
// 7x7x7 tensor Q cut out of P^(x)3, and the degree-1 border decomposition of
// P used by the fast convolution and detection pipelines.
//
// Subset indexing convention: an n-bit mask x = sum_j 2^j x_j names the set
// {j : x_j = 1}, and P^(x)n has a 1 at (x, y, z) exactly when the three sets
// partition [n].

namespace tripart {

template <class R>
Tensor3<R> build_P(const R& ring) {
    Tensor3<R> P(ring, 2, 2, 2);
    P.at(0, 0, 1) = ring.one();
    P.at(0, 1, 0) = ring.one();
    P.at(1, 0, 0) = ring.one();
    return P;
}

// Dense P^(x)n; n <= 8 keeps the largest power at 2^24 entries.
template <class R>
Tensor3<R> build_P_power(const R& ring, unsigned n) {
    if (n < 1 || n > 8)
        throw std::invalid_argument("build_P_power: need 1 <= n <= 8 for dense storage");
    return kronecker_power(build_P(ring), n);
}

// Q: zero the entries (0,0,7), (0,7,0), (7,0,0) of P^(x)3, then remove index
// 7 from every axis.  7x7x7, support size 24.
template <class R>
Tensor3<R> build_Q(const R& ring) {
    auto T = punch_holes(build_P_power(ring, 3),
                         {{0, 0, 7}, {0, 7, 0}, {7, 0, 0}});
    Tensor3<R> Q(ring, 7, 7, 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j)
            for (std::size_t k = 0; k < 7; ++k) Q.at(i, j, k) = T.at(i, j, k);
    return Q;
}

// Dense Q^(x)d for verifying plug-in decompositions; d <= 2 at desk scale.
template <class R>
Tensor3<R> build_Q_power(const R& ring, unsigned d) {
    if (d < 1 || d > 2)
        throw std::invalid_argument("build_Q_power: need 1 <= d <= 2 for dense storage");
    return kronecker_power(build_Q(ring), d);
}

// The border-rank-2 witness for P:
//
//   A_eps = [1 1]   B_eps = [1 1]   C_eps = [1 -1]
//           [e 0]           [e 0]           [e  0]
//
// with K(A_eps, B_eps, C_eps) = eps P + eps^2 E_eps, degree d = 1.
template <class R>
BorderDecomposition<R> border_P_factors(const R& ring) {
    EpsPolyRing<R> er(ring, 2);
    BorderDecomposition<R> D;
    D.degree = 1;
    D.A = Matrix<EpsPolyRing<R>>(er, 2, 2);
    D.A.at(0, 0) = er.one();
    D.A.at(0, 1) = er.one();
    D.A.at(1, 0) = er.eps(1);
    D.B = D.A;
    D.C = Matrix<EpsPolyRing<R>>(er, 2, 2);
    D.C.at(0, 0) = er.one();
    D.C.at(0, 1) = er.neg(er.one());
    D.C.at(1, 0) = er.eps(1);

    Tensor3<EpsPolyRing<R>> E(er, 2, 2, 2);
    E.at(0, 1, 1) = er.one();
    E.at(1, 0, 1) = er.one();
    E.at(1, 1, 0) = er.one();
    E.at(1, 1, 1) = er.eps(1);
    D.error = std::move(E);
    return D;
}

}  // namespace tripart
