#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tripart/tensor.hpp"

// Multiply a vector by A^(1) (x) A^(2) (x) ... (x) A^(p) without ever
// materializing the product: stage l applies
//
//   A^[l] = I_{n_1...n_{l-1}} (x) A^(l) (x) I_{m_{l+1}...m_p}
//
// as a blocked loop, and A = A^[1] A^[2] ... A^[p].  Stages run right to left
// (A^[p] first) by default.  With rectangular factors the intermediate vector
// may be longer than both input and output; two scratch buffers of the
// maximal stage length are allocated up front and ping-ponged.

namespace tripart {

enum class StageOrder { RightToLeft, LeftToRight };

template <class R>
struct YatesResult {
    std::vector<typename R::Elem> out;
    std::uint64_t mults = 0;  // ring multiplications performed
};

template <class R>
YatesResult<R> yates_matvec(const R& ring,
                            std::span<const Matrix<R>> factors,
                            std::span<const typename R::Elem> x,
                            StageOrder order = StageOrder::RightToLeft) {
    const std::size_t p = factors.size();
    if (p == 0) throw std::invalid_argument("yates_matvec: no factors");
    std::size_t in_len = 1;
    for (const auto& f : factors) in_len *= f.cols;
    if (x.size() != in_len)
        throw std::invalid_argument("yates_matvec: input length mismatch");

    // lengths after each stage, and the largest buffer ever needed
    std::size_t max_len = in_len;
    {
        std::size_t len = in_len;
        if (order == StageOrder::RightToLeft) {
            for (std::size_t l = p; l-- > 0;) {
                len = len / factors[l].cols * factors[l].rows;
                max_len = std::max(max_len, len);
            }
        } else {
            for (std::size_t l = 0; l < p; ++l) {
                len = len / factors[l].cols * factors[l].rows;
                max_len = std::max(max_len, len);
            }
        }
    }

    std::vector<typename R::Elem> cur(x.begin(), x.end());
    cur.resize(max_len, ring.zero());
    std::vector<typename R::Elem> nxt(max_len, ring.zero());

    YatesResult<R> result;
    std::size_t cur_len = in_len;

    // left = product of dimensions before stage l (already-final or pending),
    // right = product after; stage l maps blocks of shape (cols x right) to
    // (rows x right) within each of the `left` slabs.
    auto apply_stage = [&](std::size_t l, std::size_t left, std::size_t right) {
        const Matrix<R>& A = factors[l];
        const std::size_t nl = A.cols, ml = A.rows;
        for (std::size_t lo = 0; lo < left; ++lo) {
            const std::size_t in_base = lo * nl * right;
            const std::size_t out_base = lo * ml * right;
            for (std::size_t i = 0; i < ml; ++i)
                for (std::size_t r = 0; r < right; ++r) {
                    auto acc = ring.zero();
                    for (std::size_t j = 0; j < nl; ++j) {
                        const auto& aij = A.at(i, j);
                        if (ring.is_zero(aij)) continue;
                        const auto& xv = cur[in_base + j * right + r];
                        if (ring.is_zero(xv)) continue;
                        if (ring.is_one(aij)) {
                            ring.add_in(acc, xv);
                        } else {
                            ring.add_in(acc, ring.mul(aij, xv));
                            ++result.mults;
                        }
                    }
                    nxt[out_base + i * right + r] = std::move(acc);
                }
        }
        cur.swap(nxt);
        cur_len = cur_len / nl * ml;
    };

    if (order == StageOrder::RightToLeft) {
        // before stage l: dimensions 1..l-1 still untransformed (n_i), l+1..p
        // already transformed (m_i)
        for (std::size_t l = p; l-- > 0;) {
            std::size_t left = 1, right = 1;
            for (std::size_t i = 0; i < l; ++i) left *= factors[i].cols;
            for (std::size_t i = l + 1; i < p; ++i) right *= factors[i].rows;
            apply_stage(l, left, right);
        }
    } else {
        for (std::size_t l = 0; l < p; ++l) {
            std::size_t left = 1, right = 1;
            for (std::size_t i = 0; i < l; ++i) left *= factors[i].rows;
            for (std::size_t i = l + 1; i < p; ++i) right *= factors[i].cols;
            apply_stage(l, left, right);
        }
    }

    cur.resize(cur_len, ring.zero());
    result.out = std::move(cur);
    return result;
}

template <class R>
YatesResult<R> yates_matvec(const R& ring, const std::vector<Matrix<R>>& factors,
                            const std::vector<typename R::Elem>& x,
                            StageOrder order = StageOrder::RightToLeft) {
    return yates_matvec(ring, std::span<const Matrix<R>>(factors),
                        std::span<const typename R::Elem>(x), order);
}

}  // namespace tripart
