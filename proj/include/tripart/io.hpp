#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tripart/setcover.hpp"

// Flat text formats.  All files are whitespace-separated token streams with a
// fixed header line:
//
//   tensor m n p ring            entries in (level, row, column) order
//   decomp m n p r ring          A (m x r), B (n x r), C (p x r), row-major
//   borderdecomp m n p r d ring  as decomp, each entry d+1 coefficients
//   qdecomp d r ring             A_Q, B_Q, C_Q, 7^d x r each, row-major
//   family n m                   then m lines "k e1 ... ek"
//   vector n ring                then 2^n entries
//   setcover n m t               then m lines "k e1 ... ek"
//
// Ring tags: q, gf2, gf3, gf5, gf7.  Rational entries accept "a" and "a/b".

namespace tripart {

enum class RingTag { Q, GF2, GF3, GF5, GF7 };

inline RingTag parse_ring_tag(const std::string& s) {
    if (s == "q") return RingTag::Q;
    if (s == "gf2") return RingTag::GF2;
    if (s == "gf3") return RingTag::GF3;
    if (s == "gf5") return RingTag::GF5;
    if (s == "gf7") return RingTag::GF7;
    throw std::runtime_error("unknown ring tag '" + s + "'");
}

inline const char* ring_tag_name(RingTag t) {
    switch (t) {
        case RingTag::Q: return "q";
        case RingTag::GF2: return "gf2";
        case RingTag::GF3: return "gf3";
        case RingTag::GF5: return "gf5";
        case RingTag::GF7: return "gf7";
    }
    return "?";
}

template <class R> struct ring_tag_of;
template <> struct ring_tag_of<RationalRing> {
    static constexpr RingTag value = RingTag::Q;
};
template <> struct ring_tag_of<Gf<2>> { static constexpr RingTag value = RingTag::GF2; };
template <> struct ring_tag_of<Gf<3>> { static constexpr RingTag value = RingTag::GF3; };
template <> struct ring_tag_of<Gf<5>> { static constexpr RingTag value = RingTag::GF5; };
template <> struct ring_tag_of<Gf<7>> { static constexpr RingTag value = RingTag::GF7; };

// Dispatch a generic callable on the runtime ring tag.
template <class Fn>
decltype(auto) with_ring(RingTag tag, Fn&& fn) {
    switch (tag) {
        case RingTag::Q: return fn(RationalRing{});
        case RingTag::GF2: return fn(Gf<2>{});
        case RingTag::GF3: return fn(Gf<3>{});
        case RingTag::GF5: return fn(Gf<5>{});
        case RingTag::GF7: return fn(Gf<7>{});
    }
    throw std::logic_error("with_ring: bad tag");
}

namespace iodetail {

inline std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok))
        throw std::runtime_error(std::string("unexpected end of input, wanted ") + what);
    return tok;
}

inline std::uint64_t next_uint(std::istream& in, const char* what) {
    auto tok = next_token(in, what);
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad " + std::string(what) + " '" + tok + "'");
    }
}

template <class R>
typename R::Elem next_elem(std::istream& in, const R& ring) {
    auto tok = next_token(in, "ring element");
    try {
        return ring.parse(tok);
    } catch (const std::exception&) {
        throw std::runtime_error("bad ring element '" + tok + "'");
    }
}

inline void expect_header(std::istream& in, const std::string& word) {
    auto tok = next_token(in, word.c_str());
    if (tok != word)
        throw std::runtime_error("expected header '" + word + "', got '" + tok + "'");
}

}  // namespace iodetail

// ---------------------------------------------------------------------------
// Tensors
// ---------------------------------------------------------------------------

inline RingTag peek_tensor_ring(std::istream& in) {
    iodetail::expect_header(in, "tensor");
    iodetail::next_uint(in, "m");
    iodetail::next_uint(in, "n");
    iodetail::next_uint(in, "p");
    return parse_ring_tag(iodetail::next_token(in, "ring"));
}

template <class R>
Tensor3<R> read_tensor(std::istream& in, const R& ring) {
    iodetail::expect_header(in, "tensor");
    std::size_t m = iodetail::next_uint(in, "m"), n = iodetail::next_uint(in, "n"),
                p = iodetail::next_uint(in, "p");
    auto tag = parse_ring_tag(iodetail::next_token(in, "ring"));
    if (tag != ring_tag_of<R>::value) throw std::runtime_error("tensor ring mismatch");
    Tensor3<R> T(ring, m, n, p);
    for (auto& e : T.a) e = iodetail::next_elem(in, ring);
    return T;
}

template <class R>
void write_tensor(std::ostream& out, const Tensor3<R>& T) {
    out << "tensor " << T.m << ' ' << T.n << ' ' << T.p << ' '
        << ring_tag_name(ring_tag_of<R>::value) << '\n';
    for (std::size_t i = 0; i < T.m; ++i)
        for (std::size_t j = 0; j < T.n; ++j) {
            for (std::size_t k = 0; k < T.p; ++k)
                out << T.ring.to_string(T.at(i, j, k)) << (k + 1 < T.p ? ' ' : '\n');
        }
}

// ---------------------------------------------------------------------------
// Rank and border decompositions
// ---------------------------------------------------------------------------

template <class R>
RankDecomposition<R> read_decomposition(std::istream& in, const R& ring) {
    iodetail::expect_header(in, "decomp");
    std::size_t m = iodetail::next_uint(in, "m"), n = iodetail::next_uint(in, "n"),
                p = iodetail::next_uint(in, "p"), r = iodetail::next_uint(in, "r");
    auto tag = parse_ring_tag(iodetail::next_token(in, "ring"));
    if (tag != ring_tag_of<R>::value) throw std::runtime_error("decomp ring mismatch");
    RankDecomposition<R> D{Matrix<R>(ring, m, r), Matrix<R>(ring, n, r),
                           Matrix<R>(ring, p, r)};
    for (auto M : {&D.A, &D.B, &D.C})
        for (auto& e : M->a) e = iodetail::next_elem(in, ring);
    return D;
}

inline RingTag peek_decomp_ring(std::istream& in, const char* header,
                                unsigned skip_ints) {
    iodetail::expect_header(in, header);
    for (unsigned i = 0; i < skip_ints; ++i) iodetail::next_uint(in, "dim");
    return parse_ring_tag(iodetail::next_token(in, "ring"));
}

template <class R>
void write_decomposition(std::ostream& out, const RankDecomposition<R>& D) {
    out << "decomp " << D.A.rows << ' ' << D.B.rows << ' ' << D.C.rows << ' '
        << D.A.cols << ' ' << ring_tag_name(ring_tag_of<R>::value) << '\n';
    for (auto M : {&D.A, &D.B, &D.C})
        for (std::size_t i = 0; i < M->rows; ++i)
            for (std::size_t j = 0; j < M->cols; ++j)
                out << M->ring.to_string(M->at(i, j)) << (j + 1 < M->cols ? ' ' : '\n');
}

template <class R>
BorderDecomposition<R> read_border_decomposition(std::istream& in, const R& ring) {
    iodetail::expect_header(in, "borderdecomp");
    std::size_t m = iodetail::next_uint(in, "m"), n = iodetail::next_uint(in, "n"),
                p = iodetail::next_uint(in, "p"), r = iodetail::next_uint(in, "r");
    unsigned d = static_cast<unsigned>(iodetail::next_uint(in, "d"));
    auto tag = parse_ring_tag(iodetail::next_token(in, "ring"));
    if (tag != ring_tag_of<R>::value)
        throw std::runtime_error("borderdecomp ring mismatch");
    EpsPolyRing<R> er(ring, 2 * d + 2);
    BorderDecomposition<R> D;
    D.degree = d;
    D.A = Matrix<EpsPolyRing<R>>(er, m, r);
    D.B = Matrix<EpsPolyRing<R>>(er, n, r);
    D.C = Matrix<EpsPolyRing<R>>(er, p, r);
    for (auto M : {&D.A, &D.B, &D.C})
        for (auto& e : M->a) {
            typename EpsPolyRing<R>::Elem poly;
            for (unsigned c = 0; c <= d; ++c) {
                auto coeff = iodetail::next_elem(in, ring);
                if (!ring.is_zero(coeff)) er.add_in(poly, er.eps(c, coeff));
            }
            e = std::move(poly);
        }
    return D;
}

template <class R>
void write_border_decomposition(std::ostream& out, const BorderDecomposition<R>& D) {
    out << "borderdecomp " << D.A.rows << ' ' << D.B.rows << ' ' << D.C.rows << ' '
        << D.A.cols << ' ' << D.degree << ' '
        << ring_tag_name(ring_tag_of<R>::value) << '\n';
    const auto& er = D.A.ring;
    for (auto M : {&D.A, &D.B, &D.C})
        for (std::size_t i = 0; i < M->rows; ++i)
            for (std::size_t j = 0; j < M->cols; ++j)
                for (unsigned c = 0; c <= D.degree; ++c) {
                    char sep = (c == D.degree && j + 1 == M->cols) ? '\n' : ' ';
                    out << er.base.to_string(er.coeff(M->at(i, j), c)) << sep;
                }
}

// ---------------------------------------------------------------------------
// Q decompositions
// ---------------------------------------------------------------------------

template <class R>
QDecomposition<R> read_q_decomposition(std::istream& in, const R& ring) {
    iodetail::expect_header(in, "qdecomp");
    unsigned d = static_cast<unsigned>(iodetail::next_uint(in, "d"));
    std::size_t r = iodetail::next_uint(in, "r");
    auto tag = parse_ring_tag(iodetail::next_token(in, "ring"));
    if (tag != ring_tag_of<R>::value) throw std::runtime_error("qdecomp ring mismatch");
    if (d < 1 || d > 2) throw std::runtime_error("qdecomp: d must be 1 or 2");
    std::size_t dim = d == 1 ? 7 : 49;
    QDecomposition<R> D;
    D.d = d;
    D.A = Matrix<R>(ring, dim, r);
    D.B = Matrix<R>(ring, dim, r);
    D.C = Matrix<R>(ring, dim, r);
    for (auto M : {&D.A, &D.B, &D.C})
        for (auto& e : M->a) e = iodetail::next_elem(in, ring);
    return D;
}

template <class R>
void write_q_decomposition(std::ostream& out, const QDecomposition<R>& D) {
    out << "qdecomp " << D.d << ' ' << D.rank() << ' '
        << ring_tag_name(ring_tag_of<R>::value) << '\n';
    for (auto M : {&D.A, &D.B, &D.C})
        for (std::size_t i = 0; i < M->rows; ++i)
            for (std::size_t j = 0; j < M->cols; ++j)
                out << M->ring.to_string(M->at(i, j)) << (j + 1 < M->cols ? ' ' : '\n');
}

// ---------------------------------------------------------------------------
// Families, vectors, instances
// ---------------------------------------------------------------------------

inline SetFamily read_family(std::istream& in) {
    iodetail::expect_header(in, "family");
    unsigned n = static_cast<unsigned>(iodetail::next_uint(in, "n"));
    std::size_t m = iodetail::next_uint(in, "m");
    if (n > 63) throw std::runtime_error("family: universe above 63");
    std::vector<std::uint64_t> masks;
    masks.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t k = iodetail::next_uint(in, "set size");
        std::uint64_t mask = 0;
        for (std::uint64_t j = 0; j < k; ++j) {
            std::uint64_t e = iodetail::next_uint(in, "element");
            if (e >= n) throw std::runtime_error("element " + std::to_string(e) +
                                                 " outside universe of size " +
                                                 std::to_string(n));
            mask |= 1ull << e;
        }
        masks.push_back(mask);
    }
    return SetFamily(n, std::move(masks));
}

inline void write_family(std::ostream& out, const SetFamily& F) {
    out << "family " << F.n << ' ' << F.size() << '\n';
    for (auto m : F.members) {
        out << std::popcount(m);
        for (unsigned e = 0; e < F.n; ++e)
            if (m & (1ull << e)) out << ' ' << e;
        out << '\n';
    }
}

template <class R>
IndicatorVector<R> read_vector(std::istream& in, const R& ring) {
    iodetail::expect_header(in, "vector");
    unsigned n = static_cast<unsigned>(iodetail::next_uint(in, "n"));
    auto tag = parse_ring_tag(iodetail::next_token(in, "ring"));
    if (tag != ring_tag_of<R>::value) throw std::runtime_error("vector ring mismatch");
    IndicatorVector<R> v(ring, n);
    for (auto& e : v.v) e = iodetail::next_elem(in, ring);
    return v;
}

inline RingTag peek_vector_ring(std::istream& in) {
    iodetail::expect_header(in, "vector");
    iodetail::next_uint(in, "n");
    return parse_ring_tag(iodetail::next_token(in, "ring"));
}

template <class R>
void write_vector(std::ostream& out, const IndicatorVector<R>& v) {
    out << "vector " << v.n << ' ' << ring_tag_name(ring_tag_of<R>::value) << '\n';
    for (std::size_t i = 0; i < v.v.size(); ++i)
        out << v.ring.to_string(v.v[i]) << ((i + 1) % 8 == 0 || i + 1 == v.v.size() ? '\n' : ' ');
}

inline SetCoverInstance read_instance(std::istream& in) {
    iodetail::expect_header(in, "setcover");
    unsigned n = static_cast<unsigned>(iodetail::next_uint(in, "n"));
    std::size_t m = iodetail::next_uint(in, "m");
    unsigned t = static_cast<unsigned>(iodetail::next_uint(in, "t"));
    if (n > 63) throw std::runtime_error("setcover: universe above 63");
    std::vector<std::uint64_t> masks;
    masks.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t k = iodetail::next_uint(in, "set size");
        std::uint64_t mask = 0;
        for (std::uint64_t j = 0; j < k; ++j) {
            std::uint64_t e = iodetail::next_uint(in, "element");
            if (e >= n) throw std::runtime_error("element " + std::to_string(e) +
                                                 " outside universe of size " +
                                                 std::to_string(n));
            mask |= 1ull << e;
        }
        masks.push_back(mask);
    }
    if (t < 1) throw std::runtime_error("setcover: budget must be >= 1");
    return SetCoverInstance::make(n, SetFamily(n, std::move(masks)), t);
}

inline void write_instance(std::ostream& out, const SetCoverInstance& inst) {
    out << "setcover " << inst.n << ' ' << inst.family.size() << ' ' << inst.t << '\n';
    for (auto m : inst.family.members) {
        out << std::popcount(m);
        for (unsigned e = 0; e < inst.n; ++e)
            if (m & (1ull << e)) out << ' ' << e;
        out << '\n';
    }
}

}  // namespace tripart
