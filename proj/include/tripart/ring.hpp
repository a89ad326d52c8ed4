#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tripart/rng.hpp"

// Exact arithmetic substrate.  Every algebraic structure is a small "ring
// object" that owns its parameters (modulus, truncation bound, ...) and acts
// on a plain value type R::Elem:
//
//   R r;  auto c = r.mul(a, b);  r.add_in(acc, c);
//
// Generic code is templated on the ring object, so the same tensor, Yates and
// convolution routines run over prime fields, extension fields, exact
// rationals and truncated eps-polynomials.  All element values are immutable
// once built (operations return fresh values), so read-only sharing across
// threads is safe.

namespace tripart {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Prime field GF(P) for a small prime P.
// ---------------------------------------------------------------------------

template <unsigned P>
struct Gf {
    static_assert(P >= 2 && P < 256, "small prime moduli only");
    using Elem = std::uint8_t;
    static constexpr unsigned characteristic = P;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    bool is_one(Elem a) const { return a == 1; }
    bool equal(Elem a, Elem b) const { return a == b; }

    Elem from_int(long long v) const {
        long long r = v % static_cast<long long>(P);
        if (r < 0) r += P;
        return static_cast<Elem>(r);
    }
    Elem add(Elem a, Elem b) const {
        unsigned s = unsigned(a) + unsigned(b);
        return static_cast<Elem>(s >= P ? s - P : s);
    }
    void add_in(Elem& a, Elem b) const { a = add(a, b); }
    Elem neg(Elem a) const { return static_cast<Elem>(a == 0 ? 0 : P - a); }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((unsigned(a) * unsigned(b)) % P);
    }
    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("Gf::inv: zero has no inverse");
        // Fermat: a^(P-2)
        Elem r = 1, base = a;
        unsigned e = P - 2;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    std::string to_string(Elem a) const { return std::to_string(unsigned(a)); }
    Elem parse(const std::string& s) const { return from_int(std::stoll(s)); }

    bool operator==(const Gf&) const { return true; }
};

using Gf2 = Gf<2>;
using Gf3 = Gf<3>;
using Gf5 = Gf<5>;
using Gf7 = Gf<7>;

// ---------------------------------------------------------------------------
// Exact rationals (arbitrary precision, always canonical: coprime numerator
// and denominator, denominator > 0; maintained by boost::multiprecision).
// ---------------------------------------------------------------------------

struct RationalRing {
    using Elem = Rational;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool is_one(const Elem& a) const { return a == 1; }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }

    Elem from_int(long long v) const { return Elem(v); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    void add_in(Elem& a, const Elem& b) const { a += b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a.is_zero()) throw std::domain_error("RationalRing::inv: zero");
        return Elem(1) / a;
    }

    std::string to_string(const Elem& a) const { return a.str(); }
    Elem parse(const std::string& s) const {
        // accept "a" and "a/b" with either sign on either part
        auto slash = s.find('/');
        if (slash == std::string::npos) return Elem(BigInt(s));
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den.is_zero()) throw std::invalid_argument("rational with zero denominator");
        return Elem(num) / Elem(den);
    }

    bool operator==(const RationalRing&) const { return true; }
};

// ---------------------------------------------------------------------------
// Dense univariate polynomials over GF(P), low degree first, trimmed.
// Support code for extension fields and irreducibility testing.
// ---------------------------------------------------------------------------

namespace gfpoly {

template <unsigned P>
void trim(std::vector<std::uint8_t>& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

template <unsigned P>
std::vector<std::uint8_t> mul(const std::vector<std::uint8_t>& a,
                              const std::vector<std::uint8_t>& b) {
    Gf<P> gf;
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint8_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = gf.add(c[i + j], gf.mul(a[i], b[j]));
    }
    trim<P>(c);
    return c;
}

// Remainder of a modulo monic-or-not f (divides through by the lead inverse).
template <unsigned P>
std::vector<std::uint8_t> mod(std::vector<std::uint8_t> a,
                              const std::vector<std::uint8_t>& f) {
    Gf<P> gf;
    trim<P>(a);
    if (f.empty()) throw std::domain_error("gfpoly::mod: zero modulus");
    const std::size_t df = f.size() - 1;
    const std::uint8_t lead_inv = gf.inv(f.back());
    while (a.size() > df) {
        std::uint8_t q = gf.mul(a.back(), lead_inv);
        std::size_t shift = a.size() - 1 - df;
        if (q != 0)
            for (std::size_t i = 0; i < f.size(); ++i)
                a[shift + i] = gf.sub(a[shift + i], gf.mul(q, f[i]));
        trim<P>(a);
        if (a.empty()) break;
    }
    return a;
}

template <unsigned P>
std::vector<std::uint8_t> mulmod(const std::vector<std::uint8_t>& a,
                                 const std::vector<std::uint8_t>& b,
                                 const std::vector<std::uint8_t>& f) {
    return mod<P>(mul<P>(a, b), f);
}

template <unsigned P>
std::vector<std::uint8_t> gcd(std::vector<std::uint8_t> a,
                              std::vector<std::uint8_t> b) {
    trim<P>(a);
    trim<P>(b);
    while (!b.empty()) {
        auto r = mod<P>(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(P^k) mod f, by iterating the Frobenius map k times.
template <unsigned P>
std::vector<std::uint8_t> frobenius_power(unsigned k,
                                          const std::vector<std::uint8_t>& f) {
    std::vector<std::uint8_t> t = mod<P>(std::vector<std::uint8_t>{0, 1}, f);
    for (unsigned step = 0; step < k; ++step) {
        // t <- t^P mod f by square-and-multiply on the exponent P
        std::vector<std::uint8_t> r{1}, base = t;
        unsigned e = P;
        while (e) {
            if (e & 1) r = mulmod<P>(r, base, f);
            base = mulmod<P>(base, base, f);
            e >>= 1;
        }
        t = std::move(r);
    }
    return t;
}

}  // namespace gfpoly

// Rabin's irreducibility test: f (monic, degree n >= 1) is irreducible over
// GF(P) iff x^(P^n) == x (mod f) and gcd(x^(P^(n/l)) - x, f) = 1 for every
// prime l dividing n.
template <unsigned P>
bool is_irreducible(const std::vector<std::uint8_t>& f) {
    Gf<P> gf;
    std::vector<std::uint8_t> g = f;
    gfpoly::trim<P>(g);
    if (g.size() < 2) return false;  // constants are units or zero
    const unsigned n = static_cast<unsigned>(g.size() - 1);
    if (n == 1) return true;

    std::vector<unsigned> prime_divisors;
    unsigned m = n;
    for (unsigned l = 2; l * l <= m; ++l)
        if (m % l == 0) {
            prime_divisors.push_back(l);
            while (m % l == 0) m /= l;
        }
    if (m > 1) prime_divisors.push_back(m);

    const std::vector<std::uint8_t> x{0, 1};
    for (unsigned l : prime_divisors) {
        auto h = gfpoly::frobenius_power<P>(n / l, g);
        // h - x
        if (h.size() < 2) h.resize(2, 0);
        h[1] = gf.sub(h[1], 1);
        gfpoly::trim<P>(h);
        auto d = gfpoly::gcd<P>(h, g);
        if (d.size() != 1) return false;
    }
    auto t = gfpoly::frobenius_power<P>(n, g);
    return t == gfpoly::mod<P>(x, g);
}

// Monic degree-n polynomial over GF(P) passing Rabin's test; deterministic
// given the seed.  The retry loop terminates with probability 1 (roughly a
// 1/n fraction of monic candidates is irreducible); capped at 64*n draws.
template <unsigned P>
std::vector<std::uint8_t> construct_extension_modulus(unsigned n,
                                                      std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("extension degree must be >= 1");
    SplitMix64 g(derive_seed(seed, /*tag=*/0x1f1e1d));
    for (std::uint64_t attempt = 0; attempt < 64ull * n; ++attempt) {
        std::vector<std::uint8_t> f(n + 1, 0);
        f[n] = 1;
        for (unsigned i = 0; i < n; ++i)
            f[i] = static_cast<std::uint8_t>(bounded(g, P));
        if (is_irreducible<P>(f)) return f;
    }
    throw std::runtime_error("construct_extension_modulus: retry cap exceeded");
}

// Modulus serialization: coefficient list, low degree first, decimal, one line.
inline std::string modulus_to_string(const std::vector<std::uint8_t>& f) {
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(unsigned(f[i]));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Extension field GF(P^n) = GF(P)[x] / (modulus).  Elements are coefficient
// vectors of length n, coefficient of x^i at index i.
// ---------------------------------------------------------------------------

template <unsigned P>
class ExtField {
  public:
    using Elem = std::vector<std::uint8_t>;
    static constexpr unsigned characteristic = P;

    ExtField() = default;
    explicit ExtField(std::vector<std::uint8_t> modulus)
        : modulus_(std::move(modulus)) {
        gfpoly::trim<P>(modulus_);
        if (modulus_.size() < 2 || modulus_.back() != 1)
            throw std::invalid_argument("ExtField: modulus must be monic, degree >= 1");
        n_ = static_cast<unsigned>(modulus_.size() - 1);
    }

    static ExtField with_degree(unsigned n, std::uint64_t seed) {
        return ExtField(construct_extension_modulus<P>(n, seed));
    }

    unsigned degree() const { return n_; }
    const std::vector<std::uint8_t>& modulus() const { return modulus_; }

    Elem zero() const { return Elem(n_, 0); }
    Elem one() const { return from_int(1); }
    Elem from_int(long long v) const {
        Elem e(n_, 0);
        e[0] = Gf<P>{}.from_int(v);
        return e;
    }
    Elem embed(std::uint8_t base) const {
        Elem e(n_, 0);
        e[0] = base;
        return e;
    }

    bool is_zero(const Elem& a) const {
        for (auto c : a)
            if (c) return false;
        return true;
    }
    bool is_one(const Elem& a) const {
        if (a.empty() || a[0] != 1) return false;
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i]) return false;
        return true;
    }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }

    Elem add(const Elem& a, const Elem& b) const {
        Gf<P> gf;
        Elem c(n_);
        for (unsigned i = 0; i < n_; ++i) c[i] = gf.add(a[i], b[i]);
        return c;
    }
    void add_in(Elem& a, const Elem& b) const {
        Gf<P> gf;
        for (unsigned i = 0; i < n_; ++i) a[i] = gf.add(a[i], b[i]);
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Gf<P> gf;
        Elem c(n_);
        for (unsigned i = 0; i < n_; ++i) c[i] = gf.sub(a[i], b[i]);
        return c;
    }
    Elem neg(const Elem& a) const {
        Gf<P> gf;
        Elem c(n_);
        for (unsigned i = 0; i < n_; ++i) c[i] = gf.neg(a[i]);
        return c;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        Gf<P> gf;
        // schoolbook product, then reduce by the monic modulus in place
        std::vector<std::uint8_t> c(2 * n_ - 1, 0);
        for (unsigned i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            for (unsigned j = 0; j < n_; ++j)
                if (b[j]) c[i + j] = gf.add(c[i + j], gf.mul(a[i], b[j]));
        }
        for (unsigned i = 2 * n_ - 2; i >= n_ && i < c.size(); --i) {
            std::uint8_t q = c[i];
            if (q) {
                c[i] = 0;
                for (unsigned j = 0; j < n_; ++j)
                    c[i - n_ + j] = gf.sub(c[i - n_ + j], gf.mul(q, modulus_[j]));
            }
            if (i == n_) break;
        }
        c.resize(n_);
        return c;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("ExtField::inv: zero");
        // extended Euclid in GF(P)[x]
        Gf<P> gf;
        std::vector<std::uint8_t> r0 = modulus_, r1 = a, s0 = {}, s1 = {1};
        gfpoly::trim<P>(r1);
        while (!r1.empty()) {
            // r0 = q*r1 + r2 with deg r2 < deg r1
            std::vector<std::uint8_t> q;
            std::vector<std::uint8_t> r2 = r0;
            const std::size_t d1 = r1.size() - 1;
            const std::uint8_t lead_inv = gf.inv(r1.back());
            while (r2.size() >= r1.size() && !r2.empty()) {
                std::uint8_t qc = gf.mul(r2.back(), lead_inv);
                std::size_t shift = r2.size() - 1 - d1;
                if (q.size() < shift + 1) q.resize(shift + 1, 0);
                q[shift] = gf.add(q[shift], qc);
                for (std::size_t i = 0; i < r1.size(); ++i)
                    r2[shift + i] = gf.sub(r2[shift + i], gf.mul(qc, r1[i]));
                gfpoly::trim<P>(r2);
            }
            auto s2 = s0;  // s2 = s0 - q*s1
            auto qs1 = gfpoly::mul<P>(q, s1);
            if (s2.size() < qs1.size()) s2.resize(qs1.size(), 0);
            for (std::size_t i = 0; i < qs1.size(); ++i) s2[i] = gf.sub(s2[i], qs1[i]);
            gfpoly::trim<P>(s2);
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 = gcd (a nonzero constant since the modulus is irreducible)
        if (r0.size() != 1)
            throw std::domain_error("ExtField::inv: modulus not irreducible");
        std::uint8_t scale = gf.inv(r0[0]);
        Elem out(n_, 0);
        for (std::size_t i = 0; i < s0.size(); ++i) out[i] = gf.mul(s0[i], scale);
        return out;
    }

    std::string to_string(const Elem& a) const {
        std::string s;
        for (unsigned i = 0; i < n_; ++i) {
            if (i) s += ',';
            s += std::to_string(unsigned(a[i]));
        }
        return s;
    }

    bool operator==(const ExtField& o) const { return modulus_ == o.modulus_; }

  private:
    std::vector<std::uint8_t> modulus_;
    unsigned n_ = 0;
};

template <unsigned P>
typename ExtField<P>::Elem random_element(const ExtField<P>& field, SplitMix64& g) {
    typename ExtField<P>::Elem e(field.degree());
    for (auto& c : e) c = static_cast<std::uint8_t>(bounded(g, P));
    return e;
}

// ---------------------------------------------------------------------------
// Truncated eps-polynomials over a coefficient ring: the quotient of R[eps]
// that retains degrees <= bound.  Multiplication drops higher terms only, and
// the degree-k coefficient of a product depends only on degree-<=k
// coefficients of the operands, so extracting {eps^k} with k <= bound from a
// product of truncated values is exact.
// ---------------------------------------------------------------------------

template <class R>
struct EpsPolyRing {
    using Base = R;
    struct Elem {
        // trimmed: empty means zero, otherwise the last coefficient is nonzero
        std::vector<typename R::Elem> c;
        bool operator==(const Elem& o) const { return c == o.c; }
    };

    R base;
    unsigned bound = 0;  // maximum retained degree D

    EpsPolyRing() = default;
    EpsPolyRing(R base_ring, unsigned d) : base(std::move(base_ring)), bound(d) {}

    Elem zero() const { return {}; }
    Elem one() const { return from_base(base.one()); }
    Elem from_int(long long v) const { return from_base(base.from_int(v)); }
    Elem from_base(typename R::Elem e) const {
        if (base.is_zero(e)) return {};
        Elem out;
        out.c.push_back(std::move(e));
        return out;
    }
    // e * eps^k
    Elem eps(unsigned k, typename R::Elem e) const {
        if (k > bound)
            throw std::out_of_range("EpsPolyRing::eps: degree above bound");
        if (base.is_zero(e)) return {};
        Elem out;
        out.c.resize(k + 1, base.zero());
        out.c[k] = std::move(e);
        return out;
    }
    Elem eps(unsigned k) const { return eps(k, base.one()); }

    bool is_zero(const Elem& a) const { return a.c.empty(); }
    bool is_one(const Elem& a) const {
        return a.c.size() == 1 && base.is_one(a.c[0]);
    }
    bool equal(const Elem& a, const Elem& b) const {
        if (a.c.size() != b.c.size()) return false;
        for (std::size_t i = 0; i < a.c.size(); ++i)
            if (!base.equal(a.c[i], b.c[i])) return false;
        return true;
    }

    int degree(const Elem& a) const { return static_cast<int>(a.c.size()) - 1; }

    // coefficient of eps^k; k above the bound is an error, a missing stored
    // term is zero
    typename R::Elem coeff(const Elem& a, unsigned k) const {
        if (k > bound)
            throw std::out_of_range("EpsPolyRing::coeff: degree above bound");
        if (k >= a.c.size()) return base.zero();
        return a.c[k];
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem out = a;
        add_in(out, b);
        return out;
    }
    void add_in(Elem& a, const Elem& b) const {
        if (a.c.size() < b.c.size()) a.c.resize(b.c.size(), base.zero());
        for (std::size_t i = 0; i < b.c.size(); ++i) base.add_in(a.c[i], b.c[i]);
        trim(a);
    }
    Elem neg(const Elem& a) const {
        Elem out;
        out.c.reserve(a.c.size());
        for (const auto& x : a.c) out.c.push_back(base.neg(x));
        return out;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

    Elem mul(const Elem& a, const Elem& b) const {
        if (a.c.empty() || b.c.empty()) return {};
        const std::size_t la = a.c.size(), lb = b.c.size();
        Elem out;
        std::size_t lout = la + lb - 1;
        if (lout > bound + 1u) lout = bound + 1u;
        out.c.assign(lout, base.zero());
        for (std::size_t i = 0; i < la && i < lout; ++i) {
            const auto& ai = a.c[i];
            if (base.is_zero(ai)) continue;
            const std::size_t jmax = std::min(lb, lout - i);
            if (base.is_one(ai)) {
                for (std::size_t j = 0; j < jmax; ++j)
                    if (!base.is_zero(b.c[j])) base.add_in(out.c[i + j], b.c[j]);
            } else {
                for (std::size_t j = 0; j < jmax; ++j)
                    if (!base.is_zero(b.c[j]))
                        base.add_in(out.c[i + j], base.mul(ai, b.c[j]));
            }
        }
        trim(out);
        return out;
    }

    std::string to_string(const Elem& a) const {
        if (a.c.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (i) s += " + ";
            s += base.to_string(a.c[i]);
            if (i) s += "*e^" + std::to_string(i);
        }
        return s;
    }

    bool operator==(const EpsPolyRing& o) const {
        return bound == o.bound && base == o.base;
    }

  private:
    void trim(Elem& a) const {
        while (!a.c.empty() && base.is_zero(a.c.back())) a.c.pop_back();
    }
};

}  // namespace tripart
