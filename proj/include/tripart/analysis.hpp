#pragma once

#include <optional>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tripart/ring.hpp"

// Constants and running-time exponents for the randomized pipeline, kept
// exact where possible.  theta and the per-permutation success bound are
// rational powers of a rational base; they are stored as (base, exponent)
// pairs and evaluated on demand with 50 decimal digits.  Printed values are
// approximations at that working precision, never exact claims.

namespace tripart {

using HighPrec = boost::multiprecision::cpp_bin_float_50;

inline HighPrec to_highprec(const Rational& r) {
    return HighPrec(numerator(r)) / HighPrec(denominator(r));
}

// H(x) = -x log2 x - (1-x) log2 (1-x) for 0 < x < 1
inline HighPrec binary_entropy(const HighPrec& x) {
    if (!(x > 0 && x < 1))
        throw std::domain_error("binary_entropy: need 0 < x < 1");
    using boost::multiprecision::log;
    const HighPrec ln2 = log(HighPrec(2));
    return -(x * log(x) + (1 - x) * log(1 - x)) / ln2;
}

inline HighPrec binary_entropy(const Rational& x) {
    return binary_entropy(to_highprec(x));
}

// base^exponent with exact rational base and exponent
struct PowExpr {
    Rational base;
    Rational exponent;

    HighPrec value() const {
        using boost::multiprecision::exp;
        using boost::multiprecision::log;
        if (base <= 0) throw std::domain_error("PowExpr: base must be positive");
        return exp(to_highprec(exponent) * log(to_highprec(base)));
    }

    // exact rational value when the exponent is an integer
    std::optional<Rational> exact() const {
        if (denominator(exponent) != 1) return std::nullopt;
        BigInt e = numerator(exponent);
        bool invert = e < 0;
        if (invert) e = -e;
        if (e > 4096) return std::nullopt;  // keep exact powers desk-sized
        Rational out = 1;
        Rational b = base;
        for (BigInt i = 0; i < e; ++i) out *= b;
        if (invert) {
            if (out.is_zero()) throw std::domain_error("PowExpr: 0 to negative power");
            out = Rational(1) / out;
        }
        return out;
    }

    PowExpr pow(const Rational& e) const { return {base, exponent * e}; }
};

inline void check_sigma_tau(const Rational& sigma, const Rational& tau) {
    if (!(tau > 0 && tau < Rational(1, 6)))
        throw std::domain_error("need 0 < tau < 1/6");
    if (!(sigma > 0 && sigma < Rational(1, 12)))
        throw std::domain_error("need 0 < sigma < 1/12");
}

// 1 - 3(1/3+tau)^3 / (1-3sigma)^3, the per-block success bound; positive for
// sigma < 1/12 < (1 - (3/8)^(1/3))/3 and tau < 1/6
inline Rational theta_inner(const Rational& sigma, const Rational& tau) {
    Rational a = Rational(1, 3) + tau;
    Rational b = 1 - 3 * sigma;
    return 1 - 3 * a * a * a / (b * b * b);
}

// theta = (1 - 3(1/3+tau)^3/(1-3sigma)^3)^sigma
inline PowExpr theta_value(const Rational& sigma, const Rational& tau) {
    check_sigma_tau(sigma, tau);
    Rational inner = theta_inner(sigma, tau);
    if (!(inner > 0)) throw std::domain_error("theta_value: non-positive inner value");
    return {inner, sigma};
}

// theta^n, the lower bound on the probability that one uniform permutation
// makes all three sets of a fixed partition good (for dq <= sigma n).  The
// bound decreases in sigma, so the closed boundary sigma = 1/12 is accepted
// here: it is the weakest bound any admissible sigma yields.
inline PowExpr good_probability_lower_bound(unsigned n, const Rational& sigma,
                                            const Rational& tau) {
    if (!(tau > 0 && tau < Rational(1, 6)))
        throw std::domain_error("need 0 < tau < 1/6");
    if (!(sigma > 0 && sigma <= Rational(1, 12)))
        throw std::domain_error("need 0 < sigma <= 1/12");
    Rational inner = theta_inner(sigma, tau);
    if (!(inner > 0))
        throw std::domain_error("good_probability_lower_bound: non-positive inner value");
    return {inner, sigma * n};
}

// s = ceil(theta^(-n) * n)
inline BigInt repeat_count(unsigned n, const PowExpr& theta) {
    if (!(theta.base > 0 && theta.base < 1 && theta.exponent > 0))
        throw std::domain_error("repeat_count: need 0 < theta < 1");
    PowExpr inv{theta.base, -theta.exponent * Rational(n)};
    if (auto exact = inv.exact()) {
        Rational s = *exact * n;
        BigInt q = numerator(s) / denominator(s);
        if (q * denominator(s) != numerator(s)) q += 1;
        return q;
    }
    using boost::multiprecision::ceil;
    HighPrec v = inv.value() * n;
    HighPrec c = ceil(v);
    return static_cast<BigInt>(c);
}

// (b1, b2) with
//   b1 = 2^H(1/3+tau) * inner^(-sigma)
//   b2 = 2^(1-3sigma) * 7^((1+rho)sigma) * inner^(-sigma)
// max(b1, b2) < 2 certifies a (2-delta)^n running-time exponent.
inline std::pair<HighPrec, HighPrec> runtime_exponent_bases(const Rational& sigma,
                                                            const Rational& tau,
                                                            const Rational& rho) {
    if (!(tau > 0 && tau < Rational(1, 6)))
        throw std::domain_error("need 0 < tau < 1/6");
    if (!(sigma >= 0 && sigma < Rational(1, 12)))
        throw std::domain_error("need 0 <= sigma < 1/12");
    if (rho < 0) throw std::domain_error("need rho >= 0");
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    const HighPrec ln2 = log(HighPrec(2));
    HighPrec inner = to_highprec(theta_inner(sigma, tau));
    HighPrec penalty = exp(-to_highprec(sigma) * log(inner));  // inner^(-sigma)
    HighPrec b1 = exp(binary_entropy(Rational(1, 3) + tau) * ln2) * penalty;
    HighPrec b2 = exp((1 - 3 * to_highprec(sigma)) * ln2) *
                  exp(to_highprec((1 + rho) * sigma) * log(HighPrec(7))) * penalty;
    return {b1, b2};
}

// Largest eps of the form 10^(-j) with (2-beta) * 2^kappa * 2^H(kappa) < 2-eps,
// or nothing if even 10^(-60) fails.
inline std::optional<Rational> validate_constants(const Rational& kappa,
                                                  const Rational& beta) {
    if (!(kappa > 0 && kappa < 1)) throw std::domain_error("need 0 < kappa < 1");
    if (!(beta > 0 && beta < 2)) throw std::domain_error("need 0 < beta < 2");
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    const HighPrec ln2 = log(HighPrec(2));
    HighPrec lhs = to_highprec(2 - beta) * exp(to_highprec(kappa) * ln2) *
                   exp(binary_entropy(kappa) * ln2);
    Rational eps(1, 10);
    for (int j = 1; j <= 60; ++j) {
        if (lhs < to_highprec(Rational(2) - eps)) return eps;
        eps /= 10;
    }
    return std::nullopt;
}

}  // namespace tripart
