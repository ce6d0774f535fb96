#pragma once

#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fjrw {

// All coefficients in the engine are exact rationals; no floating point
// appears anywhere. cpp_rational keeps values in lowest terms with a
// positive denominator, which is exactly the invariant we need.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int floor_int(const Rational& x) {
    Int n = numerator(x);
    Int d = denominator(x);
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

/// Fractional part <x> = x - floor(x), always in [0,1).
inline Rational frac_part(const Rational& x) {
    return x - Rational(floor_int(x));
}

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline Int to_integer(const Rational& x) {
    if (!is_integer(x))
        throw std::domain_error("expected an integer rational, got " +
                                numerator(x).str() + "/" + denominator(x).str());
    return numerator(x);
}

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

/// (-1)^e for an arbitrary (possibly negative) integer exponent.
inline int parity_sign(const Int& e) { return (e % 2 == 0) ? 1 : -1; }

inline Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw std::domain_error("0 cannot be raised to a negative power");
        return Rational(0);
    }
    Rational b = base;
    long n = e;
    if (n < 0) {
        b = Rational(denominator(base), numerator(base));
        n = -n;
    }
    Rational out(1);
    while (n > 0) {
        if (n & 1) out *= b;
        b *= b;
        n >>= 1;
    }
    return out;
}

inline std::string rational_to_string(const Rational& x) {
    if (is_integer(x)) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

} // namespace fjrw
