#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace dkf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& x) { return boost::multiprecision::numerator(x); }
inline BigInt denominator(const Rational& x) { return boost::multiprecision::denominator(x); }

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline BigInt ipow(BigInt base, std::uint64_t exp) {
    BigInt result = 1;
    while (exp != 0) {
        if (exp & 1U) result *= base;
        exp >>= 1U;
        if (exp != 0) base *= base;
    }
    return result;
}

// x^e for integer e of either sign; x must be nonzero when e < 0.
inline Rational rpow(const Rational& x, std::int64_t e) {
    if (e >= 0) {
        return Rational(ipow(numerator(x), static_cast<std::uint64_t>(e)),
                        ipow(denominator(x), static_cast<std::uint64_t>(e)));
    }
    if (x == 0) throw DomainError("zero raised to a negative power");
    auto k = static_cast<std::uint64_t>(-e);
    return Rational(ipow(denominator(x), k), ipow(numerator(x), k));
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

inline BigInt factorial(std::uint64_t n) {
    BigInt r = 1;
    for (std::uint64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

// Largest k >= 0 with k^n <= x, for x >= 0.
inline BigInt floor_root(const BigInt& x, unsigned n) {
    if (x < 0) throw DomainError("root of a negative integer");
    if (x < 2 || n == 1) return x;
    BigInt lo = 0;
    BigInt hi = 1;
    while (ipow(hi, n) <= x) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (ipow(mid, n) <= x) lo = mid; else hi = mid;
    }
    return lo;
}

// Smallest integer k with k^n >= x, for rational x >= 0.
inline BigInt ceil_root(const Rational& x, unsigned n) {
    if (x < 0) throw DomainError("root of a negative rational");
    BigInt k = floor_root(numerator(x) / denominator(x), n);
    while (Rational(ipow(k, n)) < x) ++k;
    return k;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (q * b != a && ((a < 0) == (b < 0))) ++q;
    return q;
}

inline BigInt ceil(const Rational& x) { return ceil_div(numerator(x), denominator(x)); }

inline BigInt floor(const Rational& x) {
    BigInt q = numerator(x) / denominator(x);
    if (q * denominator(x) != numerator(x) && x < 0) --q;
    return q;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
    if (is_integer(x)) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

} // namespace dkf
