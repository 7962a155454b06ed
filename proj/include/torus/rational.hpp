#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace torus {

using Rational = mpq_class;
using Integer = mpz_class;

/// Closed rational interval [lo, hi].
struct RationalInterval {
    Rational lo;
    Rational hi;

    bool exact() const { return lo == hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Canonical num/den (den != 0).
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "n" or "n/d" (optional leading sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "num/den", the serialized form used by series files.
std::string to_pair_string(const Rational& q);

/// "num" when integral, otherwise "num/den".
std::string to_string(const Rational& q);

/// Natural log of |q| for q != 0; safe for values far outside double range.
double log_abs(const Rational& q);
double log_abs(const Integer& z);

Integer factorial(unsigned long n);

/// Exact q^e for integer e (q != 0 when e < 0).
Rational pow_int(const Rational& q, long e);

/// Rational enclosure of x^(1/root) for x >= 0, width at most 2^-bits relative
/// to the scale of the denominator. Exact (lo == hi) when x is a perfect power.
RationalInterval root_enclosure(const Rational& x, unsigned long root, unsigned bits = 64);

/// Smallest-effort upper bound of sqrt(x), exact for perfect squares.
Rational sqrt_upper(const Rational& x, unsigned bits = 64);

/// Decimal rendering with a fixed number of fractional digits (truncated toward zero).
std::string to_decimal(const Rational& q, unsigned digits);

/// Best rational approximation of x with denominator <= max_den.
Rational approximate(double x, long max_den);

}  // namespace torus
