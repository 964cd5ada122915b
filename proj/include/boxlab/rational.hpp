#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace boxlab {

/// Arbitrary-precision rational; always kept canonical (lowest terms, positive denominator).
using Rational = mpq_class;

/// Renders "num/den" in lowest terms. Integers keep the "/1" suffix so every
/// value has a single textual form.
std::string to_string(const Rational& q);

/// Accepts "n", "-n" or "n/d" (d != 0). Throws Error(ParseError) otherwise.
Rational parse_rational(std::string_view text);

/// Exact decimal rendering rounded half away from zero, e.g. 1/3 -> "0.333333333333".
std::string to_decimal(const Rational& q, int places = 12);

double to_double(const Rational& q);

/// n/d in lowest terms (mpq_class(n, d) alone does not reduce).
inline Rational ratio(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline Rational abs_value(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

inline const Rational& max_of(const Rational& x, const Rational& y) { return x < y ? y : x; }
inline const Rational& min_of(const Rational& x, const Rational& y) { return y < x ? y : x; }

}  // namespace boxlab
