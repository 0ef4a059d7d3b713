#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace netshield {

// Exact arbitrary-precision fraction. Every price, utility and table value
// in the solver is one of these; comparisons are exact, so utility ties keep
// their structure. mpq_class maintains lowest terms with a positive
// denominator.
using Rational = mpq_class;

// gmpxx has no long long constructor; counts in this codebase are 64-bit.
inline Rational make_rational(long long num, long long den = 1) {
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Parses "p/q" or a bare integer "p" (optional leading '-'). Returns nothing
// on malformed input or a zero denominator.
std::optional<Rational> parse_fraction(std::string_view text);

// Canonical "p/q" rendering with the denominator always spelled out.
std::string format_fraction(const Rational& r);

}  // namespace netshield
