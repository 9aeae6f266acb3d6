#ifndef ABELKIT_RATIONAL_HPP
#define ABELKIT_RATIONAL_HPP

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace abelkit
{

// Exact rational, always normalized (positive denominator, reduced).
using rational = boost::multiprecision::mpq_rational;
using integer = boost::multiprecision::mpz_int;

// "p" or "p/q".
std::string to_string(const rational &q);

// Accepts "p", "-p", "p/q" and finite decimals "1.25" (converted exactly).
rational parse_rational(std::string_view text);

inline double to_double(const rational &q)
{
    return q.convert_to<double>();
}

inline bool is_integer(const rational &q)
{
    return boost::multiprecision::denominator(q) == 1;
}

// Closest rational with denominator <= max_den (continued fractions), when it
// lies within rel_tol of x relative to 1 + |x|.
std::optional<rational> snap_rational(double x, long max_den = 1000000, double rel_tol = 1e-12);

} // namespace abelkit

#endif
