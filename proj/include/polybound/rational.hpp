#ifndef POLYBOUND_RATIONAL_HPP
#define POLYBOUND_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace polybound {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) {
    return q.template convert_to<double>();
}

inline int sign(const Rational& q) {
    return q.sign();
}

// Renders "n" or "n/d". Denominator is omitted when it equals 1.
std::string rational_to_string(const Rational& q);

// Parses "123", "-7/3", "16/3". Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

// Nearest dyadic rational k/2^bits to x; keeps exact arithmetic cheap when
// floating-point samples enter the QE path.
Rational dyadic_from_double(double x, unsigned bits = 20);

}  // namespace polybound

#endif
