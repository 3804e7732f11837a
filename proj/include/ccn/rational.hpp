#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ccn {

using BigInt = boost::multiprecision::cpp_int;
// Canonical reduced form, positive denominator.
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned n);
// Zero outside 0 <= k <= n.
BigInt binomial(long long n, long long k);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);
// Accepts "p", "p/q", "-p/q" and decimal literals such as "0.25".
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

inline Rational sign_power(long long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

}  // namespace ccn
