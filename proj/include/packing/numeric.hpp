#ifndef PACKING_NUMERIC_HPP
#define PACKING_NUMERIC_HPP

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace packing {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Binomial coefficient; zero when k < 0 or k > n (including n < 0).
BigInt binomial(long long n, long long k);

/// Number of placements of `blocks` blocks of total length m in a word of
/// length n: C(n - m + b, b). Equals C(n, m) for classical patterns.
BigInt placement_count(long long n, long long m, long long blocks);

BigInt factorial(unsigned n);
BigInt power(const BigInt& base, unsigned exponent);

double to_double(const Rational& q);

/// Decimal rendering rounded half-up to `digits` places after the point.
std::string to_decimal(const Rational& q, unsigned digits = 15);

/// "num/den", or just "num" for integers.
std::string to_string(const Rational& q);

}  // namespace packing

#endif  // PACKING_NUMERIC_HPP
