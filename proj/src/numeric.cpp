#include "packing/numeric.hpp"

#include <stdexcept>

namespace packing {

BigInt binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long long i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt placement_count(long long n, long long m, long long blocks) {
  if (n < m) return 0;
  return binomial(n - m + blocks, blocks);
}

BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

BigInt power(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

double to_double(const Rational& q) {
  return boost::multiprecision::numerator(q).convert_to<double>() /
         boost::multiprecision::denominator(q).convert_to<double>();
}

std::string to_decimal(const Rational& q, unsigned digits) {
  BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const bool negative = num < 0;
  if (negative) num = -num;
  const BigInt scale = power(BigInt(10), digits);
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  const BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = negative && scaled != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += '.';
    out += std::string(digits - f.size(), '0');
    out += f;
  }
  return out;
}

std::string to_string(const Rational& q) {
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

}  // namespace packing
