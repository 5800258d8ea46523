#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

namespace ctqw {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt big_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

inline std::int64_t binomial_i64(std::int64_t n, std::int64_t k) {
  BigInt b = big_binomial(n, k);
  if (b > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("binomial exceeds 64-bit range");
  return static_cast<std::int64_t>(b);
}

inline double to_double(const BigRational& q) {
  return q.convert_to<double>();
}

// cpp_rational's two-argument constructor wants a positive denominator.
inline BigRational make_ratio(BigInt num, BigInt den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return BigRational(std::move(num), std::move(den));
}

}  // namespace ctqw
