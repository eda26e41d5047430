#pragma once

#include <cstdint>
#include <string>
#include <gmpxx.h>

namespace crg {

// Arbitrary-precision exact arithmetic. GMP keeps rationals reduced with a
// positive denominator, which is exactly the canonical form we need.
using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) {
  return mpz_cmp_ui(q.get_den().get_mpz_t(), 1) == 0;
}

inline bool fits_long(const BigInt& z) { return z.fits_slong_p(); }

inline std::string render(const Rational& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::size_t hash_value(const BigInt& z) {
  std::size_t h = mpz_fdiv_ui(z.get_mpz_t(), 0x7fffffffULL);
  return h * 2 + (mpz_sgn(z.get_mpz_t()) < 0 ? 1 : 0);
}

inline std::size_t hash_value(const Rational& q) {
  std::size_t h = hash_value(BigInt(q.get_num()));
  return h ^ (hash_value(BigInt(q.get_den())) * 0x9e3779b97f4a7c15ULL);
}

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline BigInt factorial(unsigned n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace crg
