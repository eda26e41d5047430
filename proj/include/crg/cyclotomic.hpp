#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crg/rational.hpp"

namespace crg {

// Element of Q(zeta_n) in the power basis 1, z, ..., z^(phi(n)-1) reduced
// modulo the n-th cyclotomic polynomial. Terms are sparse: sorted by
// exponent, no zero coefficients. Immutable after construction.
class Cyclotomic {
 public:
  using Term = std::pair<uint32_t, Rational>;

  Cyclotomic() : n_(1) {}
  explicit Cyclotomic(uint32_t n) : n_(n) {}

  static Cyclotomic zero(uint32_t n) { return Cyclotomic(n); }
  static Cyclotomic one(uint32_t n) { return from_rational(n, 1); }
  static Cyclotomic from_rational(uint32_t n, Rational q);
  // zeta_n^k, any integer k
  static Cyclotomic root(uint32_t n, long k);
  static Cyclotomic from_terms(uint32_t n, std::vector<Term> terms);

  uint32_t conductor() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_rational() const;
  // requires is_rational()
  Rational rational_value() const;

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator-() const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator/(const Cyclotomic& o) const;
  Cyclotomic operator*(const Rational& q) const;
  Cyclotomic inverse() const;
  Cyclotomic pow(long e) const;

  bool operator==(const Cyclotomic& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
  }
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
  // total order on canonical forms, for deterministic sorting
  bool operator<(const Cyclotomic& o) const;

  std::size_t hash() const;

  // image under sigma_k : zeta -> zeta^k, requires gcd(k, n) = 1
  Cyclotomic galois(long k) const;
  Cyclotomic conj() const;  // galois(-1)
  // same value at conductor m, requires n | m
  Cyclotomic embed(uint32_t m) const;

  // field trace down to Q
  Rational field_trace() const;

  // smallest m with a^m = 1, or nullopt if not a root of unity
  std::optional<uint64_t> root_order() const;

  // "a0 + a1*z + a2*z^2 @n"
  std::string render() const;

  // number of stored terms
  std::size_t size() const { return terms_.size(); }

 private:
  uint32_t n_;
  std::vector<Term> terms_;

  friend class CycContext;
};

inline Cyclotomic root_of_unity(uint32_t n, long k) { return Cyclotomic::root(n, k); }
inline Cyclotomic galois(const Cyclotomic& a, long k) { return a.galois(k); }
inline Cyclotomic embed(const Cyclotomic& a, uint32_t m) { return a.embed(m); }
inline std::optional<uint64_t> root_order(const Cyclotomic& a) { return a.root_order(); }

uint32_t euler_phi(uint32_t n);
uint64_t lcm_u64(uint64_t a, uint64_t b);

// Per-conductor arithmetic tables (cyclotomic polynomial, reduction rows for
// z^t with t >= phi(n), unit-group generators, trace data). Shared and
// thread-safe; values themselves stay immutable.
class CycContext {
 public:
  static const CycContext& get(uint32_t n);

  uint32_t n() const { return n_; }
  uint32_t phi() const { return phi_; }
  // reduced form of z^t (t taken mod n); single-term rows for t < phi
  const std::vector<std::pair<uint32_t, BigInt>>& row(uint32_t t) const;
  // Tr_{Q(zeta_n)/Q}(zeta_n^t), via the Moebius closed form
  Rational trace_of_power(uint32_t t) const;
  // generators of (Z/n)^*
  const std::vector<uint32_t>& unit_gens() const { return unit_gens_; }
  const std::vector<std::pair<uint32_t, uint32_t>>& factorization() const {
    return factors_;
  }
  // order of the group of roots of unity inside Q(zeta_n)
  uint64_t root_bound() const { return n_ % 2 == 0 ? n_ : 2u * n_; }

 private:
  explicit CycContext(uint32_t n);
  uint32_t n_, phi_;
  std::vector<std::pair<uint32_t, uint32_t>> factors_;  // (p, e)
  std::vector<long> cyclo_;                             // Phi_n, dense monic
  std::vector<uint32_t> unit_gens_;
  mutable std::vector<std::unique_ptr<std::vector<std::pair<uint32_t, BigInt>>>> rows_;
  mutable std::unique_ptr<struct CycContextLock> lock_;
};

}  // namespace crg

template <>
struct std::hash<crg::Cyclotomic> {
  std::size_t operator()(const crg::Cyclotomic& c) const { return c.hash(); }
};
