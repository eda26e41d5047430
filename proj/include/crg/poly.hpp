#pragma once

#include <map>
#include <string>
#include <vector>

#include "crg/cyclotomic.hpp"

namespace crg {

// Variables come from the fixed alphabet q,t,x,y,u and are always stored in
// that order.
extern const char* const kVarAlphabet;

using Expt = std::vector<int>;

// Dense univariate polynomial with Cyclotomic coefficients, coeff[i] at x^i,
// trimmed (no trailing zeros). The workhorse for characteristic polynomials
// and truncated series of one variable.
using UPoly = std::vector<Cyclotomic>;

void upoly_trim(UPoly& p);
UPoly upoly_add(const UPoly& a, const UPoly& b);
UPoly upoly_sub(const UPoly& a, const UPoly& b);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
// quotient of exact division; throws if not divisible
UPoly upoly_div_exact(const UPoly& a, const UPoly& b);
Cyclotomic upoly_eval(const UPoly& p, const Cyclotomic& x);
// inverse power series of p (p[0] invertible) truncated to degree bound
UPoly upoly_series_inverse(const UPoly& p, int bound);
// multiplicity of x=1 as a root
int upoly_mult_at_one(const UPoly& p);

// Exact sparse multivariate polynomial.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::string vars);
  static MultiPoly constant(std::string vars, Cyclotomic c);
  static MultiPoly monomial(std::string vars, Expt e, Cyclotomic c);

  const std::string& vars() const { return vars_; }
  const std::map<Expt, Cyclotomic>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // re-express over a superset of the variables
  MultiPoly aligned(const std::string& vars) const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly scaled(const Cyclotomic& c) const;
  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  void add_term(const Expt& e, const Cyclotomic& c);

  // substitute a rational value for one variable (variable is removed)
  MultiPoly substitute(char var, const Rational& value) const;

  Cyclotomic coefficient(const Expt& e) const;
  int total_degree() const;

  // graded order (total degree descending, then exponent tuple ascending),
  // integer coefficients printed plainly
  std::string render() const;

 private:
  std::string vars_;
  std::map<Expt, Cyclotomic> terms_;
};

inline std::string canonical_render(const MultiPoly& p) { return p.render(); }

// Exact truncated power series: componentwise exponent bounds.
class TruncSeries {
 public:
  TruncSeries() = default;
  TruncSeries(std::string vars, std::vector<int> bounds);
  static TruncSeries from_poly(const MultiPoly& p, std::vector<int> bounds);

  const std::string& vars() const { return vars_; }
  const std::vector<int>& bounds() const { return bounds_; }
  const std::map<Expt, Cyclotomic>& terms() const { return terms_; }

  void add_term(const Expt& e, const Cyclotomic& c);  // clipped against bounds
  Cyclotomic coefficient(const Expt& e) const;

  TruncSeries operator+(const TruncSeries& o) const;  // bounds intersected
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries scaled(const Cyclotomic& c) const;
  // multiplicative inverse up to the bounds; constant term must be invertible
  TruncSeries inverted() const;
  bool operator==(const TruncSeries& o) const;
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  MultiPoly to_poly() const;
  std::string render() const { return to_poly().render(); }

 private:
  std::string vars_;
  std::vector<int> bounds_;
  std::map<Expt, Cyclotomic> terms_;
};

// Univariate rational function, kept unreduced apart from content
// normalization (denominator constant term scaled to 1 when invertible).
struct UniRational {
  UPoly num;
  UPoly den;
  UniRational(UPoly n, UPoly d);
  UniRational& operator+=(const UniRational& o);
};

// (multiplicity of the root x=1 in den) - (multiplicity in num)
int pole_order_at_one(const UniRational& f);

// Greedy peeling of a Molien-type series into invariant degrees.
// series[j] = coefficient of x^j, rational and expected nonnegative-integral.
// Throws StructureError when the series is not a product of 1/(1-x^d) factors
// with the stated group order.
std::vector<int> extract_factor_degrees(const std::vector<Rational>& series,
                                        const BigInt& group_order, int degree_bound);
std::vector<int> extract_factor_degrees(const TruncSeries& molien,
                                        const BigInt& group_order, int degree_bound);

// coefficients must all be rational
std::vector<Rational> to_rational_series(const TruncSeries& s, int bound);

}  // namespace crg
