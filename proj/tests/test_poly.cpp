#include <random>

#include "crg/errors.hpp"
#include "crg/poly.hpp"
#include "doctest.h"

using namespace crg;

namespace {
Cyclotomic cq(long num, long den = 1) { return Cyclotomic::from_rational(1, rat(num, den)); }
}  // namespace

TEST_CASE("series product truncation") {
  TruncSeries a("x", {5}), b("x", {5});
  a.add_term({0}, cq(1));
  a.add_term({1}, cq(1));
  b.add_term({0}, cq(1));
  b.add_term({1}, cq(-1));
  TruncSeries p = a * b;
  MultiPoly want("x");
  want.add_term({0}, cq(1));
  want.add_term({2}, cq(-1));
  CHECK(p.to_poly() == want);
}

TEST_CASE("geometric series times (1-x) is 1") {
  TruncSeries geo("x", {9}), oneminus("x", {9});
  for (int i = 0; i <= 9; ++i) geo.add_term({i}, cq(1));
  oneminus.add_term({0}, cq(1));
  oneminus.add_term({1}, cq(-1));
  TruncSeries p = geo * oneminus;
  MultiPoly want("x");
  want.add_term({0}, cq(1));
  CHECK(p.to_poly() == want);
}

TEST_CASE("random product matches direct expansion") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int it = 0; it < 20; ++it) {
    int c1[4], c2[4];
    for (int i = 0; i < 4; ++i) c1[i] = coeff(rng), c2[i] = coeff(rng);
    TruncSeries a("x", {6}), b("x", {6});
    for (int i = 0; i < 4; ++i) a.add_term({i}, cq(c1[i]));
    for (int i = 0; i < 4; ++i) b.add_term({i}, cq(c2[i]));
    TruncSeries p = a * b;
    for (int k = 0; k <= 6; ++k) {
      long want = 0;
      for (int i = 0; i <= k && i < 4; ++i)
        if (k - i < 4) want += (long)c1[i] * c2[k - i];
      CHECK(p.coefficient({k}) == cq(want));
    }
  }
}

TEST_CASE("series inversion") {
  TruncSeries f("x", {8});
  f.add_term({0}, cq(1));
  f.add_term({1}, cq(-1));
  TruncSeries inv = f.inverted();
  for (int i = 0; i <= 8; ++i) CHECK(inv.coefficient({i}) == cq(1));
  CHECK_THROWS(TruncSeries("x", {3}).inverted());
}

TEST_CASE("inversion is an involution on random invertible series") {
  std::mt19937 rng(123);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int it = 0; it < 100; ++it) {
    TruncSeries f("x", {6});
    f.add_term({0}, cq(1 + (int)(rng() % 3)));
    for (int i = 1; i <= 4; ++i) f.add_term({i}, cq(coeff(rng)));
    CHECK(f.inverted().inverted() == f);
  }
}

TEST_CASE("pole order at one") {
  Cyclotomic one = cq(1);
  // 1/(1-x)^2
  UniRational f({one}, upoly_mul({one, -one}, {one, -one}));
  CHECK(pole_order_at_one(f) == 2);
  // (1-x)/(1-x^2) -> 0
  UniRational g({one, -one}, {one, Cyclotomic(), -one});
  CHECK(pole_order_at_one(g) == 0);
  // 1 / ((1-x^2)(1-x^4)): pole order = number of factors
  UPoly d = upoly_mul({one, Cyclotomic(), -one},
                      {one, Cyclotomic(), Cyclotomic(), Cyclotomic(), -one});
  CHECK(pole_order_at_one(UniRational({one}, d)) == 2);
}

TEST_CASE("extract degrees from the G(2,1,2) Molien series, oracle-averaged") {
  // oracle: average 1/det(1-xg) over the eight elements directly.
  // det(1 - x g) per element:
  //   4 diagonals: (1-x)^2, (1-x)(1+x) twice, (1+x)^2
  //   2 reflections across diagonals: 1 - x^2
  //   2 rotations by +-pi/2: 1 + x^2
  int bound = 8;
  std::vector<Rational> acc(bound + 1, Rational(0));
  auto series_of = [&](std::vector<Rational> den) {
    std::vector<Rational> s(bound + 1, Rational(0));
    s[0] = 1;
    for (int j = 1; j <= bound; ++j) {
      Rational v(0);
      for (size_t i = 1; i < den.size() && (int)i <= j; ++i) v += den[i] * s[j - i];
      s[j] = -v;
    }
    return s;
  };
  std::vector<std::vector<Rational>> dens = {
      {1, -2, 1}, {1, 0, -1}, {1, 0, -1}, {1, 2, 1},
      {1, 0, -1}, {1, 0, -1}, {1, 0, 1},  {1, 0, 1}};
  for (auto& d : dens) {
    auto s = series_of(d);
    for (int j = 0; j <= bound; ++j) acc[j] += s[j];
  }
  for (auto& v : acc) v /= 8;
  auto degs = extract_factor_degrees(acc, BigInt(8), bound);
  CHECK(degs == std::vector<int>{2, 4});
}

TEST_CASE("extract degrees of W(F4) from the known factored form") {
  // series of prod 1/(1-x^d), d in {2,6,8,12}, then re-extract
  int bound = 28;
  std::vector<Rational> s(bound + 1, Rational(0));
  s[0] = 1;
  for (int d : {2, 6, 8, 12}) {
    for (int j = d; j <= bound; ++j) s[j] += s[j - d];
  }
  auto degs = extract_factor_degrees(s, BigInt(1152), bound);
  CHECK(degs == std::vector<int>{2, 6, 8, 12});
}

TEST_CASE("extract degrees: trivial group") {
  std::vector<Rational> s(3, Rational(1));
  CHECK(extract_factor_degrees(s, BigInt(1), 2) == std::vector<int>{1});
}

TEST_CASE("extract degrees rejects wrong order") {
  std::vector<Rational> s(5, Rational(0));
  s[0] = 1;
  s[2] = 1;
  s[4] = 1;
  CHECK_THROWS_AS(extract_factor_degrees(s, BigInt(4), 4), StructureError);
}

TEST_CASE("canonical render exactly matches the fixture string") {
  MultiPoly p("qt");
  p.add_term({2, 2}, cq(1));
  p.add_term({1, 2}, cq(2));
  p.add_term({0, 2}, cq(1));
  p.add_term({1, 1}, cq(2));
  p.add_term({0, 1}, cq(2));
  CHECK(canonical_render(p) == "q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t");
  CHECK(canonical_render(MultiPoly("q")) == "0");

  // (qt + t)(qt + t + 2) expands to the same string
  MultiPoly f1("qt"), f2("qt");
  f1.add_term({1, 1}, cq(1));
  f1.add_term({0, 1}, cq(1));
  f2.add_term({1, 1}, cq(1));
  f2.add_term({0, 1}, cq(1));
  f2.add_term({0, 0}, cq(2));
  CHECK(canonical_render(f1 * f2) == "q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t");
}

TEST_CASE("substitution") {
  MultiPoly p("qt");
  p.add_term({2, 1}, cq(3));
  p.add_term({0, 1}, cq(1));
  MultiPoly q = p.substitute('t', Rational(1));
  MultiPoly want("q");
  want.add_term({2}, cq(3));
  want.add_term({0}, cq(1));
  CHECK(q == want);
}

TEST_CASE("univariate helpers") {
  Cyclotomic one = cq(1);
  UPoly a{one, one};           // 1 + x
  UPoly b{one, -one};          // 1 - x
  UPoly p = upoly_mul(a, b);   // 1 - x^2
  CHECK(p.size() == 3);
  CHECK(upoly_div_exact(p, a) == b);
  CHECK_THROWS(upoly_div_exact(UPoly{one, one, one}, a));
  auto inv = upoly_series_inverse(b, 5);
  for (int i = 0; i <= 5; ++i) CHECK(inv[i] == one);
}
