#include <random>

#include "crg/cyclotomic.hpp"
#include "crg/errors.hpp"
#include "doctest.h"

using namespace crg;

TEST_CASE("roots of unity basics") {
  CHECK(root_of_unity(1, 0).is_one());
  CHECK(root_of_unity(4, 2) == Cyclotomic::from_rational(4, -1));
  // sum of the two primitive cube roots is -1, forced by Phi_3
  Cyclotomic s = root_of_unity(3, 1) + root_of_unity(3, 2);
  CHECK(s == Cyclotomic::from_rational(3, -1));
}

TEST_CASE("field arithmetic examples") {
  Cyclotomic i4 = root_of_unity(4, 1);
  CHECK(i4 * i4 == Cyclotomic::from_rational(4, -1));

  Cyclotomic z3 = root_of_unity(3, 1);
  CHECK(Cyclotomic::one(3) / z3 == root_of_unity(3, 2));

  // (1 - z3)(1 - z3^2) = 3: expand by hand: 1 - z - z^2 + z^3 = 1 - (-1) + 1
  Cyclotomic lhs = (Cyclotomic::one(3) - z3) * (Cyclotomic::one(3) - root_of_unity(3, 2));
  CHECK(lhs == Cyclotomic::from_rational(3, 3));
}

TEST_CASE("division by zero is a distinct error") {
  CHECK_THROWS_AS(Cyclotomic::one(4) / Cyclotomic::zero(4), DivideByZero);
}

TEST_CASE("embed") {
  Cyclotomic m1 = Cyclotomic::from_rational(2, -1);
  CHECK(m1.embed(4) == Cyclotomic::from_rational(4, -1));
  CHECK(root_of_unity(3, 1).embed(12) == root_of_unity(12, 4));
  // z6 = -z3^2 holds at conductor 6
  CHECK(root_of_unity(6, 1) == -root_of_unity(3, 2).embed(6));
  CHECK_THROWS_AS(root_of_unity(3, 1).embed(4), ConductorError);
}

TEST_CASE("galois action") {
  CHECK(galois(root_of_unity(3, 1), 2) == root_of_unity(3, 2));
  CHECK(galois(root_of_unity(4, 1), 3) == -root_of_unity(4, 1));
  Cyclotomic a = root_of_unity(5, 1) + Cyclotomic::from_rational(5, rat(1, 2));
  CHECK(galois(galois(a, 2), 2) == galois(a, 4));
  CHECK_THROWS_AS(galois(root_of_unity(4, 1), 2), ConductorError);
}

TEST_CASE("root_order") {
  CHECK(root_order(Cyclotomic::one(6)) == 1);
  CHECK(root_order(root_of_unity(6, 1)) == 6);
  CHECK(!root_order(Cyclotomic::from_rational(3, 2)).has_value());
  CHECK(root_order(Cyclotomic::from_rational(5, -1)) == 2);
  // -z3 has order 6 inside Q(zeta_3)
  CHECK(root_order(-root_of_unity(3, 1)) == 6);
  CHECK(root_order(root_of_unity(12, 8)) == 3);
}

TEST_CASE("root_order matches n/gcd(n,k)") {
  for (uint32_t n : {1u, 2u, 3u, 4u, 6u, 8u, 12u, 24u}) {
    for (uint32_t k = 0; k < n; ++k) {
      auto o = root_order(root_of_unity(n, k));
      REQUIRE(o.has_value());
      CHECK(*o == n / std::gcd(n, k == 0 ? n : k));
    }
  }
}

static Cyclotomic random_cyc(std::mt19937& rng, uint32_t n) {
  uint32_t phi = euler_phi(n);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<uint32_t> ex(0, phi - 1);
  std::vector<Cyclotomic::Term> terms;
  int k = 1 + (int)(rng() % 3);
  for (int i = 0; i < k; ++i) terms.emplace_back(ex(rng), rat(num(rng), den(rng)));
  return Cyclotomic::from_terms(n, std::move(terms));
}

TEST_CASE("field axioms, randomized") {
  std::mt19937 rng(20260810);
  for (uint32_t n : {1u, 2u, 3u, 4u, 6u, 8u, 12u, 24u}) {
    for (int it = 0; it < 125; ++it) {
      Cyclotomic a = random_cyc(rng, n), b = random_cyc(rng, n), c = random_cyc(rng, n);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK(a * a.inverse() == Cyclotomic::one(n));
    }
  }
}

TEST_CASE("galois is a ring homomorphism") {
  std::mt19937 rng(7);
  for (uint32_t n : {3u, 4u, 8u, 12u, 24u}) {
    for (long k = 1; k < (long)n; ++k) {
      if (std::gcd((uint32_t)k, n) != 1) continue;
      Cyclotomic a = random_cyc(rng, n), b = random_cyc(rng, n);
      CHECK(galois(a + b, k) == galois(a, k) + galois(b, k));
      CHECK(galois(a * b, k) == galois(a, k) * galois(b, k));
    }
  }
}

TEST_CASE("conjugation fixes a * conj(a)") {
  std::mt19937 rng(11);
  for (uint32_t n : {3u, 4u, 8u, 12u}) {
    for (int it = 0; it < 25; ++it) {
      Cyclotomic a = random_cyc(rng, n);
      Cyclotomic m = a * a.conj();
      CHECK(galois(m, -1) == m);
    }
  }
}

TEST_CASE("field trace closed form matches sum over the unit group") {
  for (uint32_t n : {1u, 2u, 3u, 4u, 6u, 8u, 9u, 12u, 15u, 24u, 30u}) {
    for (uint32_t t = 0; t < n; ++t) {
      Cyclotomic z = root_of_unity(n, t);
      Cyclotomic s = Cyclotomic::zero(n);
      for (uint32_t k = 1; k <= n; ++k) {
        if (std::gcd(k, n) != 1) continue;
        s = s + galois(z, k);
      }
      CHECK(s.rational_value() == z.field_trace());
    }
  }
}

TEST_CASE("canonical rendering") {
  CHECK(Cyclotomic::zero(4).render() == "0 @4");
  CHECK(Cyclotomic::from_rational(4, -1).render() == "-1 @4");
  Cyclotomic v = root_of_unity(12, 1) + Cyclotomic::from_rational(12, rat(1, 2));
  CHECK(v.render() == "1/2 + 1*z @12");
}
