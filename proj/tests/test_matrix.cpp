#include <random>

#include "crg/errors.hpp"
#include "crg/matrix.hpp"
#include "doctest.h"

using namespace crg;

namespace {

CycMatrix swap2(uint32_t n) {
  CycMatrix m(2, 2, n);
  m.set(0, 1, Cyclotomic::one(n));
  m.set(1, 0, Cyclotomic::one(n));
  return m;
}

}  // namespace

TEST_CASE("fixed_space_dim") {
  CHECK(fixed_space_dim(CycMatrix::identity(4, 1)) == 4);
  CHECK(fixed_space_dim(swap2(1)) == 1);
  CycMatrix refl(2, 2, 1);
  refl.set(0, 0, Cyclotomic::from_rational(1, -1));
  refl.set(1, 1, Cyclotomic::one(1));
  CHECK(fixed_space_dim(refl) == 1);
}

TEST_CASE("det(1 - x g)") {
  UPoly p = det_one_minus_xg(CycMatrix::identity(2, 1));
  // (1-x)^2 = 1 - 2x + x^2
  REQUIRE(p.size() == 3);
  CHECK(p[0].is_one());
  CHECK(p[1] == Cyclotomic::from_rational(1, -2));
  CHECK(p[2].is_one());

  UPoly s = det_one_minus_xg(swap2(1));
  REQUIRE(s.size() == 3);
  CHECK(s[0].is_one());
  CHECK(s[1].is_zero());
  CHECK(s[2] == Cyclotomic::from_rational(1, -1));

  // diag(z3, z3^2) -> (1 - z3 x)(1 - z3^2 x) = 1 + x + x^2
  CycMatrix d(2, 2, 3);
  d.set(0, 0, root_of_unity(3, 1));
  d.set(1, 1, root_of_unity(3, 2));
  UPoly q = det_one_minus_xg(d);
  REQUIRE(q.size() == 3);
  CHECK(q[0].is_one());
  CHECK(q[1].is_one());
  CHECK(q[2].is_one());
}

TEST_CASE("det equals product over eigenvalues for random conjugates") {
  std::mt19937 rng(31);
  // conjugate diag(z6, z6^5) by random integer matrices with det 1
  CycMatrix d(2, 2, 6);
  d.set(0, 0, root_of_unity(6, 1));
  d.set(1, 1, root_of_unity(6, 5));
  UPoly expect = det_one_minus_xg(d);
  for (int it = 0; it < 10; ++it) {
    long a = 1 + (long)(rng() % 3), b = (long)(rng() % 3);
    // [[a, b],[c, d]] with ad - bc = 1 via c = (ad-1)/b when b | ad-1; use unipotent
    CycMatrix u(2, 2, 6);
    u.set(0, 0, Cyclotomic::one(6));
    u.set(0, 1, Cyclotomic::from_rational(6, rat(b)));
    u.set(1, 1, Cyclotomic::one(6));
    (void)a;
    CycMatrix conj = u * d * u.inverse();
    CHECK(det_one_minus_xg(conj) == expect);
  }
}

TEST_CASE("kernel basis") {
  CycMatrix z(2, 2, 1);
  CHECK(kernel_basis(z).size() == 2);
  CHECK(kernel_basis(CycMatrix::identity(3, 1)).empty());
  CycMatrix m(2, 2, 1);
  m.set(0, 0, Cyclotomic::one(1));
  m.set(0, 1, Cyclotomic::one(1));
  m.set(1, 0, Cyclotomic::one(1));
  m.set(1, 1, Cyclotomic::one(1));
  auto basis = kernel_basis(m);
  REQUIRE(basis.size() == 1);
  // (1, -1) up to normalization
  CHECK(basis[0][0] == -basis[0][1]);
}

TEST_CASE("eigenvalues") {
  auto id3 = eigenvalues(CycMatrix::identity(3, 1), 1);
  REQUIRE(id3.size() == 1);
  CHECK(id3[0].first.is_one());
  CHECK(id3[0].second == 3);

  auto sw = eigenvalues(swap2(1), 2);
  REQUIRE(sw.size() == 2);
  CHECK(sw[0].second == 1);
  CHECK(sw[1].second == 1);

  CycMatrix d(2, 2, 3);
  d.set(0, 0, root_of_unity(3, 1));
  d.set(1, 1, root_of_unity(3, 2));
  auto ev = eigenvalues(d, 3);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].second == 1);
  CHECK(ev[1].second == 1);

  // wrong hint: multiplicities cannot reach the rank
  CHECK_THROWS_AS(eigenvalues(d, 2), StructureError);
}

TEST_CASE("inverse") {
  CycMatrix u(2, 2, 4);
  u.set(0, 0, root_of_unity(4, 1));
  u.set(0, 1, Cyclotomic::one(4));
  u.set(1, 1, Cyclotomic::one(4));
  CHECK((u * u.inverse()).is_identity());
}
