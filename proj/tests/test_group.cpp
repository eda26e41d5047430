#include <random>
#include <set>

#include "crg/errors.hpp"
#include "crg/group.hpp"
#include "doctest.h"

using namespace crg;

TEST_CASE("spec parsing") {
  GroupSpec s = GroupSpec::parse("G(4,2,2)");
  CHECK(s.m == 4);
  CHECK(s.p == 2);
  CHECK(s.r == 2);
  CHECK(s.format() == "G(4,2,2)");
  CHECK(GroupSpec::parse("ST28").st == 28);
  CHECK_THROWS_AS(GroupSpec::parse("H3"), ParseError);
  CHECK_THROWS_AS(GroupSpec::parse("G(4,3,2)"), ParseError);
}

TEST_CASE("dihedral G(2,1,2)") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(2,1,2)"));
  CHECK(g->order() == 8);
  CHECK(g->rank() == 2);
  CHECK(g->reflections().size() == 4);
  CHECK(g->reflection_classes().size() == 2);
  for (auto& cls : g->reflection_classes()) CHECK(cls.size() == 2);
  CHECK(g->conductor() == 4);  // exponent 4
}

TEST_CASE("symmetric group as G(1,1,3)") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(1,1,3)"));
  CHECK(g->order() == 6);
  CHECK(g->reflections().size() == 3);
  CHECK(g->reflection_classes().size() == 1);
}

TEST_CASE("imprimitive order formula") {
  for (auto [m, p, r] : {std::tuple{3u, 1u, 2u}, {4u, 2u, 2u}, {6u, 3u, 2u}, {2u, 1u, 3u},
                         {3u, 3u, 3u}, {5u, 1u, 1u}}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::imprimitive(m, p, r));
    uint64_t expect = 1;
    for (uint32_t i = 0; i < r; ++i) expect *= m;
    expect /= p;
    for (uint32_t i = 2; i <= r; ++i) expect *= i;
    CHECK(g->order() == expect);
  }
}

TEST_CASE("closure property on random products") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(3,1,3)"));
  std::mt19937 rng(42);
  for (int i = 0; i < 1000; ++i) {
    uint32_t a = rng() % g->order(), b = rng() % g->order();
    CHECK_NOTHROW(g->mul(a, b));
  }
}

TEST_CASE("direct enumeration equals generator closure") {
  for (const char* spec : {"G(3,1,2)", "G(4,2,2)", "G(6,6,2)", "G(2,2,3)", "G(5,1,1)"}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::parse(spec));
    auto closed = g->close_subgroup(g->generator_indices());
    CHECK(closed.size() == g->order());
  }
}

TEST_CASE("generated by reflections") {
  for (const char* spec : {"G(2,1,2)", "G(4,2,2)", "G(3,3,3)", "G(1,1,4)"}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::parse(spec));
    auto closed = g->close_subgroup(g->reflections());
    CHECK(closed.size() == g->order());
  }
}

TEST_CASE("element cap") {
  CHECK_THROWS_AS(ReflectionGroup::build(GroupSpec::parse("G(30,1,3)")), CapExceeded);
}

TEST_CASE("exceptional groups load with validated data") {
  struct Row {
    int st;
    uint64_t order;
    size_t nrefl;
    size_t nclasses;
  };
  for (auto [st, order, nrefl, ncls] :
       {Row{4, 24, 8, 2}, Row{8, 96, 18, 3}, Row{25, 648, 24, 2}, Row{26, 1296, 33, 3}}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::exceptional(st));
    CHECK(g->order() == order);
    CHECK(g->reflections().size() == nrefl);
    CHECK(g->reflection_classes().size() == ncls);
  }
}

TEST_CASE("W(F4) basics") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("ST28"));
  CHECK(g->order() == 1152);
  CHECK(g->reflections().size() == 24);
  auto classes = g->reflection_classes();
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].size() == 12);
  CHECK(classes[1].size() == 12);
  CHECK(g->expected()->degrees == std::vector<int>{2, 6, 8, 12});
}

TEST_CASE("hyperplane orbits") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(2,1,2)"));
  auto orbits = g->hyperplane_orbits();
  REQUIRE(orbits.size() == 2);
  CHECK(orbits[0].hyperplane_count == 2);
  CHECK(orbits[1].hyperplane_count == 2);

  GroupPtr s4 = ReflectionGroup::build(GroupSpec::parse("G(1,1,4)"));
  auto o4 = s4->hyperplane_orbits();
  REQUIRE(o4.size() == 1);
  CHECK(o4[0].hyperplane_count == 6);

  GroupPtr f4 = ReflectionGroup::build(GroupSpec::parse("ST28"));
  CHECK(f4->hyperplane_orbits().size() == 2);
}

TEST_CASE("twist") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(4,2,2)"));
  GroupPtr t1 = g->twist(1);
  CHECK(t1->same_element_set(*g));

  GroupPtr f4 = ReflectionGroup::build(GroupSpec::parse("ST28"));
  GroupPtr tf = f4->twist(-1);
  CHECK(tf->same_element_set(*f4));

  GroupPtr c3 = ReflectionGroup::build(GroupSpec::parse("G(3,1,1)"));
  GroupPtr tc = c3->twist(2);
  CHECK(tc->order() == 3);
  CHECK(tc->same_element_set(*c3));

  GroupPtr g1 = ReflectionGroup::build(GroupSpec::parse("G(5,1,2)"));
  GroupPtr tg = g1->twist(3);
  CHECK(tg->order() == g1->order());
  CHECK(tg->reflections().size() == g1->reflections().size());
  auto ca = g1->reflection_classes(), cb = tg->reflection_classes();
  REQUIRE(ca.size() == cb.size());
  for (size_t i = 0; i < ca.size(); ++i) CHECK(ca[i].size() == cb[i].size());
  CHECK_THROWS_AS(g1->twist(5), ConductorError);
}

TEST_CASE("fix dims and orders match matrix computations") {
  for (const char* spec : {"G(4,2,2)", "G(1,1,3)", "G(6,2,2)"}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::parse(spec));
    for (uint32_t i = 0; i < g->order(); ++i) {
      CycMatrix m = g->matrix(i);
      CHECK(g->fix_dim(i) == fixed_space_dim(m));
      CHECK(det_one_minus_xg(m) == g->char_poly(i));
    }
  }
}

TEST_CASE("char poly conjugation invariance") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(3,3,3)"));
  std::mt19937 rng(5);
  for (int it = 0; it < 50; ++it) {
    uint32_t a = rng() % g->order(), h = rng() % g->order();
    CHECK(g->char_poly(a) == g->char_poly(g->conjugate(h, a)));
  }
}

TEST_CASE("eigen exponents sum to rank and match fix dim") {
  for (const char* spec : {"G(4,1,2)", "ST4", "G(2,1,3)"}) {
    GroupPtr g = ReflectionGroup::build(GroupSpec::parse(spec));
    for (uint32_t i = 0; i < g->order(); ++i) {
      auto& ee = g->eigen_exponents(i);
      int total = 0, ones = 0;
      for (auto& [t, mult] : ee) {
        total += mult;
        if (t == 0) ones += mult;
      }
      CHECK(total == (int)g->rank());
      CHECK(ones == g->fix_dim(i));
    }
  }
}

TEST_CASE("monomial eigenvalues agree with generic matrix path") {
  GroupPtr g = ReflectionGroup::build(GroupSpec::parse("G(6,2,2)"));
  for (uint32_t i = 0; i < g->order(); i += 7) {
    auto ev = eigenvalues(g->matrix(i), g->element_order(i));
    auto& ee = g->eigen_exponents(i);
    REQUIRE(ev.size() == ee.size());
    std::multiset<std::pair<std::string, int>> a, b;
    for (auto& [lam, mult] : ev) a.emplace(lam.render(), mult);
    for (auto& [t, mult] : ee) b.emplace(Cyclotomic::root(g->conductor(), t).render(), mult);
    CHECK(a == b);
  }
}
