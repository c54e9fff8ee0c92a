#include <catch2/catch_amalgamated.hpp>

#include <random>
#include "covsemi/perm.hpp"

using namespace covsemi;

TEST_CASE("composition is left to right") {
  perm a = parse_perm("(1 2)", 3), b = parse_perm("(2 3)", 3);
  CHECK(to_cycle_string(compose(a, b)) == "(1 3 2)");
  CHECK(compose(perm::identity(3), a) == a);
  CHECK(compose(a, a).is_identity());
  CHECK_THROWS_AS(compose(a, parse_perm("(1 2)", 4)), validation_error);
}

TEST_CASE("conjugation is h^-1 g h") {
  perm a = parse_perm("(1 2)", 3), b = parse_perm("(2 3)", 3);
  CHECK(to_cycle_string(conjugate(a, b)) == "(1 3)");
  CHECK(conjugate(a, perm::identity(3)) == a);
  perm c = parse_perm("(1 2 3)", 3);
  CHECK(conjugate(c, c) == c);
}

TEST_CASE("cycle notation round trip") {
  for (const char* s : {"e", "(1 2)", "(1 2)(3 4 5)", "(1 10 3)"}) {
    perm p = parse_perm(s, 10);
    CHECK(to_cycle_string(p) == s);
  }
  CHECK_THROWS_AS(parse_perm("(1 2", 4), validation_error);
  CHECK_THROWS_AS(parse_perm("(1 9)", 4), validation_error);
  CHECK_THROWS_AS(parse_perm("(1 2)(2 3)", 4), validation_error);
  CHECK_THROWS_AS(parse_perm("", 4), validation_error);
}

TEST_CASE("closure materializes the generated group") {
  CHECK(perm_group::closure({parse_perm("(1 2)", 3), parse_perm("(2 3)", 3)}).order() == 6);
  CHECK(perm_group::closure({parse_perm("(1 2 3)", 3)}).order() == 3);
  CHECK(perm_group::closure({parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)}).order() ==
        4);
  CHECK_THROWS_AS(perm_group::closure({parse_perm("(1 2 3 4 5 6)", 6)}, 5), budget_exceeded);
}

TEST_CASE("conjugacy classes") {
  auto s3 = perm_group::symmetric(3);
  auto cls = s3.conjugacy_class(parse_perm("(1 2)", 3));
  REQUIRE(cls.size() == 3);
  CHECK(to_cycle_string(cls[0]) == "(1 2)");
  CHECK(to_cycle_string(cls[1]) == "(1 3)");
  CHECK(to_cycle_string(cls[2]) == "(2 3)");

  auto s4 = perm_group::symmetric(4);
  CHECK(s4.conjugacy_class(parse_perm("(1 2)", 4)).size() == 6);

  auto z3 = perm_group::closure({parse_perm("(1 2 3)", 3)});
  CHECK(z3.conjugacy_class(parse_perm("(1 2 3)", 3)).size() == 1);

  CHECK_THROWS_AS(z3.conjugacy_class(parse_perm("(1 2)", 3)), validation_error);
}

TEST_CASE("center, centralizer, commutator subgroup, transitivity") {
  auto s3 = perm_group::symmetric(3);
  auto s4 = perm_group::symmetric(4);
  CHECK(s3.center().order() == 1);
  CHECK(s3.commutator_subgroup().order() == 3);
  CHECK(s4.commutator_subgroup().order() == 12);
  CHECK(s3.centralizer({parse_perm("(1 2 3)", 3)}).order() == 3);
  CHECK(s3.is_transitive());
  CHECK_FALSE(perm_group::closure({parse_perm("(1 2)", 3)}).is_transitive());
  auto klein = perm_group::closure({parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)});
  CHECK(klein.center().order() == 4);
  CHECK(klein.is_transitive());
}

TEST_CASE("group laws on random elements") {
  auto s4 = perm_group::symmetric(4);
  std::mt19937_64 rng(31337);
  const auto& els = s4.elements();
  for (int it = 0; it < 2000; ++it) {
    const perm& g = els[rng() % els.size()];
    const perm& h = els[rng() % els.size()];
    const perm& k = els[rng() % els.size()];
    CHECK(compose(compose(g, h), k) == compose(g, compose(h, k)));
    CHECK(compose(g, g.inverse()).is_identity());
    CHECK(conjugate(conjugate(g, h), k) == conjugate(g, compose(h, k)));
    CHECK(conjugate(g, h).cycle_type() == g.cycle_type());
  }
}

TEST_CASE("class size divides group order") {
  auto s4 = perm_group::symmetric(4);
  for (const auto& g : s4.elements()) {
    if (g.is_identity()) continue;
    CHECK(s4.order() % s4.conjugacy_class(g).size() == 0);
  }
}

TEST_CASE("index arithmetic agrees with element arithmetic") {
  auto s4 = perm_group::symmetric(4);
  std::mt19937_64 rng(99);
  for (int it = 0; it < 500; ++it) {
    std::uint32_t a = rng() % s4.order(), b = rng() % s4.order();
    CHECK(s4.element(s4.mult(a, b)) == compose(s4.element(a), s4.element(b)));
    CHECK(s4.element(s4.inv(a)) == s4.element(a).inverse());
    CHECK(s4.element(s4.comm(a, b)) == commutator(s4.element(a), s4.element(b)));
  }
}
