#include <catch2/catch_amalgamated.hpp>

#include <random>
#include "covsemi/fpgroup.hpp"

using namespace covsemi;

namespace {
equipment_ptr z3_eq() {
  return make_equipment(perm_group::closure({parse_perm("(1 2 3)", 3)}),
                        {parse_perm("(1 2 3)", 3)});
}
equipment_ptr klein_eq() {
  auto g = perm_group::closure({parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)});
  return make_equipment(g, {parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4),
                            parse_perm("(1 4)(2 3)", 4)});
}
equipment_ptr s3_transp() {
  return make_equipment(perm_group::symmetric(3), {parse_perm("(1 2)", 3)});
}
equipment_ptr s4_transp() {
  return make_equipment(perm_group::symmetric(4), {parse_perm("(1 2)", 4)});
}
} // namespace

TEST_CASE("presentation shape") {
  auto p1 = c_group_presentation(*z3_eq());
  CHECK(p1.ngens == 1);
  CHECK(p1.relators.size() == 1);

  auto p2 = c_group_presentation(*s3_transp());
  CHECK(p2.ngens == 3);
  CHECK(p2.relators.size() == 9);

  auto pk = c_group_presentation(*klein_eq());
  CHECK(pk.ngens == 3);
  CHECK(pk.relators.size() == 9);

  CHECK(p2.to_text().rfind("< (1 2), (1 3), (2 3) |", 0) == 0);

  auto a4 = make_equipment(perm_group::symmetric(4), {parse_perm("(1 2 3)", 4)});
  CHECK_THROWS_AS(c_group_presentation(*a4), validation_error); // O does not generate
}

TEST_CASE("finite quotient orders") {
  CHECK(finite_quotient(z3_eq()).order() == 3);
  CHECK(finite_quotient(s3_transp()).order() == 6);
  CHECK(finite_quotient(klein_eq()).order() == 8);
  CHECK(finite_quotient(s4_transp()).order() == 24);
}

TEST_CASE("one power relator per class matches the all-relators mode") {
  for (auto eq : {z3_eq(), klein_eq(), s3_transp(), s4_transp()}) {
    finite_quotient one(eq, 10000000, false);
    finite_quotient all(eq, 10000000, true);
    CHECK(one.order() == all.order());
    CHECK(one.commutant_order() == all.commutant_order());
  }
}

TEST_CASE("ambiguity index values") {
  CHECK(ambiguity_index(z3_eq()) == 1);
  CHECK(ambiguity_index(klein_eq()) == 1);
  CHECK(ambiguity_index(s3_transp()) == 1);
  CHECK(ambiguity_index(s4_transp()) == 1);
}

TEST_CASE("ambiguity monotone under equipment growth") {
  auto s3_small = ambiguity_index(s3_transp());
  auto s3_large = ambiguity_index(make_equipment(
      perm_group::symmetric(3), {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)}));
  CHECK(s3_large <= s3_small);

  auto s4_small = ambiguity_index(s4_transp());
  auto s4_large = ambiguity_index(make_equipment(
      perm_group::symmetric(4), {parse_perm("(1 2)", 4), parse_perm("(1 2 3)", 4)}));
  CHECK(s4_large <= s4_small);
}

TEST_CASE("quotient abelianization is the product of class cyclic groups") {
  for (auto eq : {z3_eq(), klein_eq(), s3_transp(), s4_transp()}) {
    finite_quotient fq(eq);
    std::size_t expected_ab = 1;
    for (std::size_t c = 0; c < eq->num_classes(); ++c) expected_ab *= eq->class_order(c);
    CHECK(fq.order() == fq.commutant_order() * expected_ab);
    // every generator image has order dividing its class order
    auto commutant = fq.group().commutator_subgroup();
    for (std::uint32_t l = 0; l < eq->num_letters(); ++l) {
      perm img = fq.letter_image(l);
      perm power = perm::identity(static_cast<int>(fq.order()));
      for (int k = 0; k < eq->class_order(eq->letter_class(l)); ++k) power = compose(power, img);
      CHECK(commutant.contains(power));
    }
  }
}

TEST_CASE("lifting invariant examples") {
  auto eq = s3_transp();
  finite_quotient fq(eq);
  perm r = eq->class_representative(0);
  covering_tuple sq(eq, {r, r}, {});
  CHECK(lifting_invariant(fq, sq).value().is_identity());

  covering_tuple diag(eq, {}, {{parse_perm("(1 2 3)", 3), parse_perm("(1 2 3)", 3)}});
  CHECK(lifting_invariant(fq, diag).value().is_identity());

  perm t13 = parse_perm("(1 3)", 3);
  covering_tuple other(eq, {t13, t13}, {});
  CHECK(lifting_invariant(fq, other).value().is_identity());
}

TEST_CASE("lifting invariant is multiplicative") {
  auto eq = s3_transp();
  finite_quotient fq(eq);
  std::mt19937_64 rng(555);
  for (int it = 0; it < 300; ++it) {
    detail::raw_tuple r1, r2;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) r1.branch.push_back(rng() % 3);
    for (std::size_t i = 0, p = rng() % 2; i < 2 * p; ++i) r1.handles.push_back(rng() % 6);
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) r2.branch.push_back(rng() % 3);
    for (std::size_t i = 0, p = rng() % 2; i < 2 * p; ++i) r2.handles.push_back(rng() % 6);
    covering_tuple t1(eq, r1), t2(eq, r2);
    CHECK(lifting_invariant(fq, product(t1, t2)) ==
          lifting_invariant(fq, t1) * lifting_invariant(fq, t2));
  }
}

TEST_CASE("lifting invariant ignores the choice of handle lift words") {
  auto eq = s3_transp();
  const perm_group& g = eq->group();
  finite_quotient fq(eq);
  std::mt19937_64 rng(777);
  for (int it = 0; it < 200; ++it) {
    detail::raw_tuple r;
    for (int i = 0; i < 2; ++i) r.branch.push_back(rng() % 3);
    for (int i = 0; i < 4; ++i) r.handles.push_back(rng() % 6);
    covering_tuple t(eq, r);
    // detoured lift words: x = (x w^-1) w
    std::vector<std::vector<std::uint32_t>> words;
    for (std::uint32_t h : r.handles) {
      std::uint32_t w = static_cast<std::uint32_t>(rng() % g.order());
      auto word = eq->lift_word(g.mult(h, g.inv(w)));
      for (std::uint32_t l : eq->lift_word(w)) word.push_back(l);
      words.push_back(std::move(word));
    }
    CHECK(lifting_invariant(fq, t, &words) == lifting_invariant(fq, t));
  }
}

TEST_CASE("coset table export") {
  auto eq = s3_transp();
  finite_quotient fq(eq);
  // generator images form a regular permutation representation
  CHECK(fq.group().order() == fq.order());
  for (std::uint32_t l = 0; l < eq->num_letters(); ++l)
    CHECK(fq.letter_image(l).degree() == static_cast<int>(fq.order()));
  CHECK(fq.elem_image(eq->group().identity_index()).is_identity());
}
