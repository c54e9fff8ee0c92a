#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <map>
#include <set>
#include "covsemi/acceptance.hpp"

using namespace covsemi;

namespace {
equipment_ptr s3_both() {
  return make_equipment(perm_group::symmetric(3),
                        {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)});
}
} // namespace

TEST_CASE("random single moves preserve every invariant") {
  std::mt19937_64 rng(1001);
  auto eq = s3_both();
  finite_quotient fq(eq);
  for (int it = 0; it < 10000; ++it) {
    auto t = acceptance::random_tuple(eq, 1 + rng() % 4, rng() % 3, rng);
    std::vector<move> ms;
    detail::enumerate_moves(t.raw(), true, ms);
    if (ms.empty()) continue;
    move m = ms[rng() % ms.size()];
    auto t2 = t.apply(m);
    REQUIRE(t2.boundary() == t.boundary());
    REQUIRE(t2.type() == t.type());
    REQUIRE(t2.genus() == t.genus());
    REQUIRE(t2.generated_subgroup().same_group(t.generated_subgroup()));
    REQUIRE(t2.apply({m.kind, m.index, static_cast<std::int8_t>(-m.dir)}) == t);
    REQUIRE(lifting_invariant(fq, t2) == lifting_invariant(fq, t));
  }
}

TEST_CASE("moves are permutations of the finite tuple space") {
  // inverse image equals the unique preimage: count preimages over a slice
  auto eq = s3_both();
  orbit_query q;
  q.eq = eq;
  q.type_vector = {1, 1};
  q.genus = 1;
  q.boundary = std::nullopt;
  q.require_full_group = false;
  std::vector<covering_tuple> all;
  enumerate_tuples(q, [&](const covering_tuple& t) { all.push_back(t); });
  std::vector<move> ms;
  detail::enumerate_moves(all.front().raw(), true, ms);
  for (const move& m : ms) {
    std::map<std::string, int> hits;
    for (const auto& t : all) ++hits[to_literal(t.apply(m))];
    CHECK(hits.size() == all.size()); // injective on the slice
  }
}

TEST_CASE("separation soundness: distinct invariants imply distinct orbits") {
  std::mt19937_64 rng(2002);
  auto eq = s3_both();
  finite_quotient fq(eq);
  int compared = 0;
  for (int it = 0; it < 300; ++it) {
    auto t1 = acceptance::random_tuple(eq, 1 + rng() % 3, rng() % 2, rng);
    auto t2 = acceptance::random_tuple(eq, t1.length(), t1.genus(), rng);
    auto r = orbit_equal(t1, t2, 500000, &fq);
    if (r.relation == orbit_relation::equal) {
      ++compared;
      CHECK(lifting_invariant(fq, t1) == lifting_invariant(fq, t2));
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("exchange and central laws on random genus-0 tuples") {
  std::mt19937_64 rng(3003);
  auto eq = s3_both();
  for (int it = 0; it < 100; ++it) {
    auto t1 = acceptance::random_tuple(eq, 1 + rng() % 3, 0, rng);
    auto t2 = acceptance::random_tuple(eq, 1 + rng() % 3, 0, rng);
    CHECK(orbit_equal(product(t1, t2), product(t2, conjugate_tuple(t1, t2.boundary())), 1000000)
              .relation == orbit_relation::equal);
    auto z = acceptance::random_boundary_e_tuple(eq, 1 + rng() % 2, rng);
    CHECK(orbit_equal(product(z, t2), product(t2, z), 1000000).relation ==
          orbit_relation::equal);
  }
}

TEST_CASE("conjugation fixes full-group boundary-e genus-0 tuples") {
  std::mt19937_64 rng(4004);
  auto eq = s3_both();
  int done = 0;
  while (done < 40) {
    auto t = acceptance::random_boundary_e_tuple(eq, 2 + rng() % 2, rng);
    if (t.generated_subgroup().order() != 6) continue;
    ++done;
    for (const auto& h : eq->group().elements())
      CHECK(orbit_equal(t, conjugate_tuple(t, h), 1000000).relation == orbit_relation::equal);
  }
}

TEST_CASE("normalize certificates replay") {
  std::mt19937_64 rng(5005);
  auto eq = make_equipment(perm_group::symmetric(3), {parse_perm("(1 2)", 3)});
  int reduced = 0;
  for (int it = 0; it < 60; ++it) {
    auto t = acceptance::random_tuple(eq, 4 + rng() % 3, 1, rng);
    auto r = normalize_handles(t, 300000);
    if (!r.reduced) continue;
    ++reduced;
    CHECK(t.apply(r.moves) == r.tuple);
    CHECK(r.tuple.handles_trivial());
    CHECK(r.tuple.boundary() == t.boundary());
    CHECK(r.tuple.type() == t.type());
  }
  CHECK(reduced > 0);
}
