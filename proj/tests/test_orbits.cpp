#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <map>
#include <set>
#include "covsemi/orbits.hpp"

using namespace covsemi;

namespace {
equipment_ptr s3_transp() {
  return make_equipment(perm_group::symmetric(3), {parse_perm("(1 2)", 3)});
}
equipment_ptr s3_both() {
  return make_equipment(perm_group::symmetric(3),
                        {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)});
}
perm P3(const char* s) { return parse_perm(s, 3); }

orbit_query base_query(equipment_ptr eq, std::vector<std::uint32_t> tau, std::size_t p) {
  orbit_query q;
  q.eq = std::move(eq);
  q.type_vector = std::move(tau);
  q.genus = p;
  q.boundary = std::nullopt;
  q.require_full_group = false;
  return q;
}
} // namespace

TEST_CASE("enumerate_tuples counts") {
  auto eq = s3_transp();
  auto count_with = [&](std::optional<perm> b, bool full) {
    auto q = base_query(eq, {2}, 0);
    q.boundary = std::move(b);
    q.require_full_group = full;
    std::size_t k = 0;
    enumerate_tuples(q, [&](const covering_tuple&) { ++k; });
    return k;
  };
  CHECK(count_with(std::nullopt, false) == 9);
  CHECK(count_with(perm::identity(3), false) == 3);
  CHECK(count_with(perm::identity(3), true) == 0);
}

TEST_CASE("enumerate_tuples is lexicographic and duplicate-free") {
  auto eq = s3_both();
  auto q = base_query(eq, {2, 1}, 1);
  q.boundary = perm::identity(3);
  std::vector<std::string> lits;
  enumerate_tuples(q, [&](const covering_tuple& t) {
    CHECK(t.boundary().is_identity());
    lits.push_back(to_literal(t));
  });
  REQUIRE(!lits.empty());
  auto sorted = lits;
  std::sort(sorted.begin(), sorted.end());
  auto uniq = std::unique(sorted.begin(), sorted.end());
  CHECK(uniq == sorted.end());
}

TEST_CASE("orbit decomposition of the 9-pair space") {
  auto rep = orbit_decompose(base_query(s3_transp(), {2}, 0));
  CHECK(rep.space_size == 9);
  REQUIRE(rep.orbit_count() == 5);
  std::multiset<std::uint64_t> sizes(rep.orbit_sizes.begin(), rep.orbit_sizes.end());
  CHECK(sizes == std::multiset<std::uint64_t>{1, 1, 1, 3, 3});
}

TEST_CASE("no moves at n=0: singleton orbits") {
  auto q = base_query(s3_transp(), {0}, 1);
  auto rep = orbit_decompose(q);
  CHECK(rep.space_size == 36);
  CHECK(rep.orbit_count() == 36);
}

TEST_CASE("known component counts") {
  auto eq = s3_transp();
  CHECK(count_components(eq, {4}, 0) == 1);
  CHECK(count_components(eq, {3}, 0) == 0); // parity
  CHECK(count_components(eq, {2}, 0) == 0); // proper subgroup
}

TEST_CASE("orbit representatives are lexicographic minima and invariants are orbit-constant") {
  auto q = base_query(s3_both(), {2, 1}, 1);
  auto rep = orbit_decompose(q);
  detail::tuple_codec codec(*q.eq, 3, 1);
  std::mt19937_64 rng(7);
  for (const auto& t : rep.representatives) {
    std::vector<move> ms;
    detail::enumerate_moves(t.raw(), false, ms);
    covering_tuple walk = t;
    for (int step = 0; step < 30; ++step) {
      walk = walk.apply(ms[rng() % ms.size()]);
      CHECK(walk.boundary() == t.boundary());
      CHECK(walk.type() == t.type());
      CHECK(walk.generated_subgroup().order() == t.generated_subgroup().order());
      CHECK(codec.encode(walk.raw()) >= codec.encode(t.raw()));
    }
  }
}

TEST_CASE("deterministic across worker counts") {
  auto q = base_query(s3_both(), {3, 1}, 1);
  q.boundary = perm::identity(3);
  q.require_full_group = true;
  q.threads = 1;
  auto a = orbit_decompose(q);
  q.threads = 2;
  auto b = orbit_decompose(q);
  q.threads = 3;
  auto c = orbit_decompose(q);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("orbit_equal basics") {
  auto eq = s3_transp();
  covering_tuple t(eq, {P3("(1 2)"), P3("(2 3)"), P3("(1 2)"), P3("(2 3)")}, {});
  CHECK(orbit_equal(t, h_move(t, 1, +1)).relation == orbit_relation::equal);
  covering_tuple u(eq, {P3("(1 2)"), P3("(2 3)"), P3("(1 2)"), P3("(1 3)")}, {});
  auto r = orbit_equal(t, u);
  CHECK(r.relation == orbit_relation::distinct);
  CHECK(r.certificate == "boundary values differ");
  CHECK(orbit_equal(t, t).relation == orbit_relation::equal);
}

TEST_CASE("orbit_equal budget exhaustion is inconclusive") {
  auto eq = s3_transp();
  covering_tuple t(eq, {P3("(1 2)"), P3("(1 3)"), P3("(2 3)"), P3("(1 2)")}, {});
  covering_tuple u = h_move(h_move(h_move(t, 0, +1), 1, +1), 2, +1);
  auto r = orbit_equal(t, u, 2);
  CHECK(r.relation == orbit_relation::inconclusive);
}

TEST_CASE("stabilization scans") {
  auto eq = s3_transp();
  auto odd = stabilization_scan(eq, {3}, {2}, 3, 0);
  REQUIRE(odd.rows.size() == 3);
  for (const auto& r : odd.rows) CHECK(r.components == 0);

  auto even0 = stabilization_scan(eq, {4}, {2}, 3, 0);
  auto even1 = stabilization_scan(eq, {4}, {2}, 3, 1);
  REQUIRE(even0.rows.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(even0.rows[k].components == 1);
    CHECK(even0.rows[k].components == even1.rows[k].components);
  }
  CHECK(even0.onset == 0);

  auto csv = scan_to_csv(even0, 1);
  CHECK(csv.rfind("tau_1,genus,components,wall_ms\n", 0) == 0);
  CHECK(csv.find("\n4,0,1,") != std::string::npos);
}

TEST_CASE("scan reports partial tables when the bound interrupts") {
  auto eq = s3_transp();
  auto t = stabilization_scan(eq, {4}, {2}, 5, 0, 2000);
  CHECK_FALSE(t.complete);
  CHECK(t.rows.size() < 5);
}

TEST_CASE("component count bounded by the subset equipment's ambiguity index") {
  // O' = transpositions generates S3; counts at types rich in O' stay <= 1
  auto eq = s3_both();
  for (std::uint32_t extra = 0; extra <= 2; ++extra) {
    auto c = count_components(eq, {6, extra}, 0);
    CHECK(c <= 1);
  }
  auto s4 = make_equipment(perm_group::symmetric(4),
                           {parse_perm("(1 2)", 4), parse_perm("(1 2 3)", 4)});
  CHECK(count_components(s4, {6, 1}, 0) <= 1);
}

TEST_CASE("conjugation quotient validation and counts") {
  auto eq = s3_both();
  auto q = base_query(eq, {2, 1}, 0);
  q.boundary = P3("(1 2)");
  q.conjugation_quotient = true;
  CHECK_THROWS_AS(orbit_decompose(q), validation_error); // non-central boundary

  q.boundary = std::nullopt;
  auto quotiented = orbit_decompose(q);
  q.conjugation_quotient = false;
  auto plain = orbit_decompose(q);
  CHECK(quotiented.orbit_count() <= plain.orbit_count());

  // boundary e, full group, genus 0: quotient changes nothing
  auto qe = base_query(eq, {4, 1}, 0);
  qe.boundary = perm::identity(3);
  qe.require_full_group = true;
  auto a = orbit_decompose(qe);
  qe.conjugation_quotient = true;
  auto b = orbit_decompose(qe);
  CHECK(a.orbit_count() == b.orbit_count());
  CHECK(a.orbit_sizes == b.orbit_sizes);
}

TEST_CASE("space bound rejects oversized queries") {
  auto q = base_query(s3_both(), {10, 5}, 2);
  q.space_bound = 1000;
  CHECK_THROWS_AS(orbit_decompose(q), budget_exceeded);
}
