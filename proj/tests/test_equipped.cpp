#include <catch2/catch_amalgamated.hpp>

#include "covsemi/equipped.hpp"

using namespace covsemi;

namespace {
equipment_ptr s3_transp() {
  return make_equipment(perm_group::symmetric(3), {parse_perm("(1 2)", 3)});
}
} // namespace

TEST_CASE("equipment expansion and ordering") {
  auto eq = s3_transp();
  CHECK(eq->num_classes() == 1);
  CHECK(eq->num_letters() == 3);
  CHECK(eq->generates());
  CHECK(to_cycle_string(eq->letter_perm(0)) == "(1 2)");
  CHECK(to_cycle_string(eq->letter_perm(1)) == "(1 3)");
  CHECK(to_cycle_string(eq->letter_perm(2)) == "(2 3)");

  auto both = make_equipment(perm_group::symmetric(3),
                             {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)});
  CHECK(both->num_classes() == 2);
  CHECK(both->num_letters() == 5);
  CHECK(both->class_order(0) == 2);
  CHECK(both->class_order(1) == 3);
}

TEST_CASE("equipment rejections") {
  auto s3 = perm_group::symmetric(3);
  CHECK_THROWS_AS(make_equipment(s3, {perm::identity(3)}), validation_error);
  CHECK_THROWS_AS(make_equipment(s3, {parse_perm("(1 2)", 3), parse_perm("(1 3)", 3)}),
                  validation_error); // same class twice
  CHECK_THROWS_AS(make_equipment(perm_group::closure({parse_perm("(1 2 3)", 3)}),
                                 {parse_perm("(1 2)", 3)}),
                  validation_error); // rep not in group
}

TEST_CASE("generates flag tracks the normal closure") {
  auto a4_class = make_equipment(perm_group::symmetric(4), {parse_perm("(1 2 3)", 4)});
  CHECK_FALSE(a4_class->generates()); // 3-cycles generate only A4
  auto transp = make_equipment(perm_group::symmetric(4), {parse_perm("(1 2)", 4)});
  CHECK(transp->generates());
}

TEST_CASE("class_index") {
  auto both = make_equipment(perm_group::symmetric(3),
                             {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)});
  CHECK(both->class_index(parse_perm("(1 3)", 3)) == 0);
  CHECK(both->class_index(parse_perm("(1 3 2)", 3)) == 1);
  CHECK_THROWS_AS(both->class_index(perm::identity(3)), validation_error);
}

TEST_CASE("c-graph shape") {
  auto eq = s3_transp();
  auto g = build_c_graph(*eq);
  CHECK(g.num_vertices == 3);
  CHECK(g.edges.size() == 9);

  auto z3 = make_equipment(perm_group::closure({parse_perm("(1 2 3)", 3)}),
                           {parse_perm("(1 2 3)", 3)});
  auto gz = build_c_graph(*z3);
  CHECK(gz.num_vertices == 1);
  REQUIRE(gz.edges.size() == 1);
  CHECK(gz.edges[0].from == gz.edges[0].to); // loop

  auto klein = make_equipment(
      perm_group::closure({parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)}),
      {parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4), parse_perm("(1 4)(2 3)", 4)});
  auto gk = build_c_graph(*klein);
  CHECK(gk.num_vertices == 3);
  CHECK(gk.edges.size() == 9);
  for (const auto& e : gk.edges) CHECK(e.from == e.to); // abelian: all loops
}

TEST_CASE("c-graph components are conjugacy classes") {
  std::vector<equipment_ptr> eqs;
  eqs.push_back(s3_transp());
  eqs.push_back(make_equipment(perm_group::symmetric(3),
                               {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)}));
  eqs.push_back(make_equipment(perm_group::symmetric(4),
                               {parse_perm("(1 2)", 4), parse_perm("(1 2 3)", 4),
                                parse_perm("(1 2)(3 4)", 4), parse_perm("(1 2 3 4)", 4)}));
  for (const auto& eq : eqs) {
    auto comp = c_graph_components(build_c_graph(*eq));
    for (std::uint32_t v = 0; v < eq->num_letters(); ++v)
      for (std::uint32_t w = 0; w < eq->num_letters(); ++w)
        CHECK((comp[v] == comp[w]) == (eq->letter_class(v) == eq->letter_class(w)));
  }
}

TEST_CASE("O is closed under conjugation by generators") {
  auto eq = make_equipment(perm_group::symmetric(4),
                           {parse_perm("(1 2)", 4), parse_perm("(1 2 3)", 4)});
  for (std::uint32_t l = 0; l < eq->num_letters(); ++l)
    for (const auto& g : eq->group().generators())
      CHECK_NOTHROW(eq->letter_of(conjugate(eq->letter_perm(l), g)));
}

TEST_CASE("dot serialization") {
  auto eq = s3_transp();
  auto dot = c_graph_to_dot(build_c_graph(*eq));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"(1 2)\" -> \"(2 3)\" [label=\"(1 3)\"]") != std::string::npos);
  std::size_t arrows = 0;
  for (std::size_t at = dot.find("->"); at != std::string::npos; at = dot.find("->", at + 1))
    ++arrows;
  CHECK(arrows == 9);
}

TEST_CASE("c-graph isomorphism") {
  auto eq = s3_transp();
  auto g1 = build_c_graph(*eq);
  CHECK(c_graphs_isomorphic(g1, g1));

  auto z3 = make_equipment(perm_group::closure({parse_perm("(1 2 3)", 3)}),
                           {parse_perm("(1 2 3)", 3)});
  auto z3b = make_equipment(perm_group::closure({parse_perm("(1 3 2)", 3)}),
                            {parse_perm("(1 3 2)", 3)});
  CHECK(c_graphs_isomorphic(build_c_graph(*z3), build_c_graph(*z3b)));
  CHECK_FALSE(c_graphs_isomorphic(g1, build_c_graph(*z3)));
}

TEST_CASE("lift words are shortest and deterministic") {
  auto eq = s3_transp();
  CHECK(eq->lift_word(parse_perm("(1 3)", 3)).size() == 1);
  CHECK(eq->lift_word(perm::identity(3)).empty());
  auto w = eq->lift_word(parse_perm("(1 2 3)", 3));
  REQUIRE(w.size() == 2);
  CHECK(to_cycle_string(w[0]) == "(1 2)");
  CHECK(to_cycle_string(w[1]) == "(1 3)");
  auto a4 = make_equipment(perm_group::symmetric(4), {parse_perm("(1 2 3)", 4)});
  CHECK_THROWS_AS(a4->lift_word(parse_perm("(1 2)", 4)), validation_error);
}
