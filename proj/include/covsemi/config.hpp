#pragma once

#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"

#include "covsemi/acceptance.hpp"
#include "covsemi/oracle.hpp"
#include "covsemi/orbits.hpp"

namespace covsemi {
namespace config {

using json = nlohmann::json;

struct budgets {
  std::uint64_t space = 10000000;
  std::uint64_t nodes = 1000000;
  std::uint64_t cosets = 10000000;
  std::uint64_t closure = 1000000;
  std::uint64_t words = 10000000;
};

struct experiment {
  // group: either symmetric degree or explicit generators
  int symmetric = 0;
  int degree = 0;
  std::vector<std::string> generators;
  std::vector<std::string> classes;

  std::string task; // classes | cgraph | count | scan | ambiguity | lift-invariant |
                    // normalize | orbit-equal | oracle-check | verify
  std::vector<std::uint32_t> type_vector;
  std::uint32_t genus = 0;
  std::string boundary = "e"; // "e" | "any" | cycle notation
  bool full_group = true;
  bool zeta = false;
  bool quotient_conjugation = false;
  bool oracle = true;
  int threads = 1;
  std::uint64_t seed = 20240801;
  budgets budget;

  std::vector<std::uint32_t> scan_start, scan_step;
  std::uint32_t scan_count = 0;

  std::string tuple;  // tuple literal for lift-invariant / normalize / orbit-equal
  std::string tuple2; // second literal for orbit-equal

  std::uint32_t oracle_n = 0, oracle_p = 0;

  std::string out_json = "result.json";
  std::string out_csv = "scan.csv";
  std::string out_dot = "cgraph.dot";
};

inline experiment parse_experiment(const json& j) {
  experiment e;
  if (!j.is_object()) throw validation_error("config: top level must be an object");
  if (j.contains("group")) {
    const auto& g = j.at("group");
    if (g.contains("symmetric")) e.symmetric = g.at("symmetric").get<int>();
    if (g.contains("degree")) e.degree = g.at("degree").get<int>();
    if (g.contains("generators")) e.generators = g.at("generators").get<std::vector<std::string>>();
  }
  if (j.contains("classes")) e.classes = j.at("classes").get<std::vector<std::string>>();
  if (j.contains("task")) e.task = j.at("task").get<std::string>();
  if (j.contains("type")) e.type_vector = j.at("type").get<std::vector<std::uint32_t>>();
  if (j.contains("genus")) e.genus = j.at("genus").get<std::uint32_t>();
  if (j.contains("boundary")) e.boundary = j.at("boundary").get<std::string>();
  if (j.contains("full_group")) e.full_group = j.at("full_group").get<bool>();
  if (j.contains("zeta")) e.zeta = j.at("zeta").get<bool>();
  if (j.contains("quotient_conjugation"))
    e.quotient_conjugation = j.at("quotient_conjugation").get<bool>();
  if (j.contains("oracle")) e.oracle = j.at("oracle").get<bool>();
  if (j.contains("threads")) e.threads = j.at("threads").get<int>();
  if (j.contains("seed")) e.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    if (b.contains("space")) e.budget.space = b.at("space").get<std::uint64_t>();
    if (b.contains("nodes")) e.budget.nodes = b.at("nodes").get<std::uint64_t>();
    if (b.contains("cosets")) e.budget.cosets = b.at("cosets").get<std::uint64_t>();
    if (b.contains("closure")) e.budget.closure = b.at("closure").get<std::uint64_t>();
    if (b.contains("words")) e.budget.words = b.at("words").get<std::uint64_t>();
  }
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    e.scan_start = s.at("start").get<std::vector<std::uint32_t>>();
    e.scan_step = s.at("step").get<std::vector<std::uint32_t>>();
    e.scan_count = s.at("count").get<std::uint32_t>();
  }
  if (j.contains("tuple")) e.tuple = j.at("tuple").get<std::string>();
  if (j.contains("tuple2")) e.tuple2 = j.at("tuple2").get<std::string>();
  if (j.contains("oracle_n")) e.oracle_n = j.at("oracle_n").get<std::uint32_t>();
  if (j.contains("oracle_p")) e.oracle_p = j.at("oracle_p").get<std::uint32_t>();
  if (j.contains("out")) {
    const auto& o = j.at("out");
    if (o.contains("json")) e.out_json = o.at("json").get<std::string>();
    if (o.contains("csv")) e.out_csv = o.at("csv").get<std::string>();
    if (o.contains("dot")) e.out_dot = o.at("dot").get<std::string>();
  }
  return e;
}

inline json to_json(const experiment& e) {
  json j;
  json g;
  if (e.symmetric) g["symmetric"] = e.symmetric;
  if (e.degree) g["degree"] = e.degree;
  if (!e.generators.empty()) g["generators"] = e.generators;
  j["group"] = g;
  j["classes"] = e.classes;
  j["task"] = e.task;
  if (!e.type_vector.empty()) j["type"] = e.type_vector;
  j["genus"] = e.genus;
  j["boundary"] = e.boundary;
  j["full_group"] = e.full_group;
  j["zeta"] = e.zeta;
  j["quotient_conjugation"] = e.quotient_conjugation;
  j["oracle"] = e.oracle;
  j["threads"] = e.threads;
  j["seed"] = e.seed;
  j["budgets"] = {{"space", e.budget.space},
                  {"nodes", e.budget.nodes},
                  {"cosets", e.budget.cosets},
                  {"closure", e.budget.closure},
                  {"words", e.budget.words}};
  if (e.scan_count) j["scan"] = {{"start", e.scan_start}, {"step", e.scan_step}, {"count", e.scan_count}};
  if (!e.tuple.empty()) j["tuple"] = e.tuple;
  if (!e.tuple2.empty()) j["tuple2"] = e.tuple2;
  if (e.oracle_n || e.oracle_p) {
    j["oracle_n"] = e.oracle_n;
    j["oracle_p"] = e.oracle_p;
  }
  j["out"] = {{"json", e.out_json}, {"csv", e.out_csv}, {"dot", e.out_dot}};
  return j;
}

inline equipment_ptr build_equipment(const experiment& e) {
  perm_group g;
  if (e.symmetric > 0) {
    g = perm_group::symmetric(e.symmetric, e.budget.closure);
  } else {
    if (e.degree <= 0 || e.generators.empty())
      throw validation_error("config: group needs 'symmetric' or 'degree' + 'generators'");
    std::vector<perm> gens;
    for (const auto& s : e.generators) gens.push_back(parse_perm(s, e.degree));
    g = perm_group::closure(gens, e.budget.closure);
  }
  if (e.classes.empty()) throw validation_error("config: no class representatives");
  std::vector<perm> reps;
  for (const auto& s : e.classes) reps.push_back(parse_perm(s, g.degree()));
  return make_equipment(std::move(g), reps);
}

inline std::optional<perm> parse_boundary(const experiment& e, int degree) {
  if (e.boundary == "any") return std::nullopt;
  if (e.boundary == "e" || e.boundary.empty()) return perm::identity(degree);
  return parse_perm(e.boundary, degree);
}

struct run_result {
  int exit_code = 0;
  json result;              // written to out_json
  std::string csv;          // written to out_csv when nonempty
  std::string dot;          // written to out_dot when nonempty
};

inline json report_to_json(const orbit_report& rep) {
  json j;
  j["components"] = rep.orbit_count();
  j["orbit_sizes"] = rep.orbit_sizes;
  json reps = json::array();
  for (const auto& t : rep.representatives) reps.push_back(to_literal(t));
  j["representatives"] = reps;
  if (!rep.lift_invariants.empty()) {
    json li = json::array();
    for (const auto& v : rep.lift_invariants) li.push_back(to_cycle_string(v));
    j["lifting_invariants"] = li;
  }
  j["space_size"] = rep.space_size;
  return j;
}

inline run_result run_experiment(const experiment& e, std::ostream& log) {
  run_result out;
  if (e.task == "verify") {
    acceptance::options opt;
    opt.seed = e.seed;
    opt.threads = e.threads;
    opt.oracle_enabled = e.oracle;
    opt.log = &log;
    auto results = acceptance::run_all(opt);
    json arr = json::array();
    bool all = true;
    for (const auto& r : results) {
      arr.push_back({{"id", r.id},
                     {"name", r.name},
                     {"status", r.skipped ? "skipped" : r.pass ? "pass" : "fail"},
                     {"detail", r.detail}});
      all = all && (r.pass || r.skipped);
    }
    out.result = {{"criteria", arr}, {"all_pass", all}};
    return out;
  }

  auto eq = build_equipment(e);
  if (e.task == "classes") {
    json cls = json::array();
    for (std::size_t c = 0; c < eq->num_classes(); ++c)
      cls.push_back({{"representative", to_cycle_string(eq->class_representative(c))},
                     {"size", eq->class_size(c)},
                     {"element_order", eq->class_order(c)}});
    out.result = {{"group_order", eq->group().order()},
                  {"degree", eq->degree()},
                  {"classes", cls},
                  {"letters", eq->num_letters()},
                  {"generates", eq->generates()}};
  } else if (e.task == "cgraph") {
    auto g = build_c_graph(*eq);
    out.dot = c_graph_to_dot(g);
    out.result = {{"vertices", g.num_vertices}, {"edges", g.edges.size()}};
  } else if (e.task == "count") {
    orbit_query q;
    q.eq = eq;
    q.type_vector = e.type_vector;
    q.genus = e.genus;
    q.boundary = parse_boundary(e, eq->degree());
    q.require_full_group = e.full_group;
    q.use_zeta = e.zeta;
    q.conjugation_quotient = e.quotient_conjugation;
    q.space_bound = e.budget.space;
    q.threads = e.threads;
    out.result = report_to_json(orbit_decompose(q));
  } else if (e.task == "scan") {
    if (e.scan_count == 0) throw validation_error("config: scan task needs a scan block");
    auto table = stabilization_scan(eq, e.scan_start, e.scan_step, e.scan_count, e.genus,
                                    e.budget.space, e.threads);
    out.csv = scan_to_csv(table, eq->num_classes());
    json rows = json::array();
    for (const auto& r : table.rows)
      rows.push_back({{"type", r.type_vector}, {"genus", r.genus}, {"components", r.components}});
    out.result = {{"rows", rows}, {"onset", table.onset}, {"complete", table.complete}};
    if (!table.complete) out.exit_code = 3;
  } else if (e.task == "ambiguity") {
    finite_quotient fq(eq, e.budget.cosets);
    json images;
    for (std::uint32_t l = 0; l < eq->num_letters(); ++l) {
      json cells = json::array();
      for (std::uint16_t x : fq.letter_image(l).images()) cells.push_back(x);
      images[to_cycle_string(eq->letter_perm(l))] = cells;
    }
    out.result = {{"ambiguity_index", ambiguity_index(fq)},
                  {"quotient_order", fq.order()},
                  {"quotient_commutant_order", fq.commutant_order()},
                  {"group_commutant_order", eq->group().commutator_subgroup().order()},
                  {"presentation", fq.pres().to_text()},
                  {"coset_action", images}};
  } else if (e.task == "lift-invariant") {
    if (e.tuple.empty()) throw validation_error("config: lift-invariant needs 'tuple'");
    finite_quotient fq(eq, e.budget.cosets);
    auto t = parse_tuple_literal(eq, e.tuple);
    out.result = {{"tuple", to_literal(t)},
                  {"invariant", to_cycle_string(lifting_invariant(fq, t).value())},
                  {"quotient_order", fq.order()}};
  } else if (e.task == "normalize") {
    if (e.tuple.empty()) throw validation_error("config: normalize needs 'tuple'");
    auto t = parse_tuple_literal(eq, e.tuple);
    auto res = normalize_handles(t, e.budget.nodes);
    json moves = json::array();
    for (const auto& m : res.moves) moves.push_back(to_string(m));
    out.result = {{"reduced", res.reduced},
                  {"tuple", to_literal(res.tuple)},
                  {"moves", moves},
                  {"nodes", res.nodes}};
    if (!res.reduced) out.exit_code = 3;
  } else if (e.task == "orbit-equal") {
    if (e.tuple.empty() || e.tuple2.empty())
      throw validation_error("config: orbit-equal needs 'tuple' and 'tuple2'");
    auto t1 = parse_tuple_literal(eq, e.tuple);
    auto t2 = parse_tuple_literal(eq, e.tuple2);
    auto r = orbit_equal(t1, t2, e.budget.nodes, nullptr, e.zeta);
    const char* rel = r.relation == orbit_relation::equal ? "equal"
                      : r.relation == orbit_relation::distinct ? "distinct"
                                                               : "inconclusive";
    out.result = {{"relation", rel}, {"certificate", r.certificate}};
    if (r.relation == orbit_relation::inconclusive) out.exit_code = 3;
  } else if (e.task == "oracle-check") {
    acceptance::grid_instance gi{eq, "config", e.oracle_n, e.oracle_p};
    auto res = acceptance::compare_oracle_engine(gi, e.zeta, e.budget.words, e.threads);
    out.result = {{"match", res.match},
                  {"oracle_classes", res.oracle_classes},
                  {"engine_orbits", res.engine_orbits},
                  {"detail", res.detail}};
    if (!res.match) out.exit_code = 4;
  } else {
    throw validation_error("config: unknown task '" + e.task + "'");
  }
  return out;
}

} // namespace config
} // namespace covsemi
