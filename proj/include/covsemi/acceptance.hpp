#pragma once

#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "covsemi/oracle.hpp"
#include "covsemi/orbits.hpp"

namespace covsemi {
namespace acceptance {

struct criterion_result {
  int id = 0;
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

struct options {
  std::uint64_t seed = 20240801;
  int threads = 1;
  bool oracle_enabled = true;
  std::ostream* log = nullptr;
};

// ---- helpers ---------------------------------------------------------------

inline equipment_ptr s_transpositions(int d) {
  return make_equipment(perm_group::symmetric(d), {parse_perm("(1 2)", d)});
}

inline equipment_ptr s3_two_classes() {
  return make_equipment(perm_group::symmetric(3),
                        {parse_perm("(1 2)", 3), parse_perm("(1 2 3)", 3)});
}

inline covering_tuple random_tuple(const equipment_ptr& eq, std::size_t n, std::size_t p,
                                   std::mt19937_64& rng) {
  detail::raw_tuple r;
  for (std::size_t i = 0; i < n; ++i)
    r.branch.push_back(static_cast<std::uint32_t>(rng() % eq->num_letters()));
  for (std::size_t i = 0; i < 2 * p; ++i)
    r.handles.push_back(static_cast<std::uint32_t>(rng() % eq->group().order()));
  return covering_tuple(eq, std::move(r));
}

// Genus-0 tuple with boundary e: random letters followed by the shortest
// O-word of the inverse prefix product.
inline covering_tuple random_boundary_e_tuple(const equipment_ptr& eq, std::size_t n_free,
                                              std::mt19937_64& rng) {
  const perm_group& g = eq->group();
  detail::raw_tuple r;
  std::uint32_t prod = g.identity_index();
  for (std::size_t i = 0; i < n_free; ++i) {
    std::uint32_t l = static_cast<std::uint32_t>(rng() % eq->num_letters());
    r.branch.push_back(l);
    prod = g.mult(prod, eq->letter_elem(l));
  }
  for (std::uint32_t l : eq->lift_word(g.inv(prod))) r.branch.push_back(l);
  return covering_tuple(eq, std::move(r));
}

// ---- oracle vs engine comparison (shared by criteria 5 and 7) --------------

struct grid_instance {
  equipment_ptr eq;
  std::string eq_name;
  std::size_t n = 0, p = 0;
};

inline std::vector<grid_instance> oracle_grid(std::uint64_t word_bound = 1000000) {
  std::vector<grid_instance> grid;
  auto e1 = s_transpositions(3);
  auto e2 = s3_two_classes();
  for (auto& [eq, name] :
       std::vector<std::pair<equipment_ptr, std::string>>{{e1, "S3/transp"}, {e2, "S3/both"}}) {
    for (std::size_t p = 0; p <= 1; ++p)
      for (std::size_t n = 0; n <= 6; ++n) {
        try {
          oracle::word_codec probe(*eq, n, p, word_bound);
        } catch (const budget_exceeded&) {
          continue;
        }
        grid.push_back({eq, name, n, p});
      }
  }
  return grid;
}

// counts per (type vector, boundary==e, G_t==G) over a whole (n, p) slice
using bucket_map = std::map<std::vector<std::uint32_t>, std::array<std::uint64_t, 4>>;

inline void bucket_add(bucket_map& m, const std::vector<std::uint32_t>& tau, bool be, bool full) {
  auto& a = m[tau];
  ++a[0];
  if (be) ++a[1];
  if (full) ++a[2];
  if (be && full) ++a[3];
}

inline std::vector<std::vector<std::uint32_t>> compositions(std::size_t n, std::size_t parts) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(parts, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == parts) {
      cur[i] = static_cast<std::uint32_t>(left);
      out.push_back(cur);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      cur[i] = static_cast<std::uint32_t>(v);
      rec(i + 1, left - v);
    }
  };
  if (parts == 0) {
    if (n == 0) out.push_back({});
    return out;
  }
  rec(0, n);
  return out;
}

struct grid_compare_result {
  bool match = true;
  std::string detail;
  std::uint64_t oracle_classes = 0;
  std::uint64_t engine_orbits = 0;
};

// Decomposes the full (n,p) slice (all type vectors, any boundary, no G_t
// filter) with the engine and checks counts, constraint buckets and the
// class-to-orbit bijection against the word oracle.
inline grid_compare_result compare_oracle_engine(const grid_instance& gi, bool use_zeta,
                                                 std::uint64_t word_bound = 1000000,
                                                 int threads = 1) {
  grid_compare_result res;
  const equipped_group& eq = *gi.eq;
  auto ores = oracle::oracle_classes(eq, gi.n, gi.p, word_bound);
  res.oracle_classes = ores.classes.size();

  bucket_map oracle_buckets;
  for (const auto& c : ores.classes) {
    bucket_add(oracle_buckets, c.type_vector, c.boundary_e, c.full_group);
    if (c.reduced_rep < 0) {
      res.match = false;
      res.detail = "oracle class without reduced-form member";
      return res;
    }
  }

  oracle::word_codec codec(eq, gi.n, gi.p, word_bound);
  bucket_map engine_buckets;
  std::vector<bool> class_hit(ores.classes.size(), false);
  for (const auto& tau : compositions(gi.n, eq.num_classes())) {
    orbit_query q;
    q.eq = gi.eq;
    q.type_vector = tau;
    q.genus = gi.p;
    q.boundary = std::nullopt;
    q.require_full_group = false;
    q.use_zeta = use_zeta;
    q.threads = threads;
    auto rep = orbit_decompose(q);
    res.engine_orbits += rep.orbit_count();
    for (const auto& t : rep.representatives) {
      bool be = t.boundary().is_identity();
      bool full = t.generated_subgroup().order() == eq.group().order();
      bucket_add(engine_buckets, tau, be, full);
      // reduced tuple as a word: X letters then Y letters
      oracle::word w;
      for (std::uint32_t l : t.raw().branch) w.push_back({false, l, 0});
      for (std::size_t j = 0; j < t.genus(); ++j)
        w.push_back({true, t.raw().handles[2 * j], t.raw().handles[2 * j + 1]});
      std::uint32_t cls = ores.class_of_word[codec.encode(w)];
      if (class_hit[cls]) {
        res.match = false;
        res.detail = "two engine orbits map to one oracle class";
        return res;
      }
      class_hit[cls] = true;
    }
  }
  if (res.engine_orbits != res.oracle_classes) {
    res.match = false;
    res.detail = "orbit count " + std::to_string(res.engine_orbits) + " != class count " +
                 std::to_string(res.oracle_classes);
    return res;
  }
  if (oracle_buckets != engine_buckets) {
    res.match = false;
    res.detail = "constraint buckets differ";
    return res;
  }
  return res;
}

// ---- criteria ---------------------------------------------------------------

namespace detail_acc {

inline criterion_result timed(int id, const std::string& name,
                              const std::function<std::pair<bool, std::string>()>& body) {
  criterion_result r;
  r.id = id;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto [pass, detail] = body();
    r.pass = pass;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

} // namespace detail_acc

// 1. Full symmetric groups with transposition branching: one component for
// even n at the tested sizes, none for odd n.
inline criterion_result criterion_1(const options& opt) {
  return detail_acc::timed(1, "single component for transposition branching", [&] {
    std::ostringstream d;
    bool ok = true;
    for (auto [deg, n, want] : std::vector<std::tuple<int, int, std::uint64_t>>{
             {3, 4, 1}, {3, 6, 1}, {4, 6, 1}, {4, 8, 1}, {5, 8, 1}, {3, 5, 0}, {4, 7, 0}, {5, 7, 0}}) {
      auto eq = s_transpositions(deg);
      auto got = count_components(eq, {static_cast<std::uint32_t>(n)}, 0, 20000000, opt.threads);
      d << "S" << deg << ",n=" << n << ":" << got << " ";
      ok = ok && got == want;
    }
    return std::pair{ok, d.str()};
  });
}

// 2. Degree 8, classes of (1 2)(3 4 5), (1 2 3)(4 5 6 7), (1 2 3 4 5 6 7),
// one branch point each: at least two components.
inline criterion_result criterion_2(const options& opt) {
  return detail_acc::timed(2, "degree-8 three-class space splits", [&] {
    auto g = perm_group::symmetric(8);
    auto eq = make_equipment(g, {parse_perm("(1 2)(3 4 5)", 8), parse_perm("(1 2 3)(4 5 6 7)", 8),
                                 parse_perm("(1 2 3 4 5 6 7)", 8)});
    orbit_query q;
    q.eq = eq;
    q.type_vector = {1, 1, 1};
    q.genus = 0;
    q.boundary = perm::identity(8);
    q.require_full_group = true;
    q.threads = opt.threads;
    auto rep = orbit_decompose(q);
    std::ostringstream d;
    d << "components=" << rep.orbit_count() << " space=" << rep.space_size;
    return std::pair{rep.orbit_count() >= 2, d.str()};
  });
}

// 3. Stabilized counts match the ambiguity index at genus 0 and 1.
inline criterion_result criterion_3(const options& opt) {
  return detail_acc::timed(3, "stabilized counts equal the ambiguity index", [&] {
    std::ostringstream d;
    bool ok = true;
    struct scan_spec {
      equipment_ptr eq;
      std::string name;
      std::vector<std::uint32_t> start, step;
      std::size_t count;
    };
    std::vector<scan_spec> specs{{s_transpositions(3), "S3/transp", {2}, {2}, 5},
                                 {s3_two_classes(), "S3/both", {2, 1}, {2, 1}, 3}};
    for (auto& spec : specs) {
      std::size_t a = ambiguity_index(spec.eq);
      auto t0 = stabilization_scan(spec.eq, spec.start, spec.step, spec.count, 0, 30000000,
                                   opt.threads);
      auto t1 = stabilization_scan(spec.eq, spec.start, spec.step, spec.count, 1, 30000000,
                                   opt.threads);
      bool good = t0.complete && t1.complete && t0.rows.size() == t1.rows.size();
      std::size_t onset = std::max(t0.onset, t1.onset);
      good = good && onset < t0.rows.size();
      for (std::size_t k = onset; good && k < t0.rows.size(); ++k)
        good = t0.rows[k].components == a && t1.rows[k].components == a;
      d << spec.name << "(a=" << a << ",onset=" << onset << ",p0=";
      for (auto& r : t0.rows) d << r.components << " ";
      d << ",p1=";
      for (auto& r : t1.rows) d << r.components << " ";
      d << ") ";
      ok = ok && good;
    }
    return std::pair{ok, d.str()};
  });
}

// 4. Ambiguity index 1 on the four desk equipments, each agreeing with a
// stabilized genus-0 component count.
inline criterion_result criterion_4(const options& opt) {
  return detail_acc::timed(4, "ambiguity index consistency", [&] {
    std::ostringstream d;
    bool ok = true;
    struct probe {
      equipment_ptr eq;
      std::string name;
      std::vector<std::uint32_t> tau;
    };
    auto klein = perm_group::closure({parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)});
    std::vector<probe> probes{
        {make_equipment(perm_group::closure({parse_perm("(1 2 3)", 3)}), {parse_perm("(1 2 3)", 3)}),
         "Z3", {3}},
        {make_equipment(klein, {parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4),
                                parse_perm("(1 4)(2 3)", 4)}),
         "Klein", {2, 2, 2}},
        {s_transpositions(3), "S3/transp", {6}},
        {s_transpositions(4), "S4/transp", {6}}};
    for (auto& pr : probes) {
      std::size_t a = ambiguity_index(pr.eq);
      auto c = count_components(pr.eq, pr.tau, 0, 10000000, opt.threads);
      d << pr.name << ":a=" << a << ",count=" << c << " ";
      ok = ok && a == 1 && c == a;
    }
    return std::pair{ok, d.str()};
  });
}

// 5. Word oracle and move engine agree on the exhaustive grid.
inline criterion_result criterion_5(const options& opt) {
  if (!opt.oracle_enabled) {
    criterion_result r;
    r.id = 5;
    r.name = "oracle agrees with engine on the grid";
    r.skipped = true;
    r.detail = "oracle disabled";
    return r;
  }
  return detail_acc::timed(5, "oracle agrees with engine on the grid", [&] {
    std::ostringstream d;
    bool ok = true;
    for (const auto& gi : oracle_grid()) {
      auto res = compare_oracle_engine(gi, false, 1000000, opt.threads);
      if (!res.match) {
        ok = false;
        d << gi.eq_name << "(n=" << gi.n << ",p=" << gi.p << "): " << res.detail << " ";
      }
    }
    if (ok) d << "grid instances all match";
    return std::pair{ok, d.str()};
  });
}

// 6. Move soundness: invariants preserved and inverses exact over random
// single moves.
inline criterion_result criterion_6(const options& opt) {
  return detail_acc::timed(6, "move soundness over random tuples", [&] {
    std::mt19937_64 rng(opt.seed);
    std::uint64_t trials_total = 0;
    for (int deg : {3, 4}) {
      auto g = perm_group::symmetric(deg);
      auto eq = make_equipment(g, {parse_perm("(1 2)", deg), parse_perm("(1 2 3)", deg)});
      finite_quotient fq(eq);
      for (int it = 0; it < 50000;) {
        std::size_t n = 1 + rng() % 5, p = rng() % 3;
        auto t = random_tuple(eq, n, p, rng);
        std::vector<move> ms;
        detail::enumerate_moves(t.raw(), true, ms);
        if (ms.empty()) continue;
        ++it;
        move m = ms[rng() % ms.size()];
        auto t2 = t.apply(m);
        ++trials_total;
        bool good = t2.boundary() == t.boundary() && t2.type() == t.type() &&
                    t2.genus() == t.genus() &&
                    t2.generated_subgroup().same_group(t.generated_subgroup()) &&
                    t2.apply({m.kind, m.index, static_cast<std::int8_t>(-m.dir)}) == t &&
                    lifting_invariant(fq, t2) == lifting_invariant(fq, t);
        if (!good)
          return std::pair{false, "violation at degree " + std::to_string(deg) + " move " +
                                      to_string(m) + " tuple " + to_literal(t)};
      }
    }
    return std::pair{true, std::to_string(trials_total) + " single moves, zero violations"};
  });
}

// 7. Orbit decompositions identical with and without zeta moves.
inline criterion_result criterion_7(const options& opt) {
  return detail_acc::timed(7, "zeta moves change no decomposition", [&] {
    std::ostringstream d;
    bool ok = true;
    for (const auto& gi : oracle_grid()) {
      if (gi.p == 0) continue; // zeta needs a handle
      for (const auto& tau : compositions(gi.n, gi.eq->num_classes())) {
        orbit_query q;
        q.eq = gi.eq;
        q.type_vector = tau;
        q.genus = gi.p;
        q.boundary = std::nullopt;
        q.require_full_group = false;
        q.threads = opt.threads;
        auto without = orbit_decompose(q);
        q.use_zeta = true;
        auto with = orbit_decompose(q);
        if (!(without == with)) {
          ok = false;
          d << gi.eq_name << "(n=" << gi.n << ",p=" << gi.p << ") differs ";
        }
      }
    }
    if (ok) d << "all decompositions identical";
    return std::pair{ok, d.str()};
  });
}

// 8. Handle trivialization succeeds in the guaranteed regime.
inline criterion_result criterion_8(const options& opt) {
  return detail_acc::timed(8, "handle trivialization in the guaranteed regime", [&] {
    std::mt19937_64 rng(opt.seed ^ 0x8888);
    auto eq = s_transpositions(3);
    const perm_group& g = eq->group();
    int checked_equal = 0;
    for (int it = 0; it < 100; ++it) {
      std::size_t p = 1 + it % 2;
      detail::raw_tuple r;
      while (true) {
        r.branch.clear();
        r.handles.clear();
        std::uint32_t comm_prod = g.identity_index();
        for (std::size_t j = 0; j < p; ++j) {
          std::uint32_t a = static_cast<std::uint32_t>(rng() % g.order());
          std::uint32_t b = static_cast<std::uint32_t>(rng() % g.order());
          r.handles.push_back(a);
          r.handles.push_back(b);
          comm_prod = g.mult(comm_prod, g.comm(a, b));
        }
        std::uint32_t prod = g.identity_index();
        for (int i = 0; i < 7; ++i) {
          std::uint32_t l = static_cast<std::uint32_t>(rng() % eq->num_letters());
          r.branch.push_back(l);
          prod = g.mult(prod, eq->letter_elem(l));
        }
        std::uint32_t need = g.mult(g.inv(prod), g.inv(comm_prod));
        if (!eq->elem_in_O(need)) continue;
        r.branch.push_back(eq->letter_of_elem(need));
        covering_tuple probe(eq, r);
        if (probe.generated_subgroup().order() == g.order()) break;
      }
      covering_tuple t(eq, r);
      auto res = normalize_handles(t, 1000000);
      if (!res.reduced)
        return std::pair{false, "instance " + std::to_string(it) + " not reduced: " + to_literal(t)};
      if (!res.tuple.handles_trivial() || t.apply(res.moves) != res.tuple)
        return std::pair{false, "certificate replay failed on instance " + std::to_string(it)};
      if (p == 1 && checked_equal < 10) {
        ++checked_equal;
        if (orbit_equal(t, res.tuple, 1000000).relation != orbit_relation::equal)
          return std::pair{false, "orbit_equal rejects instance " + std::to_string(it)};
      }
    }
    return std::pair{true, std::string(
                     "100/100 reduced with replayed certificates, 10 re-checked by orbit search")};
  });
}

// 9. Semigroup-over-group laws at the orbit level.
inline criterion_result criterion_9(const options& opt) {
  return detail_acc::timed(9, "semigroup-over-group laws", [&] {
    std::mt19937_64 rng(opt.seed ^ 0x9999);
    auto eq = s3_two_classes();
    const perm_group& g = eq->group();
    auto equal = [&](const covering_tuple& a, const covering_tuple& b) {
      return orbit_equal(a, b, 2000000).relation == orbit_relation::equal;
    };
    for (int it = 0; it < 1000; ++it) {
      // center law: boundary-e factors commute
      auto t1 = random_boundary_e_tuple(eq, 1 + rng() % 2, rng);
      auto t2 = random_tuple(eq, 1 + rng() % 3, 0, rng);
      if (!equal(product(t1, t2), product(t2, t1)))
        return std::pair{false, "central law failed: " + to_literal(t1) + " " + to_literal(t2)};
      // exchange law: s1 s2 = s2 * conj(s1, alpha(s2))
      auto u1 = random_tuple(eq, 1 + rng() % 3, 0, rng);
      auto u2 = random_tuple(eq, 1 + rng() % 3, 0, rng);
      if (!equal(product(u1, u2), product(u2, conjugate_tuple(u1, u2.boundary()))))
        return std::pair{false, "exchange law failed: " + to_literal(u1) + " " + to_literal(u2)};
    }
    for (int it = 0; it < 1000; ++it) {
      // conjugation fixes boundary-e full-group genus-0 tuples
      covering_tuple t = random_boundary_e_tuple(eq, 2 + rng() % 2, rng);
      if (t.generated_subgroup().order() != g.order() || t.boundary() != perm::identity(3)) {
        --it;
        continue;
      }
      for (const auto& h : g.elements())
        if (!equal(t, conjugate_tuple(t, h)))
          return std::pair{false, "conjugation law failed: " + to_literal(t) + " by " +
                                      to_cycle_string(h)};
    }
    for (int it = 0; it < 1000; ++it) {
      // squares of conjugate involutions agree against full-group cofactors
      std::uint32_t l1 = static_cast<std::uint32_t>(rng() % 3);
      std::uint32_t l2 = static_cast<std::uint32_t>(rng() % 3);
      covering_tuple s = random_tuple(eq, 3, 0, rng);
      if (s.generated_subgroup().order() != g.order()) {
        --it;
        continue;
      }
      covering_tuple a(eq, {eq->letter_perm(l1), eq->letter_perm(l1)}, {});
      covering_tuple b(eq, {eq->letter_perm(l2), eq->letter_perm(l2)}, {});
      if (!equal(product(a, s), product(b, s)))
        return std::pair{false, "involution-square law failed: letters " + std::to_string(l1) +
                                    "," + std::to_string(l2) + " s=" + to_literal(s)};
    }
    return std::pair{true, std::string("4x1000 random law instances, zero violations")};
  });
}

inline std::vector<criterion_result> run_all(const options& opt) {
  std::vector<criterion_result> rs;
  auto emit = [&](criterion_result r) {
    if (opt.log) {
      (*opt.log) << (r.skipped ? "[SKIP]" : r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id
                 << ": " << r.name << " (" << r.detail << ") [" << r.seconds << "s]" << std::endl;
    }
    rs.push_back(std::move(r));
  };
  emit(criterion_1(opt));
  emit(criterion_2(opt));
  emit(criterion_3(opt));
  emit(criterion_4(opt));
  emit(criterion_5(opt));
  emit(criterion_6(opt));
  emit(criterion_7(opt));
  emit(criterion_8(opt));
  emit(criterion_9(opt));
  return rs;
}

} // namespace acceptance
} // namespace covsemi
