#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "covsemi/perm.hpp"

namespace covsemi {

// A group together with an ordered list of non-identity conjugacy classes
// C_1,...,C_m. Letters index the union O = C_1 u ... u C_m, classes kept in
// the given order and each class sorted lexicographically, so letter indices
// (and everything hashed from them) are reproducible.
//
// Owns the lazily built lookup structures shared by the move engine, the
// orbit decomposition and the word oracle: letter <-> element maps, the
// Cayley-graph shortest words over O, and the commutator fiber lists.
class equipped_group {
public:
  equipped_group(perm_group g, const std::vector<perm>& class_reps) : group_(std::move(g)) {
    if (class_reps.empty()) throw validation_error("equipment: no class representatives");
    std::vector<bool> used(group_.order(), false);
    letter_of_elem_.assign(group_.order(), -1);
    for (const auto& rep : class_reps) {
      if (!group_.contains(rep)) throw validation_error("equipment: representative not in group");
      if (rep.is_identity()) throw validation_error("equipment: identity cannot equip a class");
      auto cls = group_.conjugacy_class(rep);
      class_offsets_.push_back(static_cast<std::uint32_t>(letters_.size()));
      class_orders_.push_back(cls[0].order());
      for (const auto& e : cls) {
        std::uint32_t gi = group_.index_of(e);
        if (used[gi]) throw validation_error("equipment: duplicate conjugacy class");
        used[gi] = true;
        letter_of_elem_[gi] = static_cast<std::int32_t>(letters_.size());
        letters_.push_back(gi);
      }
      class_sizes_.push_back(static_cast<std::uint32_t>(cls.size()));
    }
    class_offsets_.push_back(static_cast<std::uint32_t>(letters_.size()));
    class_of_letter_.resize(letters_.size());
    for (std::size_t c = 0; c + 1 < class_offsets_.size(); ++c)
      for (std::uint32_t i = class_offsets_[c]; i < class_offsets_[c + 1]; ++i)
        class_of_letter_[i] = static_cast<std::uint16_t>(c);

    std::vector<perm> seed;
    seed.reserve(class_reps.size());
    for (const auto& r : class_reps) seed.push_back(r);
    generates_ = group_.normal_closure(seed).order() == group_.order();
  }

  const perm_group& group() const { return group_; }
  int degree() const { return group_.degree(); }
  std::size_t num_classes() const { return class_sizes_.size(); }
  std::size_t num_letters() const { return letters_.size(); }
  bool generates() const { return generates_; }

  std::uint32_t class_size(std::size_t i) const { return class_sizes_[i]; }
  int class_order(std::size_t i) const { return class_orders_[i]; }
  std::uint32_t class_offset(std::size_t i) const { return class_offsets_[i]; }
  perm class_representative(std::size_t i) const { return letter_perm(class_offsets_[i]); }

  std::uint32_t letter_elem(std::uint32_t letter) const { return letters_[letter]; }
  perm letter_perm(std::uint32_t letter) const { return group_.element(letters_[letter]); }
  std::uint16_t letter_class(std::uint32_t letter) const { return class_of_letter_[letter]; }

  bool same_equipment(const equipped_group& rhs) const {
    return this == &rhs || (group_.same_group(rhs.group_) && letters_ == rhs.letters_ &&
                            class_offsets_ == rhs.class_offsets_);
  }

  bool elem_in_O(std::uint32_t elem) const { return letter_of_elem_[elem] >= 0; }

  std::uint32_t letter_of_elem(std::uint32_t elem) const {
    std::int32_t l = letter_of_elem_[elem];
    if (l < 0) throw internal_error("equipment: element left O under conjugation");
    return static_cast<std::uint32_t>(l);
  }

  // Index of the class containing g; g must lie in O.
  std::size_t class_index(const perm& g) const {
    if (!group_.contains(g)) throw validation_error("equipment: element not in group");
    std::int32_t l = letter_of_elem_[group_.index_of(g)];
    if (l < 0) throw validation_error("equipment: element not in O");
    return class_of_letter_[l];
  }

  std::uint32_t letter_of(const perm& g) const {
    if (!group_.contains(g)) throw validation_error("equipment: element not in group");
    std::int32_t l = letter_of_elem_[group_.index_of(g)];
    if (l < 0) throw validation_error("equipment: element not in O");
    return static_cast<std::uint32_t>(l);
  }

  // Shortest word over O multiplying to the element, found breadth-first in
  // the Cayley graph; ties broken by letter order. Requires <O> = G.
  std::vector<std::uint32_t> lift_word(std::uint32_t elem) const {
    build_cayley();
    if (cayley_dist_[elem] < 0) throw validation_error("equipment: element not in <O>");
    std::vector<std::uint32_t> w;
    std::uint32_t x = elem;
    while (cayley_dist_[x] > 0) {
      std::uint32_t letter = cayley_letter_[x];
      w.push_back(letter);
      x = group_.mult(x, group_.inv(letters_[letter]));
    }
    std::reverse(w.begin(), w.end());
    return w;
  }

  std::vector<perm> lift_word(const perm& g) const {
    std::vector<perm> w;
    for (std::uint32_t l : lift_word(group_.index_of(g))) w.push_back(letter_perm(l));
    return w;
  }

  // All (a,b) with [a,b] = c, sorted; used to enumerate handle fibers during
  // boundary-constrained enumeration.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& commutator_fiber(
      std::uint32_t c) const {
    build_fibers();
    return comm_fibers_[c];
  }

private:
  void build_cayley() const {
    std::call_once(cayley_once_, [this] {
      cayley_dist_.assign(group_.order(), -1);
      cayley_letter_.assign(group_.order(), 0);
      std::vector<std::uint32_t> queue{group_.identity_index()};
      cayley_dist_[queue[0]] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t x = queue[head];
        for (std::uint32_t l = 0; l < letters_.size(); ++l) {
          std::uint32_t y = group_.mult(x, letters_[l]);
          if (cayley_dist_[y] < 0) {
            cayley_dist_[y] = cayley_dist_[x] + 1;
            cayley_letter_[y] = l;
            queue.push_back(y);
          }
        }
      }
    });
  }

  void build_fibers() const {
    std::call_once(fibers_once_, [this] {
      comm_fibers_.assign(group_.order(), {});
      std::uint32_t n = static_cast<std::uint32_t>(group_.order());
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) comm_fibers_[group_.comm(a, b)].emplace_back(a, b);
    });
  }

  perm_group group_;
  std::vector<std::uint32_t> letters_;        // letter -> element index
  std::vector<std::int32_t> letter_of_elem_;  // element index -> letter or -1
  std::vector<std::uint16_t> class_of_letter_;
  std::vector<std::uint32_t> class_offsets_;  // size m+1
  std::vector<std::uint32_t> class_sizes_;
  std::vector<int> class_orders_;
  bool generates_ = false;

  mutable std::once_flag cayley_once_;
  mutable std::vector<std::int32_t> cayley_dist_;
  mutable std::vector<std::uint32_t> cayley_letter_;
  mutable std::once_flag fibers_once_;
  mutable std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> comm_fibers_;
};

using equipment_ptr = std::shared_ptr<const equipped_group>;

inline equipment_ptr make_equipment(perm_group g, const std::vector<perm>& class_reps) {
  return std::make_shared<const equipped_group>(std::move(g), class_reps);
}

inline std::vector<std::uint32_t> type_vector_of_letters(const equipped_group& eq,
                                                         const std::vector<std::uint32_t>& letters) {
  std::vector<std::uint32_t> tau(eq.num_classes(), 0);
  for (std::uint32_t l : letters) ++tau[eq.letter_class(l)];
  return tau;
}

// Directed labeled graph on O: edge (g1 -> g2, label g3) iff g3^-1 g1 g3 = g2.
// One edge per (g1, g3) pair, |O|^2 in total; connected components are the
// conjugacy classes.
struct c_graph {
  struct edge {
    std::uint32_t from, to, label;
  };
  std::size_t num_vertices = 0;
  std::vector<edge> edges;              // sorted by (from, label)
  std::vector<std::string> vertex_names;
};

inline c_graph build_c_graph(const equipped_group& eq) {
  c_graph g;
  g.num_vertices = eq.num_letters();
  g.vertex_names.reserve(g.num_vertices);
  for (std::uint32_t v = 0; v < g.num_vertices; ++v)
    g.vertex_names.push_back(to_cycle_string(eq.letter_perm(v)));
  const auto& grp = eq.group();
  for (std::uint32_t g1 = 0; g1 < eq.num_letters(); ++g1)
    for (std::uint32_t g3 = 0; g3 < eq.num_letters(); ++g3) {
      std::uint32_t g2 = eq.letter_of_elem(grp.conj(eq.letter_elem(g1), eq.letter_elem(g3)));
      g.edges.push_back({g1, g2, g3});
    }
  return g;
}

inline std::string c_graph_to_dot(const c_graph& g) {
  std::ostringstream os;
  os << "digraph cgraph {\n";
  for (std::size_t v = 0; v < g.num_vertices; ++v)
    os << "  \"" << g.vertex_names[v] << "\";\n";
  for (const auto& e : g.edges)
    os << "  \"" << g.vertex_names[e.from] << "\" -> \"" << g.vertex_names[e.to] << "\" [label=\""
       << g.vertex_names[e.label] << "\"];\n";
  os << "}\n";
  return os.str();
}

inline std::vector<std::uint32_t> c_graph_components(const c_graph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.num_vertices);
  for (const auto& e : g.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<std::uint32_t> comp(g.num_vertices, ~0u);
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < g.num_vertices; ++s) {
    if (comp[s] != ~0u) continue;
    comp[s] = next;
    std::vector<std::uint32_t> stack{s};
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t w : adj[v])
        if (comp[w] == ~0u) {
          comp[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return comp;
}

// Exact isomorphism search: a vertex bijection carrying each edge
// (v1 -> v2, label v3) to (f(v1) -> f(v2), label f(v3)). Backtracking over
// vertices ordered by (out-label multiset size), with a node budget.
class c_graph_isomorphism {
public:
  static std::optional<std::vector<std::uint32_t>> find(const c_graph& g1, const c_graph& g2,
                                                        std::uint64_t node_budget = 1000000) {
    if (g1.num_vertices != g2.num_vertices || g1.edges.size() != g2.edges.size())
      return std::nullopt;
    c_graph_isomorphism search(g1, g2, node_budget);
    if (search.assign(0)) return search.map_;
    return std::nullopt;
  }

private:
  c_graph_isomorphism(const c_graph& g1, const c_graph& g2, std::uint64_t budget)
      : n_(g1.num_vertices), budget_(budget) {
    succ1_ = successors(g1);
    succ2_ = successors(g2);
    map_.assign(n_, ~0u);
    used_.assign(n_, false);
  }

  // succ[v][label] = target (each (v,label) determines a unique edge)
  static std::vector<std::vector<std::uint32_t>> successors(const c_graph& g) {
    std::vector<std::vector<std::uint32_t>> s(g.num_vertices,
                                              std::vector<std::uint32_t>(g.num_vertices, ~0u));
    for (const auto& e : g.edges) s[e.from][e.label] = e.to;
    return s;
  }

  bool consistent(std::uint32_t v) const {
    // check every edge among already-mapped vertices incident to v
    for (std::uint32_t a = 0; a < n_; ++a) {
      if (map_[a] == ~0u) continue;
      for (std::uint32_t l = 0; l < n_; ++l) {
        if (map_[l] == ~0u) continue;
        std::uint32_t t = succ1_[a][l];
        if (t == ~0u || map_[t] == ~0u) continue;
        if (a != v && l != v && t != v) continue;
        if (succ2_[map_[a]][map_[l]] != map_[t]) return false;
      }
    }
    return true;
  }

  bool assign(std::uint32_t v) {
    if (v == n_) return true;
    for (std::uint32_t w = 0; w < n_; ++w) {
      if (used_[w]) continue;
      if (--budget_ == 0) throw budget_exceeded("c_graph_isomorphic: node budget exhausted");
      map_[v] = w;
      used_[w] = true;
      if (consistent(v) && assign(v + 1)) return true;
      used_[w] = false;
      map_[v] = ~0u;
    }
    return false;
  }

  std::size_t n_;
  std::uint64_t budget_;
  std::vector<std::vector<std::uint32_t>> succ1_, succ2_;
  std::vector<std::uint32_t> map_;
  std::vector<bool> used_;
};

inline bool c_graphs_isomorphic(const c_graph& g1, const c_graph& g2,
                                std::uint64_t node_budget = 1000000) {
  return c_graph_isomorphism::find(g1, g2, node_budget).has_value();
}

} // namespace covsemi
