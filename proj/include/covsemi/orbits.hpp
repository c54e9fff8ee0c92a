#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "covsemi/fpgroup.hpp"
#include "covsemi/tuples.hpp"

namespace covsemi {

// Constrained tuple space: fixed type vector and genus, optional boundary
// value, optional G_t = G filter, with or without zeta moves, optionally up
// to simultaneous conjugation.
struct orbit_query {
  equipment_ptr eq;
  std::vector<std::uint32_t> type_vector;
  std::size_t genus = 0;
  std::optional<perm> boundary; // nullopt: any boundary
  bool require_full_group = true;
  bool use_zeta = false;
  bool conjugation_quotient = false;
  std::uint64_t space_bound = 10000000;
  int threads = 1;

  std::size_t length() const {
    std::size_t n = 0;
    for (auto t : type_vector) n += t;
    return n;
  }
};

struct orbit_report {
  std::uint64_t space_size = 0; // tuples satisfying every constraint
  std::vector<std::uint64_t> orbit_sizes;
  std::vector<covering_tuple> representatives; // lexicographically minimal members
  std::vector<perm> lift_invariants;           // one per orbit when a quotient is supplied

  std::size_t orbit_count() const { return orbit_sizes.size(); }

  bool operator==(const orbit_report& rhs) const {
    return space_size == rhs.space_size && orbit_sizes == rhs.orbit_sizes &&
           representatives == rhs.representatives && lift_invariants == rhs.lift_invariants;
  }
};

namespace detail {

// Fixed-width packing of a tuple into 63 bits, branch letters in the high
// fields so numeric order on keys equals lexicographic order on tuples.
class tuple_codec {
public:
  tuple_codec(const equipped_group& eq, std::size_t n, std::size_t p) : n_(n), p_(p) {
    letter_bits_ = width(eq.num_letters());
    elem_bits_ = width(eq.group().order());
    total_bits_ = n * letter_bits_ + 2 * p * elem_bits_;
    if (total_bits_ > 63)
      throw validation_error("orbit engine: tuple does not pack into 63 bits at this size");
  }

  std::uint64_t encode(const raw_tuple& t) const {
    std::uint64_t key = 0;
    for (std::uint32_t l : t.branch) key = (key << letter_bits_) | l;
    for (std::uint32_t h : t.handles) key = (key << elem_bits_) | h;
    return key;
  }

  void decode(std::uint64_t key, raw_tuple& out) const {
    out.branch.resize(n_);
    out.handles.resize(2 * p_);
    for (std::size_t k = 2 * p_; k-- > 0;) {
      out.handles[k] = static_cast<std::uint32_t>(key & ((1ULL << elem_bits_) - 1));
      key >>= elem_bits_;
    }
    for (std::size_t k = n_; k-- > 0;) {
      out.branch[k] = static_cast<std::uint32_t>(key & ((1ULL << letter_bits_) - 1));
      key >>= letter_bits_;
    }
  }

private:
  static int width(std::size_t count) {
    int b = 1;
    while ((1ULL << b) < count) ++b;
    return b;
  }

  std::size_t n_, p_;
  int letter_bits_, elem_bits_, total_bits_;
};

inline double estimated_states(const equipped_group& eq, const orbit_query& q) {
  std::size_t n = q.length();
  double seqs = 1.0;
  // multinomial(n; tau) * prod |C_i|^tau_i
  double fact = 1.0;
  for (std::size_t k = 2; k <= n; ++k) fact *= double(k);
  seqs = fact;
  for (std::size_t c = 0; c < q.type_vector.size(); ++c) {
    double f = 1.0;
    for (std::uint32_t k = 2; k <= q.type_vector[c]; ++k) f *= double(k);
    seqs /= f;
    seqs *= std::pow(double(eq.class_size(c)), double(q.type_vector[c]));
  }
  double handles = std::pow(double(eq.group().order()), 2.0 * double(q.genus));
  double div = q.boundary ? double(eq.group().order()) : 1.0;
  return seqs * handles / div;
}

// Emits every tuple of the query's type/genus/boundary in lexicographic
// order (branch letters, then handle pairs). G_t is not filtered here.
template <typename Sink>
void enumerate_space(const orbit_query& q, Sink&& sink) {
  const equipped_group& eq = *q.eq;
  const perm_group& g = eq.group();
  if (q.type_vector.size() != eq.num_classes())
    throw validation_error("orbit query: type vector length != number of classes");
  if (estimated_states(eq, q) > 4.0 * double(q.space_bound) + 1024.0)
    throw budget_exceeded("orbit query: estimated space exceeds bound");

  std::size_t n = q.length(), p = q.genus;
  std::uint32_t ng = static_cast<std::uint32_t>(g.order());
  std::optional<std::uint32_t> target;
  if (q.boundary) {
    if (!g.contains(*q.boundary)) throw validation_error("orbit query: boundary not in group");
    target = g.index_of(*q.boundary);
  }

  raw_tuple t;
  t.branch.resize(n);
  t.handles.resize(2 * p);
  std::vector<std::uint32_t> remaining = q.type_vector;
  std::uint64_t emitted = 0;

  auto emit = [&] {
    if (++emitted > q.space_bound) throw budget_exceeded("orbit query: space exceeds bound");
    sink(t);
  };

  // handle part: first p-1 pairs free, the last pair read off the
  // commutator fiber when the boundary is pinned
  std::function<void(std::size_t, std::uint32_t)> handle_rec = [&](std::size_t j,
                                                                   std::uint32_t acc) {
    if (!target) {
      if (j == p) return emit();
      for (std::uint32_t a = 0; a < ng; ++a)
        for (std::uint32_t b = 0; b < ng; ++b) {
          t.handles[2 * j] = a;
          t.handles[2 * j + 1] = b;
          handle_rec(j + 1, 0);
        }
      return;
    }
    if (j + 1 == p) {
      std::uint32_t need = g.mult(g.inv(acc), *target);
      for (auto [a, b] : eq.commutator_fiber(need)) {
        t.handles[2 * j] = a;
        t.handles[2 * j + 1] = b;
        emit();
      }
      return;
    }
    for (std::uint32_t a = 0; a < ng; ++a)
      for (std::uint32_t b = 0; b < ng; ++b) {
        t.handles[2 * j] = a;
        t.handles[2 * j + 1] = b;
        handle_rec(j + 1, g.mult(acc, g.comm(a, b)));
      }
  };

  auto finish_branch = [&](std::uint32_t prod) {
    if (p == 0) {
      if (!target || prod == *target) emit();
      return;
    }
    // remaining constraint: commutator product must equal prod^-1 * target
    handle_rec(0, prod);
  };

  std::function<void(std::size_t, std::uint32_t)> branch_rec = [&](std::size_t i,
                                                                   std::uint32_t prod) {
    if (i == n) return finish_branch(prod);
    if (target && p == 0 && i + 1 == n) {
      // last letter forced by the boundary
      std::uint32_t need = g.mult(g.inv(prod), *target);
      if (!eq.elem_in_O(need)) return;
      std::uint32_t l = eq.letter_of_elem(need);
      if (remaining[eq.letter_class(l)] == 0) return;
      t.branch[i] = l;
      emit();
      return;
    }
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      if (remaining[c] == 0) continue;
      --remaining[c];
      for (std::uint32_t l = eq.class_offset(c); l < eq.class_offset(c + 1); ++l) {
        t.branch[i] = l;
        branch_rec(i + 1, g.mult(prod, eq.letter_elem(l)));
      }
      ++remaining[c];
    }
  };

  // branch classes must be tried in letter order across classes: since each
  // class occupies a contiguous letter range in equipment order, iterating
  // classes in order gives global letter order
  if (n == 0) {
    finish_branch(g.identity_index());
  } else {
    branch_rec(0, g.identity_index());
  }
}

// Frontier expansion shared by decomposition and orbit search. Sharded
// visited set; insertions are check-and-insert under the shard lock, so the
// final orbit content is schedule-independent.
class orbit_walker {
public:
  orbit_walker(const equipped_group& eq, const tuple_codec& codec, std::size_t n, std::size_t p,
               bool use_zeta, bool conj_quotient, int threads)
      : eq_(eq), codec_(codec), threads_(std::max(1, threads)) {
    raw_tuple probe;
    probe.branch.resize(n);
    probe.handles.resize(2 * p);
    enumerate_moves(probe, use_zeta, moves_);
    if (conj_quotient)
      for (const auto& g : eq.group().generators()) conj_gens_.push_back(eq.group().index_of(g));
  }

  bool known(std::uint64_t key) const {
    return shards_[shard_of(key)].contains(key);
  }

  // Expands the full orbit of seed. Returns its size. `visit` (optional) is
  // called for every member key, single-threaded per level batch.
  template <typename Visit>
  std::uint64_t expand(std::uint64_t seed, Visit&& visit) {
    std::vector<std::uint64_t> frontier{seed};
    insert(seed);
    visit(seed);
    std::uint64_t size = 1;
    std::vector<std::vector<std::uint64_t>> locals(threads_);
    while (!frontier.empty()) {
      if (threads_ == 1) {
        expand_range(frontier, 0, frontier.size(), locals[0]);
      } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (frontier.size() + threads_ - 1) / threads_;
        for (int w = 0; w < threads_; ++w) {
          std::size_t lo = std::min(frontier.size(), w * chunk);
          std::size_t hi = std::min(frontier.size(), lo + chunk);
          pool.emplace_back([&, lo, hi, w] { expand_range(frontier, lo, hi, locals[w]); });
        }
        for (auto& th : pool) th.join();
      }
      frontier.clear();
      for (auto& loc : locals) {
        for (std::uint64_t k : loc) {
          visit(k);
          frontier.push_back(k);
        }
        size += loc.size();
        loc.clear();
      }
    }
    return size;
  }

  std::uint64_t expand(std::uint64_t seed) {
    return expand(seed, [](std::uint64_t) {});
  }

private:
  static std::size_t shard_of(std::uint64_t key) { return splitmix64(key ^ 0x5bf03f1fULL) & 63; }

  bool insert(std::uint64_t key) {
    std::size_t s = shard_of(key);
    if (threads_ == 1) return shards_[s].insert(key);
    std::lock_guard<std::mutex> lk(locks_[s]);
    return shards_[s].insert(key);
  }

  void expand_range(const std::vector<std::uint64_t>& frontier, std::size_t lo, std::size_t hi,
                    std::vector<std::uint64_t>& out) {
    raw_tuple state, next;
    for (std::size_t idx = lo; idx < hi; ++idx) {
      codec_.decode(frontier[idx], state);
      for (const move& m : moves_) {
        next = state;
        apply_move(eq_, next, m);
        std::uint64_t k = codec_.encode(next);
        if (insert(k)) out.push_back(k);
      }
      for (std::uint32_t c : conj_gens_) {
        next = state;
        const perm_group& g = eq_.group();
        for (auto& l : next.branch) l = eq_.letter_of_elem(g.conj(eq_.letter_elem(l), c));
        for (auto& e : next.handles) e = g.conj(e, c);
        std::uint64_t k = codec_.encode(next);
        if (insert(k)) out.push_back(k);
      }
    }
  }

  const equipped_group& eq_;
  const tuple_codec& codec_;
  int threads_;
  std::vector<move> moves_;
  std::vector<std::uint32_t> conj_gens_;
  flat_set64 shards_[64];
  std::mutex locks_[64];
};

} // namespace detail

inline void validate_query(const orbit_query& q) {
  if (!q.eq) throw validation_error("orbit query: missing equipment");
  if (q.type_vector.size() != q.eq->num_classes())
    throw validation_error("orbit query: type vector length != number of classes");
  if (q.conjugation_quotient && q.boundary) {
    const perm_group& z = q.eq->group().center();
    if (!z.contains(*q.boundary))
      throw validation_error(
          "orbit query: conjugation quotient preserves the boundary constraint only for "
          "central boundary values");
  }
}

// Every tuple matching the query, each exactly once, in lexicographic order.
// Honors all constraints including G_t = G (per-tuple subgroup check), so
// keep it to desk-scale spaces; orbit_decompose filters G_t per orbit.
inline void enumerate_tuples(const orbit_query& q,
                             const std::function<void(const covering_tuple&)>& fn) {
  validate_query(q);
  const equipped_group& eq = *q.eq;
  detail::enumerate_space(q, [&](const detail::raw_tuple& t) {
    covering_tuple ct(q.eq, t);
    if (q.require_full_group && ct.generated_subgroup().order() != eq.group().order()) return;
    fn(ct);
  });
}

inline orbit_report orbit_decompose(const orbit_query& q, const finite_quotient* quot = nullptr) {
  validate_query(q);
  const equipped_group& eq = *q.eq;
  std::size_t n = q.length(), p = q.genus;
  detail::tuple_codec codec(eq, n, p);

  std::vector<std::uint64_t> seeds;
  detail::enumerate_space(q, [&](const detail::raw_tuple& t) { seeds.push_back(codec.encode(t)); });

  detail::orbit_walker walker(eq, codec, n, p, q.use_zeta, q.conjugation_quotient, q.threads);
  orbit_report rep;
  detail::raw_tuple scratch;
  for (std::uint64_t seed : seeds) {
    if (walker.known(seed)) continue;
    std::uint64_t size = walker.expand(seed);
    codec.decode(seed, scratch);
    covering_tuple t(q.eq, scratch);
    if (q.require_full_group && t.generated_subgroup().order() != eq.group().order()) continue;
    rep.space_size += size;
    rep.orbit_sizes.push_back(size);
    rep.representatives.push_back(std::move(t));
    if (quot) rep.lift_invariants.push_back(lifting_invariant(*quot, rep.representatives.back()).value());
  }
  return rep;
}

// Hurwitz-space component count: orbits with boundary e and G_t = G.
inline std::uint64_t count_components(equipment_ptr eq, std::vector<std::uint32_t> type_vector,
                                      std::size_t genus, std::uint64_t space_bound = 10000000,
                                      int threads = 1) {
  orbit_query q;
  q.eq = std::move(eq);
  q.type_vector = std::move(type_vector);
  q.genus = genus;
  q.boundary = perm::identity(q.eq->degree());
  q.require_full_group = true;
  q.space_bound = space_bound;
  q.threads = threads;
  return orbit_decompose(q).orbit_count();
}

// ---- pairwise orbit membership ---------------------------------------------

enum class orbit_relation { equal, distinct, inconclusive };

struct orbit_equal_result {
  orbit_relation relation;
  std::string certificate; // which invariant separated, or how the search ended
};

inline orbit_equal_result orbit_equal(const covering_tuple& t1, const covering_tuple& t2,
                                      std::uint64_t budget = 1000000,
                                      const finite_quotient* quot = nullptr,
                                      bool use_zeta = false) {
  if (!t1.same_equipment(t2)) throw validation_error("orbit_equal: equipment mismatch");
  if (t1.length() != t2.length() || t1.genus() != t2.genus())
    return {orbit_relation::distinct, "length or genus differ"};
  if (t1.type() != t2.type()) return {orbit_relation::distinct, "type vectors differ"};
  if (t1.boundary() != t2.boundary()) return {orbit_relation::distinct, "boundary values differ"};
  if (!t1.generated_subgroup().same_group(t2.generated_subgroup()))
    return {orbit_relation::distinct, "generated subgroups differ"};
  if (quot && lifting_invariant(*quot, t1) != lifting_invariant(*quot, t2))
    return {orbit_relation::distinct, "lifting invariants differ"};
  if (t1 == t2) return {orbit_relation::equal, "identical tuples"};

  const equipped_group& eq = *t1.equipment();
  detail::tuple_codec codec(eq, t1.length(), t1.genus());
  std::uint64_t key2 = codec.encode(t2.raw());

  struct search_hit {};
  detail::orbit_walker walker(eq, codec, t1.length(), t1.genus(), use_zeta, false, 1);
  std::uint64_t visited = 0;
  try {
    walker.expand(codec.encode(t1.raw()), [&](std::uint64_t k) {
      if (k == key2) throw search_hit{};
      if (++visited > budget) throw budget_exceeded("orbit_equal: node budget exhausted");
    });
  } catch (const search_hit&) {
    return {orbit_relation::equal, "connected by moves"};
  } catch (const budget_exceeded&) {
    return {orbit_relation::inconclusive, "budget exhausted with matching invariants"};
  }
  return {orbit_relation::distinct, "orbit of first tuple exhausted"};
}

// ---- stabilization scan ----------------------------------------------------

struct scan_row {
  std::vector<std::uint32_t> type_vector;
  std::size_t genus = 0;
  std::uint64_t components = 0;
  double wall_ms = 0.0;
};

struct scan_table {
  std::vector<scan_row> rows;
  bool complete = true;     // false when a bound interrupted the scan
  std::size_t onset = 0;    // first index from which counts equal the final count

  void compute_onset() {
    if (rows.empty()) return;
    std::uint64_t last = rows.back().components;
    std::size_t k = rows.size();
    while (k > 0 && rows[k - 1].components == last) --k;
    onset = k;
  }
};

inline scan_table stabilization_scan(equipment_ptr eq, std::vector<std::uint32_t> tau_start,
                                     const std::vector<std::uint32_t>& tau_step, std::size_t count,
                                     std::size_t genus, std::uint64_t space_bound = 10000000,
                                     int threads = 1) {
  if (tau_start.size() != eq->num_classes() || tau_step.size() != eq->num_classes())
    throw validation_error("scan: type vector length != number of classes");
  scan_table table;
  std::vector<std::uint32_t> tau = std::move(tau_start);
  for (std::size_t k = 0; k < count; ++k) {
    scan_row row;
    row.type_vector = tau;
    row.genus = genus;
    auto start = std::chrono::steady_clock::now();
    try {
      row.components = count_components(eq, tau, genus, space_bound, threads);
    } catch (const budget_exceeded&) {
      table.complete = false;
      break;
    }
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    table.rows.push_back(std::move(row));
    for (std::size_t c = 0; c < tau.size(); ++c) tau[c] += tau_step[c];
  }
  table.compute_onset();
  return table;
}

inline std::string scan_to_csv(const scan_table& table, std::size_t num_classes) {
  std::ostringstream os;
  for (std::size_t c = 0; c < num_classes; ++c) os << "tau_" << c + 1 << ',';
  os << "genus,components,wall_ms\n";
  for (const auto& row : table.rows) {
    for (auto t : row.type_vector) os << t << ',';
    os << row.genus << ',' << row.components << ',' << std::llround(row.wall_ms) << '\n';
  }
  return os.str();
}

} // namespace covsemi
