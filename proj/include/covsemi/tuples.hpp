#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "covsemi/equipped.hpp"

namespace covsemi {

// Reduced-form element: branch letters g_1..g_n in O followed by handle pairs
// (a_1,b_1)..(a_p,b_p) in G^2. Branch entries are letter indices, handle
// entries element indices, both relative to the owning equipment.
//
// Moves act on the last branch letter; transporting it past handles 1..j-1
// conjugates it by u_{j-1} = [a_1,b_1]...[a_{j-1},b_{j-1}].
class covering_tuple;

struct move {
  enum kind_t : std::uint8_t { H, LAMBDA, MU, ZETA } kind;
  std::uint16_t index; // H: position in [0, n-2]; others: handle in [0, p-1]
  std::int8_t dir;     // +1 or -1

  bool operator==(const move&) const = default;
};

inline std::string to_string(const move& m) {
  static const char* names[] = {"H", "lambda", "mu", "zeta"};
  return std::string(names[m.kind]) + "[" + std::to_string(m.index) + "]" +
         (m.dir > 0 ? "+" : "-");
}

namespace detail {

struct raw_tuple {
  std::vector<std::uint32_t> branch;  // letter indices
  std::vector<std::uint32_t> handles; // element indices, flattened pairs

  std::size_t n() const { return branch.size(); }
  std::size_t p() const { return handles.size() / 2; }
  bool operator==(const raw_tuple&) const = default;
};

// u_{j-1}: product of the first j handle commutators.
inline std::uint32_t transport_prefix(const perm_group& g, const raw_tuple& t, std::size_t j) {
  std::uint32_t u = g.identity_index();
  for (std::size_t k = 0; k < j; ++k)
    u = g.mult(u, g.comm(t.handles[2 * k], t.handles[2 * k + 1]));
  return u;
}

inline void apply_h(const equipped_group& eq, raw_tuple& t, std::size_t i, int dir) {
  const perm_group& g = eq.group();
  std::uint32_t x = eq.letter_elem(t.branch[i]);
  std::uint32_t y = eq.letter_elem(t.branch[i + 1]);
  if (dir > 0) {
    // (g_i, g_{i+1}) -> (g_{i+1}, g_i^{g_{i+1}})
    t.branch[i] = t.branch[i + 1];
    t.branch[i + 1] = eq.letter_of_elem(g.conj(x, y));
  } else {
    // (g_i, g_{i+1}) -> (g_i g_{i+1} g_i^-1, g_i)
    t.branch[i] = eq.letter_of_elem(g.mult(g.mult(x, y), g.inv(x)));
    t.branch[i + 1] = eq.letter_of_elem(x);
  }
}

inline void apply_lambda(const equipped_group& eq, raw_tuple& t, std::size_t j, int dir) {
  const perm_group& g = eq.group();
  std::uint32_t u = transport_prefix(g, t, j);
  std::uint32_t a = t.handles[2 * j], b = t.handles[2 * j + 1];
  std::uint32_t gn = eq.letter_elem(t.branch.back());
  if (dir > 0) {
    std::uint32_t h = g.conj(gn, u);
    std::uint32_t c1 = g.mult(g.mult(a, g.inv(b)), g.mult(g.inv(a), g.inv(h)));
    std::uint32_t hp = g.conj(h, c1);
    t.handles[2 * j] = g.mult(h, a);
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(u, hp), g.inv(u)));
  } else {
    std::uint32_t hp = g.conj(gn, u);
    std::uint32_t h = g.conj(hp, g.mult(g.mult(a, b), g.inv(a)));
    t.handles[2 * j] = g.mult(g.inv(h), a);
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(u, h), g.inv(u)));
  }
}

inline void apply_mu(const equipped_group& eq, raw_tuple& t, std::size_t j, int dir) {
  const perm_group& g = eq.group();
  std::uint32_t u = transport_prefix(g, t, j);
  std::uint32_t a = t.handles[2 * j], b = t.handles[2 * j + 1];
  std::uint32_t gn = eq.letter_elem(t.branch.back());
  if (dir > 0) {
    std::uint32_t uj = g.mult(u, g.comm(a, b));
    std::uint32_t h = g.conj(gn, uj);
    std::uint32_t bp = g.mult(g.inv(h), b);
    std::uint32_t c2 = g.mult(g.mult(b, g.inv(a)), g.mult(g.inv(b), h));
    std::uint32_t hp = g.conj(h, c2);
    std::uint32_t ujp = g.mult(u, g.comm(a, bp));
    t.handles[2 * j + 1] = bp;
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(ujp, hp), g.inv(ujp)));
  } else {
    std::uint32_t ujp = g.mult(u, g.comm(a, b)); // stored b is b'
    std::uint32_t hp = g.conj(gn, ujp);
    std::uint32_t h = g.conj(hp, g.mult(g.mult(b, a), g.inv(b)));
    std::uint32_t bnew = g.mult(h, b);
    std::uint32_t uj = g.mult(u, g.comm(a, bnew));
    t.handles[2 * j + 1] = bnew;
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(uj, h), g.inv(uj)));
  }
}

inline void apply_zeta(const equipped_group& eq, raw_tuple& t, std::size_t j, int dir) {
  const perm_group& g = eq.group();
  std::uint32_t u = transport_prefix(g, t, j);
  std::uint32_t a = t.handles[2 * j], b = t.handles[2 * j + 1];
  std::uint32_t gn = eq.letter_elem(t.branch.back());
  if (dir > 0) {
    std::uint32_t h = g.conj(gn, u);
    std::uint32_t hp = g.conj(h, g.comm(a, b));
    t.handles[2 * j] = g.conj(a, hp);
    t.handles[2 * j + 1] = g.conj(b, hp);
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(u, hp), g.inv(u)));
  } else {
    std::uint32_t hp = g.conj(gn, u);
    std::uint32_t a0 = g.conj(a, g.inv(hp));
    std::uint32_t b0 = g.conj(b, g.inv(hp));
    std::uint32_t h = g.conj(hp, g.inv(g.comm(a0, b0)));
    t.handles[2 * j] = a0;
    t.handles[2 * j + 1] = b0;
    t.branch.back() = eq.letter_of_elem(g.mult(g.mult(u, h), g.inv(u)));
  }
}

inline void check_move(const raw_tuple& t, const move& m) {
  if (m.dir != 1 && m.dir != -1) throw validation_error("move: dir must be +1 or -1");
  if (m.kind == move::H) {
    if (t.n() < 2 || m.index + 1 >= t.n()) throw validation_error("move: H index out of range");
  } else {
    if (t.n() == 0) throw validation_error("move: no branch letter to act on");
    if (m.index >= t.p()) throw validation_error("move: handle index out of range");
  }
}

inline void apply_move(const equipped_group& eq, raw_tuple& t, const move& m) {
  check_move(t, m);
  switch (m.kind) {
    case move::H: apply_h(eq, t, m.index, m.dir); break;
    case move::LAMBDA: apply_lambda(eq, t, m.index, m.dir); break;
    case move::MU: apply_mu(eq, t, m.index, m.dir); break;
    case move::ZETA: apply_zeta(eq, t, m.index, m.dir); break;
  }
}

inline void enumerate_moves(const raw_tuple& t, bool with_zeta, std::vector<move>& out) {
  out.clear();
  for (std::size_t i = 0; i + 1 < t.n(); ++i) {
    out.push_back({move::H, static_cast<std::uint16_t>(i), +1});
    out.push_back({move::H, static_cast<std::uint16_t>(i), -1});
  }
  if (t.n() >= 1) {
    for (std::size_t j = 0; j < t.p(); ++j) {
      auto idx = static_cast<std::uint16_t>(j);
      out.push_back({move::LAMBDA, idx, +1});
      out.push_back({move::LAMBDA, idx, -1});
      out.push_back({move::MU, idx, +1});
      out.push_back({move::MU, idx, -1});
      if (with_zeta) {
        out.push_back({move::ZETA, idx, +1});
        out.push_back({move::ZETA, idx, -1});
      }
    }
  }
}

} // namespace detail

class covering_tuple {
public:
  covering_tuple(equipment_ptr eq, std::vector<perm> branch,
                 std::vector<std::pair<perm, perm>> handles)
      : eq_(std::move(eq)) {
    raw_.branch.reserve(branch.size());
    for (const auto& g : branch) raw_.branch.push_back(eq_->letter_of(g));
    raw_.handles.reserve(handles.size() * 2);
    for (const auto& [a, b] : handles) {
      raw_.handles.push_back(index_in_group(a));
      raw_.handles.push_back(index_in_group(b));
    }
  }

  covering_tuple(equipment_ptr eq, detail::raw_tuple raw)
      : eq_(std::move(eq)), raw_(std::move(raw)) {}

  const equipment_ptr& equipment() const { return eq_; }
  const detail::raw_tuple& raw() const { return raw_; }
  std::size_t length() const { return raw_.n(); }
  std::size_t genus() const { return raw_.p(); }

  perm branch_letter(std::size_t i) const { return eq_->letter_perm(raw_.branch[i]); }
  std::pair<perm, perm> handle(std::size_t j) const {
    return {eq_->group().element(raw_.handles[2 * j]),
            eq_->group().element(raw_.handles[2 * j + 1])};
  }

  perm boundary() const {
    const perm_group& g = eq_->group();
    std::uint32_t r = g.identity_index();
    for (std::uint32_t l : raw_.branch) r = g.mult(r, eq_->letter_elem(l));
    for (std::size_t j = 0; j < raw_.p(); ++j)
      r = g.mult(r, g.comm(raw_.handles[2 * j], raw_.handles[2 * j + 1]));
    return g.element(r);
  }

  std::vector<std::uint32_t> type() const { return type_vector_of_letters(*eq_, raw_.branch); }

  perm_group generated_subgroup() const {
    std::vector<perm> gens;
    gens.reserve(raw_.n() + 2 * raw_.p());
    for (std::uint32_t l : raw_.branch) gens.push_back(eq_->letter_perm(l));
    for (std::uint32_t h : raw_.handles) gens.push_back(eq_->group().element(h));
    if (gens.empty()) gens.push_back(perm::identity(eq_->degree()));
    return perm_group::closure(gens);
  }

  bool handles_trivial() const {
    std::uint32_t e = eq_->group().identity_index();
    for (std::uint32_t h : raw_.handles)
      if (h != e) return false;
    return true;
  }

  covering_tuple apply(const move& m) const {
    covering_tuple r = *this;
    detail::apply_move(*eq_, r.raw_, m);
    return r;
  }

  covering_tuple apply(const std::vector<move>& word) const {
    covering_tuple r = *this;
    for (const auto& m : word) detail::apply_move(*eq_, r.raw_, m);
    return r;
  }

  bool operator==(const covering_tuple& rhs) const {
    return same_equipment(rhs) && raw_ == rhs.raw_;
  }
  bool operator!=(const covering_tuple& rhs) const { return !(*this == rhs); }

  bool same_equipment(const covering_tuple& rhs) const {
    return eq_ == rhs.eq_ || eq_->same_equipment(*rhs.eq_);
  }

private:
  std::uint32_t index_in_group(const perm& g) const {
    if (!eq_->group().contains(g)) throw validation_error("tuple: handle entry not in group");
    return eq_->group().index_of(g);
  }

  equipment_ptr eq_;
  detail::raw_tuple raw_;

  friend covering_tuple product(const covering_tuple&, const covering_tuple&);
  friend covering_tuple conjugate_tuple(const covering_tuple&, const perm&);
};

inline covering_tuple h_move(const covering_tuple& t, std::size_t i, int dir) {
  return t.apply({move::H, static_cast<std::uint16_t>(i), static_cast<std::int8_t>(dir)});
}
inline covering_tuple lambda_move(const covering_tuple& t, std::size_t j, int dir) {
  return t.apply({move::LAMBDA, static_cast<std::uint16_t>(j), static_cast<std::int8_t>(dir)});
}
inline covering_tuple mu_move(const covering_tuple& t, std::size_t j, int dir) {
  return t.apply({move::MU, static_cast<std::uint16_t>(j), static_cast<std::int8_t>(dir)});
}
inline covering_tuple zeta_move(const covering_tuple& t, std::size_t j, int dir) {
  return t.apply({move::ZETA, static_cast<std::uint16_t>(j), static_cast<std::int8_t>(dir)});
}

// Gluing product in reduced form: the second factor's branch letters are
// transported left past the first factor's handles, picking up conjugation by
// U1 = u_p(t1): g -> U1 g U1^-1.
inline covering_tuple product(const covering_tuple& t1, const covering_tuple& t2) {
  if (!t1.same_equipment(t2)) throw validation_error("product: equipment mismatch");
  const equipped_group& eq = *t1.equipment();
  const perm_group& g = eq.group();
  std::uint32_t u1 = detail::transport_prefix(g, t1.raw(), t1.raw().p());
  detail::raw_tuple r = t1.raw();
  for (std::uint32_t l : t2.raw().branch)
    r.branch.push_back(eq.letter_of_elem(g.mult(g.mult(u1, eq.letter_elem(l)), g.inv(u1))));
  for (std::uint32_t h : t2.raw().handles) r.handles.push_back(h);
  return covering_tuple(t1.equipment(), std::move(r));
}

inline covering_tuple conjugate_tuple(const covering_tuple& t, const perm& h) {
  const equipped_group& eq = *t.equipment();
  const perm_group& g = eq.group();
  if (!g.contains(h)) throw validation_error("conjugate_tuple: conjugator not in group");
  std::uint32_t hi = g.index_of(h);
  detail::raw_tuple r = t.raw();
  for (auto& l : r.branch) l = eq.letter_of_elem(g.conj(eq.letter_elem(l), hi));
  for (auto& e : r.handles) e = g.conj(e, hi);
  return covering_tuple(t.equipment(), std::move(r));
}

// ---- literal syntax ------------------------------------------------------
// "[(1 2),(1 3) | (1 2 3),(1 3); (2 3),e]": branch letters before '|',
// handle pairs "a,b" separated by ';' after it.

inline std::string to_literal(const covering_tuple& t) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < t.length(); ++i) {
    if (i) os << ',';
    os << to_cycle_string(t.branch_letter(i));
  }
  os << " | ";
  for (std::size_t j = 0; j < t.genus(); ++j) {
    if (j) os << "; ";
    auto [a, b] = t.handle(j);
    os << to_cycle_string(a) << ',' << to_cycle_string(b);
  }
  os << ']';
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

} // namespace detail

inline covering_tuple parse_tuple_literal(equipment_ptr eq, const std::string& text) {
  std::string s = detail::strip(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw validation_error("tuple literal: expected [...] in '" + text + "'");
  s = s.substr(1, s.size() - 2);
  auto halves = detail::split_top_level(s, '|');
  if (halves.size() > 2) throw validation_error("tuple literal: more than one '|'");
  int d = eq->degree();
  std::vector<perm> branch;
  for (const auto& tok : detail::split_top_level(halves[0], ',')) {
    std::string w = detail::strip(tok);
    if (!w.empty()) branch.push_back(parse_perm(w, d));
  }
  std::vector<std::pair<perm, perm>> handles;
  if (halves.size() == 2) {
    for (const auto& pair_tok : detail::split_top_level(halves[1], ';')) {
      std::string w = detail::strip(pair_tok);
      if (w.empty()) continue;
      auto parts = detail::split_top_level(w, ',');
      if (parts.size() != 2) throw validation_error("tuple literal: handle must be 'a,b'");
      handles.emplace_back(parse_perm(detail::strip(parts[0]), d),
                           parse_perm(detail::strip(parts[1]), d));
    }
  }
  return covering_tuple(std::move(eq), std::move(branch), std::move(handles));
}

// ---- handle trivialization -----------------------------------------------

struct normalize_result {
  bool reduced = false;
  covering_tuple tuple;
  std::vector<move> moves; // applying these to the input yields `tuple`
  std::uint64_t nodes = 0;
};

namespace detail {

// Walk the branch letter at position i to the last slot. At each step the
// traveler either keeps its value (H-) or is conjugated by the letter it
// passes (H+); `conj_mask` bit k says to conjugate when crossing position
// k+1. Letters behind the traveler get conjugated as a side effect, letters
// ahead are untouched.
inline void walk_right(const equipped_group& eq, raw_tuple& t, std::size_t i,
                       std::uint64_t conj_mask, std::vector<move>& rec) {
  for (std::size_t k = i; k + 1 < t.n(); ++k) {
    move m{move::H, static_cast<std::uint16_t>(k),
           static_cast<std::int8_t>((conj_mask >> k) & 1 ? +1 : -1)};
    apply_h(eq, t, k, m.dir);
    rec.push_back(m);
  }
}

// Make the last branch letter equal to the element v (which must lie in O),
// using H-moves only. Returns false when no single right-sweep realizes it.
inline bool stage_letter_at_end(const equipped_group& eq, raw_tuple& t, std::uint32_t v,
                                std::vector<move>& rec) {
  const perm_group& g = eq.group();
  std::size_t n = t.n();
  if (n == 0) return false;
  std::uint16_t want_class = eq.letter_class(eq.letter_of_elem(v));
  for (std::size_t ii = n; ii-- > 0;) {
    if (eq.letter_class(t.branch[ii]) != want_class) continue;
    // reachable traveler values after each prefix of the sweep
    std::vector<std::unordered_map<std::uint32_t, std::pair<std::uint32_t, bool>>> dp(n);
    std::uint32_t start = eq.letter_elem(t.branch[ii]);
    dp[ii].emplace(start, std::make_pair(start, false));
    for (std::size_t k = ii; k + 1 < n; ++k) {
      std::uint32_t r = eq.letter_elem(t.branch[k + 1]);
      for (const auto& [val, from] : dp[k]) {
        dp[k + 1].try_emplace(val, val, false);
        dp[k + 1].try_emplace(g.conj(val, r), val, true);
      }
    }
    if (!dp[n - 1].count(v)) continue;
    std::uint64_t mask = 0;
    std::uint32_t cur = v;
    for (std::size_t k = n - 1; k > ii; --k) {
      auto [prev, used] = dp[k].at(cur);
      if (used) mask |= 1ULL << (k - 1);
      cur = prev;
    }
    walk_right(eq, t, ii, mask, rec);
    return true;
  }
  return false;
}

inline bool greedy_trivialize(const equipped_group& eq, raw_tuple& t, std::vector<move>& rec,
                              std::uint64_t budget, std::uint64_t& nodes) {
  const perm_group& g = eq.group();
  std::uint32_t e = g.identity_index();
  for (std::size_t j = 0; j < t.p(); ++j) {
    // handles before j are already trivial, so the transport conjugators
    // u_{j-1} and (once a_j = e) u_j vanish and the staged letter is used as
    // is by the lambda/mu move.
    while (t.handles[2 * j] != e) {
      if (++nodes > budget) return false;
      std::vector<std::uint32_t> w;
      try {
        w = eq.lift_word(g.inv(t.handles[2 * j]));
      } catch (const validation_error&) {
        return false; // a_j outside <O>
      }
      if (!stage_letter_at_end(eq, t, eq.letter_elem(w.back()), rec)) return false;
      apply_lambda(eq, t, j, +1);
      rec.push_back({move::LAMBDA, static_cast<std::uint16_t>(j), +1});
    }
    while (t.handles[2 * j + 1] != e) {
      if (++nodes > budget) return false;
      std::vector<std::uint32_t> w;
      try {
        w = eq.lift_word(t.handles[2 * j + 1]);
      } catch (const validation_error&) {
        return false;
      }
      if (!stage_letter_at_end(eq, t, eq.letter_elem(w.front()), rec)) return false;
      apply_mu(eq, t, j, +1);
      rec.push_back({move::MU, static_cast<std::uint16_t>(j), +1});
    }
  }
  return true;
}

} // namespace detail

// Search for a move-equivalent tuple whose handles are all (e,e). Greedy
// class staging first (the guaranteed regime is tau_i > n_i * p_i for all i),
// breadth-first fallback within the node budget. A failure is only a budget
// statement, not a proof of impossibility.
inline normalize_result normalize_handles(const covering_tuple& t, std::uint64_t budget = 1000000) {
  const equipped_group& eq = *t.equipment();
  normalize_result res{false, t, {}, 0};
  if (t.handles_trivial()) {
    res.reduced = true;
    return res;
  }

  detail::raw_tuple cur = t.raw();
  std::vector<move> rec;
  if (detail::greedy_trivialize(eq, cur, rec, budget, res.nodes)) {
    res.reduced = true;
    res.tuple = covering_tuple(t.equipment(), std::move(cur));
    res.moves = std::move(rec);
    return res;
  }

  // fallback: plain BFS from where the greedy stopped, looking for any state
  // with trivial handles
  if (cur.n() == 0) return res;
  std::uint32_t e = eq.group().identity_index();
  auto encode = [&](const detail::raw_tuple& r) {
    std::string key;
    key.reserve((r.branch.size() + r.handles.size()) * 4);
    auto put = [&](std::uint32_t v) {
      for (int s = 0; s < 32; s += 8) key.push_back(static_cast<char>((v >> s) & 0xff));
    };
    for (auto v : r.branch) put(v);
    for (auto v : r.handles) put(v);
    return key;
  };
  auto trivial = [&](const detail::raw_tuple& r) {
    for (auto h : r.handles)
      if (h != e) return false;
    return true;
  };

  std::vector<detail::raw_tuple> states{cur};
  std::vector<std::pair<std::uint32_t, move>> parent{{0, move{move::H, 0, +1}}};
  std::unordered_map<std::string, std::uint32_t> seen;
  seen.emplace(encode(cur), 0);
  std::vector<move> cand;
  for (std::size_t head = 0; head < states.size(); ++head) {
    detail::raw_tuple state = states[head];
    detail::enumerate_moves(state, false, cand);
    for (const move& m : cand) {
      if (++res.nodes > budget) return res;
      detail::raw_tuple next = state;
      detail::apply_move(eq, next, m);
      auto [it, fresh] = seen.emplace(encode(next), static_cast<std::uint32_t>(states.size()));
      if (!fresh) continue;
      states.push_back(next);
      parent.emplace_back(static_cast<std::uint32_t>(head), m);
      if (trivial(next)) {
        std::vector<move> tail;
        for (std::uint32_t at = it->second; at != 0; at = parent[at].first)
          tail.push_back(parent[at].second);
        for (auto mi = tail.rbegin(); mi != tail.rend(); ++mi) rec.push_back(*mi);
        res.reduced = true;
        res.tuple = covering_tuple(t.equipment(), std::move(next));
        res.moves = std::move(rec);
        return res;
      }
    }
  }
  return res; // orbit exhausted without a trivial-handle state
}

} // namespace covsemi
