#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "covsemi/equipped.hpp"

namespace covsemi {
namespace oracle {

// Word-level reference for the move engine. Words over X(g), g in O, and
// Y(a,b), a,b in G are rewritten by the local relations only, applied at
// every adjacent pair in both directions, and classes are collected by
// union-find over the full word space. Deliberately shares nothing with the
// tuple move code: no reduced form, no transport conjugators.

struct word_letter {
  bool is_y;
  std::uint32_t a; // X: letter index into O; Y: element index of a
  std::uint32_t b; // Y: element index of b
};

using word = std::vector<word_letter>;

class word_codec {
public:
  word_codec(const equipped_group& eq, std::size_t n, std::size_t p, std::uint64_t bound)
      : eq_(eq), n_(n), p_(p) {
    std::size_t len = n + p;
    if (len > 63) throw validation_error("oracle: word length too large");
    // all Y-position masks, ascending
    for (std::uint64_t mask = 0; mask < (1ULL << len); ++mask)
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) == p) masks_.push_back(mask);
    double block = 1.0;
    for (std::size_t i = 0; i < n; ++i) block *= double(eq.num_letters());
    for (std::size_t i = 0; i < p; ++i) block *= double(eq.group().order()) * double(eq.group().order());
    if (block * double(masks_.size()) > double(bound))
      throw budget_exceeded("oracle: word space exceeds bound");
    block_ = static_cast<std::uint64_t>(block + 0.5);
  }

  std::uint64_t size() const { return block_ * masks_.size(); }
  std::size_t length() const { return n_ + p_; }

  std::uint64_t encode(const word& w) const {
    std::uint64_t mask = 0, value = 0;
    std::uint64_t g2 = eq_.group().order();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].is_y) {
        mask |= 1ULL << i;
        value = value * (g2 * g2) + (w[i].a * g2 + w[i].b);
      } else {
        value = value * eq_.num_letters() + w[i].a;
      }
    }
    auto it = std::lower_bound(masks_.begin(), masks_.end(), mask);
    return static_cast<std::uint64_t>(it - masks_.begin()) * block_ + value;
  }

  void decode(std::uint64_t index, word& out) const {
    std::uint64_t mask = masks_[index / block_];
    std::uint64_t value = index % block_;
    std::size_t len = length();
    out.resize(len);
    std::uint64_t g2 = eq_.group().order();
    for (std::size_t i = len; i-- > 0;) {
      if ((mask >> i) & 1) {
        std::uint64_t pair = value % (g2 * g2);
        value /= g2 * g2;
        out[i] = {true, static_cast<std::uint32_t>(pair / g2), static_cast<std::uint32_t>(pair % g2)};
      } else {
        out[i] = {false, static_cast<std::uint32_t>(value % eq_.num_letters()), 0};
        value /= eq_.num_letters();
      }
    }
  }

private:
  const equipped_group& eq_;
  std::size_t n_, p_;
  std::uint64_t block_ = 1;
  std::vector<std::uint64_t> masks_;
};

// All words one local rewrite away, every position, both directions of
// rel11, rel12, rel13, rel16 and rel19.
inline void rewrite_neighbors(const equipped_group& eq, const word& w,
                              std::vector<word>& out) {
  out.clear();
  const perm_group& g = eq.group();
  auto emit = [&](std::size_t i, word_letter l1, word_letter l2) {
    out.push_back(w);
    out.back()[i] = l1;
    out.back()[i + 1] = l2;
  };
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const word_letter& L = w[i];
    const word_letter& R = w[i + 1];
    if (!L.is_y && !R.is_y) {
      std::uint32_t x = eq.letter_elem(L.a), y = eq.letter_elem(R.a);
      // rel11 ->: x_{g1} x_{g2} = x_{g2} x_{g1^{g2}}
      emit(i, R, {false, eq.letter_of_elem(g.conj(x, y)), 0});
      // rel11 <-
      emit(i, {false, eq.letter_of_elem(g.mult(g.mult(x, y), g.inv(x))), 0}, L);
    } else if (!L.is_y && R.is_y) {
      std::uint32_t x = eq.letter_elem(L.a), a = R.a, b = R.b;
      std::uint32_t c = g.comm(a, b);
      // rel12 ->: x_g y_{a,b} = y_{a,b} x_{g^{[a,b]}}
      emit(i, R, {false, eq.letter_of_elem(g.conj(x, c)), 0});
      // rel13 ->: x_g y_{a,b} = x_{g^{c1}} y_{ga,b}, c1 = a b^-1 a^-1 g^-1
      {
        std::uint32_t c1 = g.mult(g.mult(a, g.inv(b)), g.mult(g.inv(a), g.inv(x)));
        emit(i, {false, eq.letter_of_elem(g.conj(x, c1)), 0}, {true, g.mult(x, a), b});
      }
      // rel13 <-: current (x_{g'}, y_{a',b}); g = g'^{a' b a'^-1}, a = g^-1 a'
      {
        std::uint32_t h = g.conj(x, g.mult(g.mult(a, b), g.inv(a)));
        emit(i, {false, eq.letter_of_elem(h), 0}, {true, g.mult(g.inv(h), a), b});
      }
      // rel19 ->: x_g y_{a,b} = x_{g^{[a,b]}} y_{a^{g'}, b^{g'}}, g' = g^{[a,b]}
      {
        std::uint32_t gp = g.conj(x, c);
        emit(i, {false, eq.letter_of_elem(gp), 0}, {true, g.conj(a, gp), g.conj(b, gp)});
      }
      // rel19 <-: a0 = a^{g'^-1}, b0 = b^{g'^-1}, g = g'^{[a0,b0]^-1}
      {
        std::uint32_t a0 = g.conj(a, g.inv(x));
        std::uint32_t b0 = g.conj(b, g.inv(x));
        std::uint32_t g0 = g.conj(x, g.inv(g.comm(a0, b0)));
        emit(i, {false, eq.letter_of_elem(g0), 0}, {true, a0, b0});
      }
    } else if (L.is_y && !R.is_y) {
      std::uint32_t a = L.a, b = L.b, x = eq.letter_elem(R.a);
      // rel12 <-: y_{a,b} x_g = x_{g^{[a,b]^-1}} y_{a,b}
      emit(i, {false, eq.letter_of_elem(g.conj(x, g.inv(g.comm(a, b)))), 0}, L);
      // rel16 ->: y_{a,b} x_g = y_{a, g^-1 b} x_{g^{c2}}, c2 = b a^-1 b^-1 g
      {
        std::uint32_t c2 = g.mult(g.mult(b, g.inv(a)), g.mult(g.inv(b), x));
        emit(i, {true, a, g.mult(g.inv(x), b)}, {false, eq.letter_of_elem(g.conj(x, c2)), 0});
      }
      // rel16 <-: current (y_{a,b'}, x_{g'}); g = g'^{b' a b'^-1}, b = g b'
      {
        std::uint32_t h = g.conj(x, g.mult(g.mult(b, a), g.inv(b)));
        emit(i, {true, a, g.mult(h, b)}, {false, eq.letter_of_elem(h), 0});
      }
    }
  }
}

inline perm word_boundary(const equipped_group& eq, const word& w) {
  const perm_group& g = eq.group();
  std::uint32_t r = g.identity_index();
  for (const auto& l : w)
    r = g.mult(r, l.is_y ? g.comm(l.a, l.b) : eq.letter_elem(l.a));
  return g.element(r);
}

struct class_info {
  std::uint64_t size = 0;
  std::vector<std::uint32_t> type_vector;
  bool boundary_e = false;
  bool full_group = false;
  std::int64_t reduced_rep = -1; // min index of a reduced word (all X before Y)
  std::uint64_t min_word = 0;
};

struct oracle_result {
  std::uint64_t word_count = 0;
  std::vector<class_info> classes;         // ascending min-word order
  std::vector<std::uint32_t> class_of_word; // word index -> class index
};

// Union-find over the exhaustive word space; constraints are evaluated per
// class as invariants of its minimal member.
inline oracle_result oracle_classes(const equipped_group& eq, std::size_t n, std::size_t p,
                                    std::uint64_t bound = 10000000) {
  word_codec codec(eq, n, p, bound);
  std::uint64_t total = codec.size();
  std::vector<std::uint32_t> parent(total);
  for (std::uint64_t i = 0; i < total; ++i) parent[i] = static_cast<std::uint32_t>(i);
  auto find = [&](std::uint32_t x) {
    std::uint32_t r = x;
    while (parent[r] != r) r = parent[r];
    while (parent[x] != r) {
      std::uint32_t nx = parent[x];
      parent[x] = r;
      x = nx;
    }
    return r;
  };

  word w;
  std::vector<word> nbrs;
  for (std::uint64_t i = 0; i < total; ++i) {
    codec.decode(i, w);
    rewrite_neighbors(eq, w, nbrs);
    for (const auto& nb : nbrs) {
      std::uint32_t a = find(static_cast<std::uint32_t>(i));
      std::uint32_t b = find(static_cast<std::uint32_t>(codec.encode(nb)));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  oracle_result res;
  res.word_count = total;
  res.class_of_word.resize(total);
  std::vector<std::int64_t> class_of_root(total, -1);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint32_t r = find(static_cast<std::uint32_t>(i));
    std::int64_t ci = class_of_root[r];
    if (ci < 0) {
      ci = static_cast<std::int64_t>(res.classes.size());
      class_of_root[r] = ci;
      codec.decode(i, w);
      class_info info;
      info.min_word = i;
      info.type_vector.assign(eq.num_classes(), 0);
      std::vector<perm> gens;
      for (const auto& l : w) {
        if (l.is_y) {
          gens.push_back(eq.group().element(l.a));
          gens.push_back(eq.group().element(l.b));
        } else {
          ++info.type_vector[eq.letter_class(l.a)];
          gens.push_back(eq.letter_perm(l.a));
        }
      }
      if (gens.empty()) gens.push_back(perm::identity(eq.degree()));
      info.boundary_e = word_boundary(eq, w).is_identity();
      info.full_group = perm_group::closure(gens).order() == eq.group().order();
      res.classes.push_back(std::move(info));
    }
    res.class_of_word[i] = static_cast<std::uint32_t>(ci);
    ++res.classes[ci].size;
    codec.decode(i, w);
    bool reduced = true;
    bool seen_y = false;
    for (const auto& l : w) {
      if (l.is_y) seen_y = true;
      else if (seen_y) reduced = false;
    }
    if (reduced && res.classes[ci].reduced_rep < 0)
      res.classes[ci].reduced_rep = static_cast<std::int64_t>(i);
  }
  return res;
}

struct class_count_filter {
  bool require_boundary_e = false;
  bool require_full_group = false;
};

inline std::uint64_t class_count(const oracle_result& res, const class_count_filter& f) {
  std::uint64_t c = 0;
  for (const auto& info : res.classes)
    if ((!f.require_boundary_e || info.boundary_e) && (!f.require_full_group || info.full_group))
      ++c;
  return c;
}

} // namespace oracle
} // namespace covsemi
