#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "covsemi/base.hpp"

namespace covsemi {

// Permutation of {1,...,d}, stored 0-based. Points act on the right and
// products compose left to right: x^(g*h) = (x^g)^h, so (g*h)[x] = h[g[x]].
// Conjugation is g^h = h^-1 * g * h.
class perm {
public:
  perm() = default;

  static perm identity(int degree) {
    perm p;
    p.img_.resize(degree);
    std::iota(p.img_.begin(), p.img_.end(), std::uint16_t{0});
    return p;
  }

  static perm from_images(std::vector<std::uint16_t> images) {
    perm p;
    p.img_ = std::move(images);
    p.validate();
    return p;
  }

  int degree() const { return static_cast<int>(img_.size()); }
  std::uint16_t apply(std::uint16_t x) const { return img_[x]; }
  const std::vector<std::uint16_t>& images() const { return img_; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  friend perm compose(const perm& a, const perm& b) {
    if (a.degree() != b.degree()) throw validation_error("perm: degree mismatch in product");
    perm r;
    r.img_.resize(a.img_.size());
    for (std::size_t x = 0; x < a.img_.size(); ++x) r.img_[x] = b.img_[a.img_[x]];
    return r;
  }

  perm operator*(const perm& rhs) const { return compose(*this, rhs); }

  perm inverse() const {
    perm r;
    r.img_.resize(img_.size());
    for (std::size_t x = 0; x < img_.size(); ++x) r.img_[img_[x]] = static_cast<std::uint16_t>(x);
    return r;
  }

  bool operator==(const perm& rhs) const { return img_ == rhs.img_; }
  bool operator!=(const perm& rhs) const { return img_ != rhs.img_; }
  bool operator<(const perm& rhs) const { return img_ < rhs.img_; }

  int order() const {
    int n = 1;
    perm q = *this;
    while (!q.is_identity()) {
      q = compose(q, *this);
      ++n;
    }
    return n;
  }

  bool is_even() const {
    int transpositions = 0;
    for (const auto& c : cycles()) transpositions += static_cast<int>(c.size()) - 1;
    return transpositions % 2 == 0;
  }

  // Nontrivial cycle lengths, descending. Equal iff conjugate in the full
  // symmetric group.
  std::vector<int> cycle_type() const {
    std::vector<int> t;
    for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.rbegin(), t.rend());
    return t;
  }

  // Nontrivial cycles, 0-based points, each starting at its least point,
  // cycles ordered by least point.
  std::vector<std::vector<std::uint16_t>> cycles() const {
    std::vector<std::vector<std::uint16_t>> out;
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t s = 0; s < img_.size(); ++s) {
      if (seen[s] || img_[s] == s) continue;
      std::vector<std::uint16_t> c;
      std::uint16_t x = static_cast<std::uint16_t>(s);
      do {
        c.push_back(x);
        seen[x] = true;
        x = img_[x];
      } while (x != s);
      out.push_back(std::move(c));
    }
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint16_t b : img_) h = (h ^ b) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }

private:
  void validate() const {
    std::vector<bool> seen(img_.size(), false);
    for (std::uint16_t v : img_) {
      if (v >= img_.size() || seen[v]) throw validation_error("perm: images are not a bijection");
      seen[v] = true;
    }
  }

  std::vector<std::uint16_t> img_;
};

inline perm conjugate(const perm& g, const perm& h) {
  return compose(compose(h.inverse(), g), h);
}

inline perm commutator(const perm& a, const perm& b) {
  // [a,b] = a b a^-1 b^-1
  return compose(compose(a, b), compose(a.inverse(), b.inverse()));
}

struct perm_hash {
  std::size_t operator()(const perm& p) const { return p.hash(); }
};

// Order by disjoint-cycle notation: (1 2) < (1 3) < (2 3) < (1 2 3) ...
// Used as the canonical order of elements inside a conjugacy class.
inline bool cycle_lex_less(const perm& a, const perm& b) {
  auto ca = a.cycles(), cb = b.cycles();
  if (ca != cb) return ca < cb;
  return false;
}

// Disjoint-cycle notation with 1-based points, e.g. "(1 2)(3 4 5)"; the
// identity prints as "e".
inline std::string to_cycle_string(const perm& p) {
  auto cyc = p.cycles();
  if (cyc.empty()) return "e";
  std::ostringstream os;
  for (const auto& c : cyc) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) os << ' ';
      os << int(c[i]) + 1;
    }
    os << ')';
  }
  return os.str();
}

inline perm parse_perm(const std::string& text, int degree) {
  if (degree < 0 || degree > 65535) throw validation_error("perm: degree out of range");
  std::vector<std::uint16_t> img(degree);
  std::iota(img.begin(), img.end(), std::uint16_t{0});
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    skip_ws();
    if (i != text.size()) throw validation_error("perm: trailing characters after 'e' in '" + text + "'");
    return perm::from_images(std::move(img));
  }
  bool any = false;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(') throw validation_error("perm: expected '(' in '" + text + "'");
    ++i;
    std::vector<int> cycle;
    while (true) {
      skip_ws();
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      if (i < text.size() && text[i] == ',') { ++i; continue; }
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw validation_error("perm: malformed cycle in '" + text + "'");
      int pt = std::stoi(text.substr(i, j - i));
      if (pt < 1 || pt > degree) throw validation_error("perm: point out of range in '" + text + "'");
      cycle.push_back(pt - 1);
      i = j;
    }
    if (cycle.size() < 2) throw validation_error("perm: cycle of length < 2 in '" + text + "'");
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      int from = cycle[k], to = cycle[(k + 1) % cycle.size()];
      if (img[from] != from) throw validation_error("perm: cycles are not disjoint in '" + text + "'");
      img[from] = static_cast<std::uint16_t>(to);
    }
    any = true;
    skip_ws();
  }
  if (!any) throw validation_error("perm: empty permutation text '" + text + "'");
  return perm::from_images(std::move(img));
}

// Finite permutation group with its element set materialized. Cheap to copy
// (shared immutable storage), safe to share across threads.
class perm_group {
public:
  static constexpr std::size_t DEFAULT_ORDER_BOUND = 1000000;
  // |G|^2 multiplication table kept while it stays under ~8 MB.
  static constexpr std::size_t TABLE_LIMIT = 2048;

  perm_group() = default;

  static perm_group closure(const std::vector<perm>& gens,
                            std::size_t order_bound = DEFAULT_ORDER_BOUND) {
    if (gens.empty()) throw validation_error("perm_group: empty generator list");
    int d = gens[0].degree();
    for (const auto& g : gens)
      if (g.degree() != d) throw validation_error("perm_group: generator degree mismatch");

    std::unordered_map<perm, std::uint32_t, perm_hash> seen;
    std::vector<perm> elems;
    elems.push_back(perm::identity(d));
    seen.emplace(elems[0], 0);
    for (std::size_t head = 0; head < elems.size(); ++head) {
      for (const auto& g : gens) {
        perm y = compose(elems[head], g);
        if (seen.emplace(y, static_cast<std::uint32_t>(elems.size())).second) {
          elems.push_back(std::move(y));
          if (elems.size() > order_bound)
            throw budget_exceeded("perm_group: closure exceeds order bound " + std::to_string(order_bound));
        }
      }
    }
    std::sort(elems.begin(), elems.end());

    auto st = std::make_shared<storage>();
    st->degree = d;
    st->gens = gens;
    st->elems = std::move(elems);
    st->index.reserve(st->elems.size() * 2);
    for (std::uint32_t i = 0; i < st->elems.size(); ++i) st->index.emplace(st->elems[i], i);
    if (st->elems.size() <= TABLE_LIMIT) st->build_tables();
    perm_group g;
    g.st_ = std::move(st);
    return g;
  }

  static perm_group symmetric(int d, std::size_t order_bound = DEFAULT_ORDER_BOUND) {
    if (d < 1 || d > 65535) throw validation_error("perm_group: symmetric degree out of range");
    if (d == 1) return closure({perm::identity(1)}, order_bound);
    std::vector<perm> gens;
    {
      auto img = perm::identity(d).images();
      std::swap(img[0], img[1]);
      gens.push_back(perm::from_images(img));
    }
    if (d > 2) {
      std::vector<std::uint16_t> img(d);
      for (int i = 0; i < d; ++i) img[i] = static_cast<std::uint16_t>((i + 1) % d);
      gens.push_back(perm::from_images(img));
    }
    return closure(gens, order_bound);
  }

  bool valid() const { return st_ != nullptr; }
  int degree() const { return st_->degree; }
  std::size_t order() const { return st_->elems.size(); }
  const std::vector<perm>& generators() const { return st_->gens; }
  const std::vector<perm>& elements() const { return st_->elems; }
  const perm& element(std::uint32_t i) const { return st_->elems[i]; }

  bool contains(const perm& g) const { return st_->index.count(g) != 0; }

  std::uint32_t index_of(const perm& g) const {
    auto it = st_->index.find(g);
    if (it == st_->index.end()) throw validation_error("perm_group: element not in group");
    return it->second;
  }

  std::uint32_t identity_index() const { return index_of(perm::identity(degree())); }

  // Index arithmetic; table-backed when the group is small.
  std::uint32_t mult(std::uint32_t a, std::uint32_t b) const {
    const auto& s = *st_;
    if (!s.mult_tab.empty()) return s.mult_tab[a * s.elems.size() + b];
    return s.index.find(compose(s.elems[a], s.elems[b]))->second;
  }
  std::uint32_t inv(std::uint32_t a) const {
    const auto& s = *st_;
    if (!s.inv_tab.empty()) return s.inv_tab[a];
    return s.index.find(s.elems[a].inverse())->second;
  }
  std::uint32_t conj(std::uint32_t a, std::uint32_t h) const { return mult(inv(h), mult(a, h)); }
  std::uint32_t comm(std::uint32_t a, std::uint32_t b) const {
    return mult(mult(a, b), inv(mult(b, a)));
  }

  // Orbit of g under conjugation by the whole group, lexicographically sorted.
  std::vector<perm> conjugacy_class(const perm& g) const {
    if (!contains(g)) throw validation_error("perm_group: conjugacy_class of element not in group");
    std::unordered_map<perm, bool, perm_hash> seen;
    std::vector<perm> orbit{g};
    seen.emplace(g, true);
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (const auto& h : st_->gens) {
        perm y = conjugate(orbit[head], h);
        if (seen.emplace(y, true).second) orbit.push_back(std::move(y));
      }
    }
    std::sort(orbit.begin(), orbit.end(), cycle_lex_less);
    return orbit;
  }

  bool is_transitive() const {
    std::vector<bool> seen(degree(), false);
    std::vector<std::uint16_t> stack{0};
    seen[0] = true;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      std::uint16_t x = stack.back();
      stack.pop_back();
      for (const auto& g : st_->gens) {
        std::uint16_t y = g.apply(x);
        if (!seen[y]) {
          seen[y] = true;
          ++cnt;
          stack.push_back(y);
        }
      }
    }
    return cnt == static_cast<std::size_t>(degree());
  }

  perm_group center() const {
    std::vector<perm> z;
    for (const auto& x : st_->elems) {
      bool commutes = true;
      for (const auto& g : st_->gens)
        if (compose(x, g) != compose(g, x)) { commutes = false; break; }
      if (commutes) z.push_back(x);
    }
    return closure(z);
  }

  perm_group centralizer(const std::vector<perm>& set) const {
    std::vector<perm> c;
    for (const auto& x : st_->elems) {
      bool commutes = true;
      for (const auto& s : set)
        if (compose(x, s) != compose(s, x)) { commutes = false; break; }
      if (commutes) c.push_back(x);
    }
    return closure(c);
  }

  // Normal closure of the subgroup generated by seed inside this group.
  perm_group normal_closure(std::vector<perm> seed,
                            std::size_t order_bound = DEFAULT_ORDER_BOUND) const {
    if (seed.empty()) seed.push_back(perm::identity(degree()));
    perm_group n = closure(seed, order_bound);
    while (true) {
      bool grew = false;
      for (const auto& x : n.elements()) {
        for (const auto& g : st_->gens) {
          perm y = conjugate(x, g);
          if (!n.contains(y)) {
            seed.push_back(y);
            grew = true;
          }
        }
        if (grew) break;
      }
      if (!grew) return n;
      n = closure(seed, order_bound);
    }
  }

  perm_group commutator_subgroup(std::size_t order_bound = DEFAULT_ORDER_BOUND) const {
    std::vector<perm> comms;
    for (const auto& a : st_->gens)
      for (const auto& b : st_->gens)
        comms.push_back(compose(compose(a, b), compose(b, a).inverse()));
    return normal_closure(std::move(comms), order_bound);
  }

  bool same_group(const perm_group& other) const {
    return st_ == other.st_ ||
           (degree() == other.degree() && order() == other.order() &&
            std::equal(st_->elems.begin(), st_->elems.end(), other.st_->elems.begin()));
  }

private:
  struct storage {
    int degree = 0;
    std::vector<perm> gens;
    std::vector<perm> elems; // sorted lexicographically on image arrays
    std::unordered_map<perm, std::uint32_t, perm_hash> index;
    std::vector<std::uint16_t> mult_tab;
    std::vector<std::uint16_t> inv_tab;

    void build_tables() {
      std::size_t n = elems.size();
      mult_tab.resize(n * n);
      inv_tab.resize(n);
      for (std::size_t a = 0; a < n; ++a) {
        inv_tab[a] = static_cast<std::uint16_t>(index.find(elems[a].inverse())->second);
        for (std::size_t b = 0; b < n; ++b)
          mult_tab[a * n + b] =
              static_cast<std::uint16_t>(index.find(compose(elems[a], elems[b]))->second);
      }
    }
  };

  std::shared_ptr<const storage> st_;
};

} // namespace covsemi
