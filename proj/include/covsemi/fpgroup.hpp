#pragma once

#include <cstdint>
#include <deque>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "covsemi/tuples.hpp"

namespace covsemi {

// Presentation on one generator per element of O. Relator letters are column
// indices: 2*g for generator g, 2*g+1 for its inverse.
struct presentation {
  std::size_t ngens = 0;
  std::vector<std::vector<std::uint32_t>> relators;
  std::vector<std::string> gen_names;

  std::string to_text() const {
    std::ostringstream os;
    os << "< ";
    for (std::size_t i = 0; i < ngens; ++i) {
      if (i) os << ", ";
      os << gen_names[i];
    }
    os << " | ";
    for (std::size_t r = 0; r < relators.size(); ++r) {
      if (r) os << ", ";
      for (std::size_t i = 0; i < relators[r].size(); ++i) {
        if (i) os << '*';
        std::uint32_t col = relators[r][i];
        os << gen_names[col / 2] << (col & 1 ? "^-1" : "");
      }
    }
    os << " >";
    return os.str();
  }
};

// Generators g~ for g in O; relators g3~^-1 g1~ g3~ g2~^-1 for every pair
// (g1, g3) in O x O, where g2 = g3^-1 g1 g3 in G.
inline presentation c_group_presentation(const equipped_group& eq,
                                         std::size_t relator_bound = 1000000) {
  if (!eq.generates()) throw validation_error("c_group_presentation: O does not generate G");
  std::size_t n = eq.num_letters();
  if (n * n > relator_bound)
    throw budget_exceeded("c_group_presentation: relator count exceeds bound");
  presentation p;
  p.ngens = n;
  p.gen_names.reserve(n);
  for (std::uint32_t l = 0; l < n; ++l) p.gen_names.push_back(to_cycle_string(eq.letter_perm(l)));
  const perm_group& g = eq.group();
  for (std::uint32_t g1 = 0; g1 < n; ++g1)
    for (std::uint32_t g3 = 0; g3 < n; ++g3) {
      std::uint32_t g2 = eq.letter_of_elem(g.conj(eq.letter_elem(g1), eq.letter_elem(g3)));
      p.relators.push_back({2 * g3 + 1, 2 * g1, 2 * g3, 2 * g2 + 1});
    }
  return p;
}

namespace detail {

// Todd-Coxeter coset enumeration over the trivial subgroup, HLT strategy:
// scan every relator at every live coset, filling gaps with fresh cosets,
// processing coincidences eagerly. Coset numbering is first-defined order,
// so the compacted table is reproducible.
class coset_enumerator {
public:
  coset_enumerator(std::size_t ngens, const std::vector<std::vector<std::uint32_t>>& relators,
                   std::size_t coset_bound)
      : ncols_(2 * ngens), relators_(relators), bound_(coset_bound) {
    new_coset();
  }

  void run() {
    for (std::size_t alpha = 0; alpha < table_.size() / ncols_; ++alpha) {
      if (!alive(alpha)) continue;
      for (const auto& rel : relators_) {
        scan_and_fill(alpha, rel);
        if (!alive(alpha)) break;
      }
      if (!alive(alpha)) continue;
      for (std::uint32_t x = 0; x < ncols_; ++x)
        if (entry(alpha, x) < 0) {
          std::int32_t beta = new_coset();
          set(alpha, x, beta);
          set(beta, inv_col(x), static_cast<std::int32_t>(alpha));
        }
    }
  }

  // live cosets in first-defined order -> compact indices
  std::size_t compact() {
    live_index_.assign(p_.size(), -1);
    std::int32_t next = 0;
    for (std::size_t c = 0; c < p_.size(); ++c)
      if (alive(c)) live_index_[c] = next++;
    return static_cast<std::size_t>(next);
  }

  std::size_t num_live() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < p_.size(); ++c)
      if (alive(c)) ++n;
    return n;
  }

  // action of generator g on compacted live cosets
  std::vector<std::uint32_t> gen_action(std::uint32_t g) const {
    std::vector<std::uint32_t> out;
    for (std::size_t c = 0; c < p_.size(); ++c) {
      if (!alive(c)) continue;
      std::int32_t img = entry(c, 2 * g);
      if (img < 0) throw internal_error("coset table not closed");
      out.push_back(static_cast<std::uint32_t>(live_index_[rep(img)]));
    }
    return out;
  }

private:
  static std::uint32_t inv_col(std::uint32_t x) { return x ^ 1u; }

  bool alive(std::size_t c) const { return p_[c] == static_cast<std::int32_t>(c); }

  std::int32_t rep(std::int32_t c) const {
    while (p_[c] != c) c = p_[c];
    return c;
  }

  std::int32_t entry(std::size_t c, std::uint32_t x) const { return table_[c * ncols_ + x]; }
  void set(std::size_t c, std::uint32_t x, std::int32_t v) { table_[c * ncols_ + x] = v; }

  std::int32_t new_coset() {
    if (p_.size() >= bound_)
      throw budget_exceeded("coset enumeration exceeds bound of " + std::to_string(bound_) +
                            " cosets (" + std::to_string(num_live()) + " live when aborted)");
    p_.push_back(static_cast<std::int32_t>(p_.size()));
    table_.resize(table_.size() + ncols_, -1);
    return static_cast<std::int32_t>(p_.size() - 1);
  }

  void scan_and_fill(std::size_t alpha, const std::vector<std::uint32_t>& w) {
    std::int32_t f = static_cast<std::int32_t>(alpha);
    std::int32_t b = static_cast<std::int32_t>(alpha);
    std::int64_t i = 0, j = static_cast<std::int64_t>(w.size()) - 1;
    while (true) {
      while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && entry(b, inv_col(w[j])) >= 0) b = entry(b, inv_col(w[j--]));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        set(f, w[i], b);
        set(b, inv_col(w[i]), f);
        return;
      }
      std::int32_t n = new_coset();
      set(f, w[i], n);
      set(n, inv_col(w[i]), f);
    }
  }

  void merge(std::int32_t a, std::int32_t b, std::deque<std::int32_t>& q) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p_[b] = a;
    q.push_back(b);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    std::deque<std::int32_t> q;
    merge(a, b, q);
    while (!q.empty()) {
      std::int32_t dead = q.front();
      q.pop_front();
      for (std::uint32_t x = 0; x < ncols_; ++x) {
        std::int32_t delta = entry(dead, x);
        if (delta < 0) continue;
        set(delta, inv_col(x), -1);
        std::int32_t mu = rep(dead);
        std::int32_t nu = rep(delta);
        if (entry(mu, x) >= 0)
          merge(nu, entry(mu, x), q);
        else if (entry(nu, inv_col(x)) >= 0)
          merge(mu, entry(nu, inv_col(x)), q);
        else {
          set(mu, x, nu);
          set(nu, inv_col(x), mu);
        }
      }
    }
  }

  std::uint32_t ncols_;
  const std::vector<std::vector<std::uint32_t>>& relators_;
  std::size_t bound_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> p_;
  std::vector<std::int32_t> live_index_;
};

} // namespace detail

// Finite central quotient Q1 = G~ / < r_i~^{p_i} > with one power relator per
// class (first element in canonical class order). The added subgroup is
// central and meets the commutant trivially, so [Q1,Q1] is the commutant of
// the C-group itself; the quotient is realized as a permutation group via its
// regular action on cosets.
class finite_quotient {
public:
  finite_quotient(equipment_ptr eq, std::size_t coset_bound = 10000000,
                  bool all_power_relators = false)
      : eq_(std::move(eq)) {
    pres_ = c_group_presentation(*eq_);
    power_relators_ = pres_.relators.size();
    for (std::size_t c = 0; c < eq_->num_classes(); ++c) {
      int ord = eq_->class_order(c);
      std::uint32_t first = eq_->class_offset(c);
      std::uint32_t last = all_power_relators ? eq_->class_offset(c + 1) : first + 1;
      for (std::uint32_t l = first; l < last; ++l)
        pres_.relators.push_back(std::vector<std::uint32_t>(ord, 2 * l));
    }
    power_relators_ = pres_.relators.size() - power_relators_;

    detail::coset_enumerator enumr(pres_.ngens, pres_.relators, coset_bound);
    enumr.run();
    std::size_t order = enumr.compact();
    if (order == 0 || order > 65535)
      throw budget_exceeded("finite_quotient: order " + std::to_string(order) +
                            " outside the supported permutation degree");
    gen_images_.reserve(pres_.ngens);
    std::vector<perm> gens;
    for (std::uint32_t g = 0; g < pres_.ngens; ++g) {
      auto action = enumr.gen_action(g);
      std::vector<std::uint16_t> img(action.begin(), action.end());
      gen_images_.push_back(perm::from_images(img));
      gens.push_back(gen_images_.back());
    }
    group_ = perm_group::closure(gens);
    if (group_.order() != order)
      throw internal_error("finite_quotient: coset action is not regular");
  }

  const equipment_ptr& equipment() const { return eq_; }
  const presentation& pres() const { return pres_; }
  std::size_t order() const { return group_.order(); }
  const perm_group& group() const { return group_; }

  // image of the letter's C-generator in Q1
  const perm& letter_image(std::uint32_t letter) const { return gen_images_[letter]; }

  // image of an arbitrary element of G, lifted through its shortest O-word
  perm elem_image(std::uint32_t elem) const {
    perm r = perm::identity(static_cast<int>(order()));
    for (std::uint32_t l : eq_->lift_word(elem)) r = compose(r, gen_images_[l]);
    return r;
  }

  std::size_t commutant_order() const { return group_.commutator_subgroup().order(); }

private:
  equipment_ptr eq_;
  presentation pres_;
  std::size_t power_relators_ = 0;
  std::vector<perm> gen_images_;
  perm_group group_;
};

// a_{(G,O)} = |ker beta ^ [G~,G~]| = |[Q1,Q1]| / |[G,G]|; the division is
// exact because beta maps the commutant of G~ onto the commutant of G with
// kernel ker beta ^ [G~,G~].
inline std::size_t ambiguity_index(const finite_quotient& q) {
  std::size_t top = q.commutant_order();
  std::size_t bottom = q.equipment()->group().commutator_subgroup().order();
  if (bottom == 0 || top % bottom != 0)
    throw internal_error("ambiguity_index: non-integral division " + std::to_string(top) + "/" +
                         std::to_string(bottom));
  return top / bottom;
}

inline std::size_t ambiguity_index(const equipment_ptr& eq, std::size_t coset_bound = 10000000) {
  return ambiguity_index(finite_quotient(eq, coset_bound));
}

// Image in Q1 of g1~ ... gn~ [a1~,b1~] ... [ap~,bp~]: branch letters lift
// canonically, handle entries through arbitrary O-words (central ambiguity
// cancels in the commutators). Constant on move orbits, multiplicative under
// the tuple product.
class lifting_invariant {
public:
  lifting_invariant(const finite_quotient& q, const covering_tuple& t,
                    const std::vector<std::vector<std::uint32_t>>* handle_words = nullptr)
      : value_(perm::identity(static_cast<int>(q.order()))) {
    const auto& raw = t.raw();
    for (std::uint32_t l : raw.branch) value_ = compose(value_, q.letter_image(l));
    for (std::size_t k = 0; k < raw.handles.size(); ++k) {
      perm img = handle_words ? word_image(q, (*handle_words)[k]) : q.elem_image(raw.handles[k]);
      handle_images_.push_back(img);
    }
    for (std::size_t j = 0; 2 * j < handle_images_.size(); ++j)
      value_ = compose(value_, commutator(handle_images_[2 * j], handle_images_[2 * j + 1]));
    handle_images_.clear();
  }

  explicit lifting_invariant(perm v) : value_(std::move(v)) {}

  const perm& value() const { return value_; }
  bool operator==(const lifting_invariant& rhs) const { return value_ == rhs.value_; }
  bool operator!=(const lifting_invariant& rhs) const { return value_ != rhs.value_; }

  friend lifting_invariant operator*(const lifting_invariant& a, const lifting_invariant& b) {
    return lifting_invariant(compose(a.value_, b.value_));
  }

private:
  static perm word_image(const finite_quotient& q, const std::vector<std::uint32_t>& word) {
    perm r = perm::identity(static_cast<int>(q.order()));
    for (std::uint32_t l : word) r = compose(r, q.letter_image(l));
    return r;
  }

  perm value_;
  std::vector<perm> handle_images_;
};

inline lifting_invariant lift_invariant(const finite_quotient& q, const covering_tuple& t) {
  return lifting_invariant(q, t);
}

} // namespace covsemi
