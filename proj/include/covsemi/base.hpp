#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace covsemi {

// Bad input: rejected preconditions, malformed notation, ill-formed queries.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured bound was exhausted (node budget, space bound, coset bound).
// Never silent, never a correctness statement about the underlying object.
class budget_exceeded : public std::runtime_error {
public:
  explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency check failed; indicates a bug, not a user error.
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Open-addressing hash set of 64-bit keys. The orbit engine stores millions of
// packed tuples; node-based std::unordered_set costs ~5x the memory and the
// BFS is bound by visited-set throughput. Keys must be < EMPTY.
class flat_set64 {
public:
  static constexpr std::uint64_t EMPTY = ~0ULL;

  explicit flat_set64(std::size_t expected = 64) { rehash(capacity_for(expected)); }

  // Returns true if the key was absent and has been inserted.
  bool insert(std::uint64_t key) {
    if ((size_ + 1) * 10 >= cap_ * 7) rehash(cap_ * 2);
    std::size_t i = slot(key);
    while (true) {
      std::uint64_t cur = table_[i];
      if (cur == key) return false;
      if (cur == EMPTY) {
        table_[i] = key;
        ++size_;
        return true;
      }
      i = (i + 1) & mask_;
    }
  }

  bool contains(std::uint64_t key) const {
    std::size_t i = slot(key);
    while (true) {
      std::uint64_t cur = table_[i];
      if (cur == key) return true;
      if (cur == EMPTY) return false;
      i = (i + 1) & mask_;
    }
  }

  std::size_t size() const { return size_; }

  void clear() {
    std::fill(table_.begin(), table_.end(), EMPTY);
    size_ = 0;
  }

private:
  static std::size_t capacity_for(std::size_t expected) {
    std::size_t cap = 64;
    while (cap * 7 < (expected + 1) * 10) cap <<= 1;
    return cap;
  }

  std::size_t slot(std::uint64_t key) const { return splitmix64(key) & mask_; }

  void rehash(std::size_t newcap) {
    std::vector<std::uint64_t> old;
    old.swap(table_);
    table_.assign(newcap, EMPTY);
    cap_ = newcap;
    mask_ = newcap - 1;
    size_ = 0;
    for (std::uint64_t k : old)
      if (k != EMPTY) insert(k);
  }

  std::vector<std::uint64_t> table_;
  std::size_t cap_ = 0;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

} // namespace covsemi
