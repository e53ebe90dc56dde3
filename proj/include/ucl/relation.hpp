// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Binary relations on a finite point set {0, ..., n-1}, stored as a dense
/// bit matrix. Entourages are the symmetric reflexive ones.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ucl {

using Pair = std::pair<int, int>;

class Relation {
public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  static Relation diagonal(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.set(int(i), int(i));
    return r;
  }

  static Relation full(std::size_t n) {
    Relation r(n);
    std::fill(r.bits_.begin(), r.bits_.end(), std::uint8_t{1});
    return r;
  }

  /// Symmetric reflexive closure of a pair list.
  static Relation from_pairs(std::size_t n, std::span<const Pair> pairs) {
    Relation r = diagonal(n);
    for (auto [a, b] : pairs) {
      if (a < 0 || b < 0 || std::size_t(a) >= n || std::size_t(b) >= n)
        throw std::out_of_range("relation pair index out of range");
      r.set_sym(a, b);
    }
    return r;
  }

  std::size_t points() const { return n_; }

  bool contains(int a, int b) const { return bits_[std::size_t(a) * n_ + std::size_t(b)] != 0; }
  void set(int a, int b) { bits_[std::size_t(a) * n_ + std::size_t(b)] = 1; }
  void set_sym(int a, int b) {
    set(a, b);
    set(b, a);
  }

  std::size_t size() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  std::vector<Pair> pairs() const {
    std::vector<Pair> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (contains(int(a), int(b))) out.emplace_back(int(a), int(b));
    return out;
  }

  /// Unordered pairs a < b, the form used in files.
  std::vector<Pair> upper_pairs() const {
    std::vector<Pair> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (contains(int(a), int(b))) out.emplace_back(int(a), int(b));
    return out;
  }

  std::vector<int> row(int a) const {
    std::vector<int> out;
    for (std::size_t b = 0; b < n_; ++b)
      if (contains(a, int(b))) out.push_back(int(b));
    return out;
  }

  bool is_symmetric() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (contains(int(a), int(b)) != contains(int(b), int(a))) return false;
    return true;
  }

  bool is_reflexive() const {
    for (std::size_t a = 0; a < n_; ++a)
      if (!contains(int(a), int(a))) return false;
    return true;
  }

  bool is_transitive() const { return compose(*this, *this).subset_of(*this); }

  bool is_diagonal() const { return *this == diagonal(n_); }

  bool subset_of(const Relation& other) const {
    for (std::size_t k = 0; k < bits_.size(); ++k)
      if (bits_[k] && !other.bits_[k]) return false;
    return true;
  }

  /// First pair of *this missing from other, if any.
  std::optional<Pair> first_not_in(const Relation& other) const {
    for (std::size_t k = 0; k < bits_.size(); ++k)
      if (bits_[k] && !other.bits_[k]) return Pair{int(k / n_), int(k % n_)};
    return std::nullopt;
  }

  friend Relation compose(const Relation& e, const Relation& f) {
    if (e.n_ != f.n_) throw std::invalid_argument("compose: point sets differ");
    const std::size_t n = e.n_;
    Relation out(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (!e.contains(int(x), int(y))) continue;
        for (std::size_t z = 0; z < n; ++z)
          if (f.contains(int(y), int(z))) out.set(int(x), int(z));
      }
    return out;
  }

  friend Relation intersect(const Relation& a, const Relation& b) {
    Relation out(a.n_);
    for (std::size_t k = 0; k < a.bits_.size(); ++k) out.bits_[k] = a.bits_[k] & b.bits_[k];
    return out;
  }

  friend Relation unite(const Relation& a, const Relation& b) {
    Relation out(a.n_);
    for (std::size_t k = 0; k < a.bits_.size(); ++k) out.bits_[k] = a.bits_[k] | b.bits_[k];
    return out;
  }

  friend bool operator==(const Relation&, const Relation&) = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// f(E) = {(f(x), f(y)) : (x,y) in E} over a target of size m.
inline Relation image(const Relation& e, std::span<const int> f, std::size_t m) {
  Relation out(m);
  const std::size_t n = e.points();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (e.contains(int(x), int(y))) out.set(f[x], f[y]);
  return out;
}

/// f^{-1}(E) = {(x, y) : (f(x), f(y)) in E}.
inline Relation preimage(const Relation& e, std::span<const int> f) {
  const std::size_t n = f.size();
  Relation out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (e.contains(f[x], f[y])) out.set(int(x), int(y));
  return out;
}

/// Equivalence classes of the transitive closure (connected components of the graph).
inline std::vector<int> components(const Relation& e) {
  const std::size_t n = e.points();
  std::vector<int> comp(n, -1);
  int next = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.assign(1, int(s));
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y)
        if (comp[y] < 0 && e.contains(x, int(y))) {
          comp[y] = next;
          stack.push_back(int(y));
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace ucl
