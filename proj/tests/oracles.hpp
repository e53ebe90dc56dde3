// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference implementations used only by the tests. They work
// straight from the definitions and share no code paths with the library's
// decision procedures beyond the Relation container.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ucl/relation.hpp"

namespace oracle {

using ucl::Relation;

/// Exhaustive search over all chains of length <= max_len reachable from
/// `from` by single-vertex insertions/deletions that keep the endpoints and
/// leave an E-chain. Chains are packed 4 bits per vertex, so this needs at
/// most 15 points and max_len <= 15. Returns nullopt when the state cap is hit.
inline std::optional<bool> reachable_by_moves(const Relation& e, const std::vector<int>& from,
                                              const std::vector<int>& to, std::size_t max_len,
                                              std::size_t state_cap = 20'000'000) {
  if (e.points() > 15 || max_len > 15) throw std::invalid_argument("oracle limits exceeded");
  using Code = std::uint64_t;
  auto pack = [](const std::vector<int>& c) {
    Code k = c.size();
    for (std::size_t i = 0; i < c.size(); ++i) k |= Code(c[i]) << (4 + 4 * i);
    return k;
  };
  auto unpack = [](Code k) {
    std::vector<int> c(k & 15);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = int((k >> (4 + 4 * i)) & 15);
    return c;
  };
  auto valid = [&](const std::vector<int>& c) {
    if (c.empty() || c.front() != from.front() || c.back() != from.back()) return false;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (!e.contains(c[i], c[i + 1])) return false;
    return true;
  };
  const Code goal = pack(to);
  std::unordered_set<Code> seen{pack(from)};
  std::vector<Code> queue{pack(from)};
  const int n = int(e.points());
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    if (queue[qi] == goal) return true;
    const auto cur = unpack(queue[qi]);
    auto push = [&](const std::vector<int>& nx) {
      if (!valid(nx)) return;
      if (seen.insert(pack(nx)).second) queue.push_back(pack(nx));
    };
    for (std::size_t p = 0; p < cur.size() && cur.size() > 1; ++p) {
      auto nx = cur;
      nx.erase(nx.begin() + std::ptrdiff_t(p));
      push(nx);
    }
    if (cur.size() < max_len)
      for (std::size_t p = 0; p <= cur.size(); ++p)
        for (int v = 0; v < n; ++v) {
          auto nx = cur;
          nx.insert(nx.begin() + std::ptrdiff_t(p), v);
          push(nx);
        }
    if (seen.size() > state_cap) return std::nullopt;
  }
  return false;
}

/// All cliques of size 1..k of the relation (triple loops, no pruning tricks).
inline std::size_t count_cliques(const Relation& e, int size) {
  const int n = int(e.points());
  std::size_t c = 0;
  if (size == 1) return std::size_t(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!e.contains(a, b)) continue;
      if (size == 2) {
        ++c;
        continue;
      }
      for (int d = b + 1; d < n; ++d)
        if (e.contains(a, d) && e.contains(b, d)) ++c;
    }
  return c;
}

/// First Betti number of a graph with triangles filled, over the rationals,
/// by Gaussian elimination on doubles (independent of the integer SNF).
inline int betti1_rational(const Relation& e) {
  const int n = int(e.points());
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> idx;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (e.contains(a, b)) {
        idx[{a, b}] = int(edges.size());
        edges.push_back({a, b});
      }
  auto rank = [](std::vector<std::vector<double>> m) {
    int r = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && std::size_t(r) < m.size(); ++c) {
      std::size_t piv = std::size_t(r);
      while (piv < m.size() && std::abs(m[piv][c]) < 1e-9) ++piv;
      if (piv == m.size()) continue;
      std::swap(m[piv], m[std::size_t(r)]);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == std::size_t(r)) continue;
        double f = m[i][c] / m[std::size_t(r)][c];
        for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[std::size_t(r)][j];
      }
      ++r;
    }
    return r;
  };
  std::vector<std::vector<double>> d1, d2;
  for (auto [a, b] : edges) {
    std::vector<double> row(std::size_t(n), 0);
    row[std::size_t(a)] = -1;
    row[std::size_t(b)] = 1;
    d1.push_back(row);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (e.contains(a, b) && e.contains(b, c) && e.contains(a, c)) {
          std::vector<double> row(edges.size(), 0);
          row[std::size_t(idx[{b, c}])] += 1;
          row[std::size_t(idx[{a, c}])] -= 1;
          row[std::size_t(idx[{a, b}])] += 1;
          d2.push_back(row);
        }
  return int(edges.size()) - rank(d1) - rank(d2);
}

}  // namespace oracle
