// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Threshold chains d <= r_1 > r_2 > ... built from a distance matrix, and
/// the cycle and graph spaces used throughout the tests and generators.

#include <limits>
#include <string>
#include <vector>

#include "space.hpp"

namespace ucl {

using DistanceMatrix = std::vector<std::vector<double>>;

inline std::string radius_name(double r) {
  std::string s = std::to_string(r);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "d<=" + s;
}

/// Expands the metric shorthand. Radii must be strictly decreasing; equal
/// threshold relations are an error in the chain validator.
inline RawSpace threshold_raw(std::vector<std::string> labels, const DistanceMatrix& d,
                              const std::vector<double>& radii, Mode mode = Mode::scale) {
  RawSpace raw;
  const std::size_t n = d.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  raw.points = std::move(labels);
  raw.mode = mode;
  for (double r : radii) {
    Relation rel(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (d[a][b] <= r + 1e-12) rel.set(int(a), int(b));
    raw.entries.push_back({radius_name(r), rel});
  }
  return raw;
}

/// All-pairs hop distance of a graph; unreachable pairs get +inf.
inline DistanceMatrix hop_distances(const Relation& adjacency) {
  const std::size_t n = adjacency.points();
  const double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix d(n, std::vector<double>(n, inf));
  for (std::size_t s = 0; s < n; ++s) {
    d[s][s] = 0;
    std::vector<int> queue{int(s)};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (std::size_t v = 0; v < n; ++v)
        if (d[s][v] == inf && adjacency.contains(u, int(v))) {
          d[s][v] = d[s][std::size_t(u)] + 1;
          queue.push_back(int(v));
        }
    }
  }
  return d;
}

inline Relation cycle_graph(std::size_t n) {
  Relation r = Relation::diagonal(n);
  for (std::size_t i = 0; i < n; ++i) r.set_sym(int(i), int((i + 1) % n));
  return r;
}

inline Relation path_graph(std::size_t n) {
  Relation r = Relation::diagonal(n);
  for (std::size_t i = 0; i + 1 < n; ++i) r.set_sym(int(i), int(i + 1));
  return r;
}

/// C_n with the hop metric and the given radii (coarsest first). A radius of
/// 0 appends the diagonal.
inline Space cycle_space(std::size_t n, const std::vector<double>& radii, Mode mode = Mode::scale) {
  auto raw = threshold_raw({}, hop_distances(cycle_graph(n)), radii, mode);
  raw.basepoint = 0;
  return validate_space(std::move(raw));
}

inline Space graph_space(const Relation& adjacency, const std::vector<double>& radii, Mode mode = Mode::scale) {
  auto raw = threshold_raw({}, hop_distances(adjacency), radii, mode);
  raw.basepoint = 0;
  return validate_space(std::move(raw));
}

}  // namespace ucl
