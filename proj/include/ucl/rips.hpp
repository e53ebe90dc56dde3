// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Rips complexes R(X, E): the clique complex of an entourage, truncated at
/// a dimension cap. Homology in degree one and the edge-path presentation
/// of the fundamental group at a basepoint.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "group.hpp"
#include "map.hpp"
#include "smith.hpp"
#include "space.hpp"

namespace ucl {

using Simplex = std::vector<int>;  // sorted vertex indices

struct RipsLimits {
  std::size_t max_simplices = 500000;
};

class RipsComplex {
public:
  RipsComplex(const Relation& rel, int dmax, RipsLimits limits = {}) : rel_(rel), dmax_(dmax) {
    if (dmax < 2) throw std::invalid_argument("Rips complex needs dmax >= 2 for the fundamental group");
    const int n = int(rel.points());
    by_dim_.assign(std::size_t(dmax + 1), {});
    edge_index_.assign(std::size_t(n) * std::size_t(n), -1);
    std::size_t total = 0;
    // Extend each clique by larger vertices adjacent to all its members.
    std::vector<Simplex> frontier;
    for (int v = 0; v < n; ++v) frontier.push_back({v});
    for (int d = 0; d <= dmax; ++d) {
      total += frontier.size();
      if (total > limits.max_simplices)
        throw std::length_error("Rips complex exceeds the simplex cap of " + std::to_string(limits.max_simplices));
      by_dim_[std::size_t(d)] = frontier;
      if (d == dmax) break;
      std::vector<Simplex> next;
      for (const auto& s : frontier)
        for (int w = s.back() + 1; w < n; ++w) {
          bool ok = true;
          for (int u : s)
            if (!rel.contains(u, w)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          Simplex t = s;
          t.push_back(w);
          next.push_back(std::move(t));
        }
      frontier = std::move(next);
    }
    const auto& edges = by_dim_[1];
    for (std::size_t k = 0; k < edges.size(); ++k) {
      edge_index_[std::size_t(edges[k][0]) * std::size_t(n) + std::size_t(edges[k][1])] = int(k);
      edge_index_[std::size_t(edges[k][1]) * std::size_t(n) + std::size_t(edges[k][0])] = int(k);
    }
  }

  static RipsComplex build(const Space& s, std::size_t scale, int dmax = 2, RipsLimits limits = {}) {
    return RipsComplex(s.entry(scale), dmax, limits);
  }

  int dmax() const { return dmax_; }
  std::size_t vertices() const { return rel_.points(); }
  const Relation& relation() const { return rel_; }
  const std::vector<Simplex>& simplices(int d) const { return by_dim_.at(std::size_t(d)); }
  const std::vector<Simplex>& edges() const { return by_dim_[1]; }
  const std::vector<Simplex>& triangles() const { return by_dim_[2]; }
  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& v : by_dim_) c += v.size();
    return c;
  }

  /// Index of the edge {u, v}, or -1.
  int edge(int u, int v) const { return edge_index_[std::size_t(u) * vertices() + std::size_t(v)]; }

  bool is_simplex(const Simplex& s) const {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (!rel_.contains(s[a], s[b])) return false;
    return true;
  }

  json to_json() const {
    json j;
    j["dmax"] = dmax_;
    j["vertices"] = vertices();
    json all = json::array();
    for (const auto& dim : by_dim_)
      for (const auto& s : dim) all.push_back(s);
    j["simplices"] = all;
    return j;
  }

private:
  Relation rel_;
  int dmax_;
  std::vector<std::vector<Simplex>> by_dim_;
  std::vector<int> edge_index_;
};

/// Boundary of the 2-chains as rows (one row per triangle) over the edges.
inline IntMatrix boundary2_rows(const RipsComplex& k) {
  IntMatrix m;
  for (const auto& t : k.triangles()) {
    std::vector<Int> row(k.edges().size(), 0);
    row[std::size_t(k.edge(t[1], t[2]))] += 1;
    row[std::size_t(k.edge(t[0], t[2]))] -= 1;
    row[std::size_t(k.edge(t[0], t[1]))] += 1;
    m.push_back(std::move(row));
  }
  return m;
}

inline IntMatrix boundary1_rows(const RipsComplex& k) {
  IntMatrix m;
  for (const auto& e : k.edges()) {
    std::vector<Int> row(k.vertices(), 0);
    row[std::size_t(e[1])] += 1;
    row[std::size_t(e[0])] -= 1;
    m.push_back(std::move(row));
  }
  return m;
}

/// H_1 of the complex from the Smith forms of both boundary maps.
inline AbelianInvariants h1(const RipsComplex& k) {
  auto d1 = smith(boundary1_rows(k), k.vertices());
  auto d2 = smith(boundary2_rows(k), k.edges().size());
  AbelianInvariants a;
  a.free_rank = int(k.edges().size() - d1.rank() - d2.rank());
  for (Int d : d2.diagonal)
    if (d > 1) a.torsion.push_back(d);
  return a;
}

/// Spanning-tree presentation of pi_1(R(X,E), basepoint): one generator per
/// non-tree edge of the basepoint's component, one relator per triangle.
struct EdgePathGroup {
  int basepoint = 0;
  std::vector<int> component;   // vertices reachable from the basepoint
  std::vector<int> parent;      // BFS tree; -1 for root or other components
  std::vector<int> edge_gen;    // edge index -> generator, -1 for tree edges
  std::vector<Simplex> gen_edge;  // generator -> oriented edge (u < v)
  Presentation pres;
  Simplified reduced;

  bool in_component(int v) const {
    return std::find(component.begin(), component.end(), v) != component.end();
  }

  /// Word of the oriented edge u -> v (empty for tree edges and loops).
  Word edge_word(const RipsComplex& k, int u, int v) const {
    if (u == v) return {};
    int e = k.edge(u, v);
    if (e < 0) throw std::invalid_argument("not an edge of the complex");
    int g = edge_gen[std::size_t(e)];
    if (g < 0) return {};
    return {u < v ? g + 1 : -(g + 1)};
  }

  /// Closes the path with tree paths at both ends, so chains between any
  /// two vertices of the component get a loop word at the basepoint.
  Word word_of(const RipsComplex& k, std::span<const int> pts) const {
    Word w;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      auto e = edge_word(k, pts[i], pts[i + 1]);
      w.insert(w.end(), e.begin(), e.end());
    }
    return free_reduce(w);
  }
};

inline EdgePathGroup pi1_presentation(const RipsComplex& k, int basepoint) {
  EdgePathGroup g;
  g.basepoint = basepoint;
  const int n = int(k.vertices());
  g.parent.assign(std::size_t(n), -1);
  std::vector<char> seen(std::size_t(n), 0);
  std::vector<int> queue{basepoint};
  seen[std::size_t(basepoint)] = 1;
  std::vector<char> tree_edge(k.edges().size(), 0);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int v = 0; v < n; ++v) {
      if (seen[std::size_t(v)] || !k.relation().contains(u, v)) continue;
      seen[std::size_t(v)] = 1;
      g.parent[std::size_t(v)] = u;
      tree_edge[std::size_t(k.edge(u, v))] = 1;
      queue.push_back(v);
    }
  }
  g.component = queue;
  std::sort(g.component.begin(), g.component.end());
  g.edge_gen.assign(k.edges().size(), -1);
  for (std::size_t e = 0; e < k.edges().size(); ++e) {
    const auto& s = k.edges()[e];
    if (tree_edge[e] || !seen[std::size_t(s[0])]) continue;
    g.edge_gen[e] = int(g.gen_edge.size());
    g.gen_edge.push_back(s);
    g.pres.names.push_back("e" + std::to_string(s[0]) + "_" + std::to_string(s[1]));
  }
  g.pres.generators = int(g.gen_edge.size());
  for (const auto& t : k.triangles()) {
    if (!seen[std::size_t(t[0])]) continue;
    Word r;
    for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[2], t[0]}}) {
      auto w = g.edge_word(k, a, b);
      r.insert(r.end(), w.begin(), w.end());
    }
    r = cyclic_reduce(r);
    if (!r.empty()) g.pres.relators.push_back(r);
  }
  g.reduced = simplify(g.pres);
  return g;
}

inline json to_json(const Presentation& p) {
  json j;
  j["generators"] = p.generators;
  if (!p.names.empty()) j["names"] = p.names;
  json rels = json::array();
  for (const auto& r : p.relators) rels.push_back(r);
  j["relators"] = rels;
  return j;
}

inline json to_json(const AbelianInvariants& a) {
  return json{{"free_rank", a.free_rank}, {"torsion", a.torsion}};
}

/// Vertex map of R(X, E_i) -> R(Y, f(E_i)), checked to send simplices to simplices.
struct SimplicialMap {
  std::vector<int> vertex_map;
  Relation target_relation;
  bool sends_simplices_to_simplices = false;
  std::size_t image_simplices = 0;
};

inline SimplicialMap induced_simplicial_map(const UniformMap& f, std::size_t scale, int dmax = 2) {
  SimplicialMap m;
  m.vertex_map = f.values;
  m.target_relation = f.image_of_entry(scale);
  RipsComplex src(f.source->entry(scale), dmax);
  RipsComplex dst(m.target_relation, dmax);
  m.sends_simplices_to_simplices = true;
  std::vector<Simplex> images;
  for (int d = 0; d <= dmax; ++d)
    for (const auto& s : src.simplices(d)) {
      Simplex t;
      for (int v : s) t.push_back(f(v));
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      if (!dst.is_simplex(t)) m.sends_simplices_to_simplices = false;
      images.push_back(std::move(t));
    }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  m.image_simplices = images.size();
  return m;
}

}  // namespace ucl
