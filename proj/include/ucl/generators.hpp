// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Deterministic instance families: cycle and grid nets, cyclic covers,
/// rotation actions, the dyadic solenoid tower, a finite stand-in for the
/// free-group example, and random quotients by graph automorphisms.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "io.hpp"

namespace ucl {

struct GenLimits {
  std::size_t max_points = 64;
  std::size_t max_group = 16;
};

struct Instance {
  std::string id;
  std::string family;
  json params;
  std::shared_ptr<const Space> space;  // the space, or the source of the map
  std::optional<UniformMap> map;
  std::optional<GroupAction> action;
  std::optional<Tower> tower;
};

using Rng = std::mt19937_64;

/// Uniform in [0, n); modulo keeps the sequence identical across standard
/// libraries.
inline std::size_t pick(Rng& rng, std::size_t n) { return std::size_t(rng() % n); }

namespace detail {

inline std::vector<double> radii_param(const json& p, std::vector<double> fallback) {
  return p.contains("scales") ? p.at("scales").get<std::vector<double>>() : fallback;
}

inline void check_points(std::size_t n, const GenLimits& lim) {
  if (n == 0 || n > lim.max_points)
    throw InputError("instance needs 1.." + std::to_string(lim.max_points) + " points, got " + std::to_string(n));
}

/// Radii from `wanted` that give distinct nonempty threshold relations.
inline std::vector<double> distinct_radii(const DistanceMatrix& d, const std::vector<double>& wanted) {
  std::vector<double> out;
  std::optional<Relation> last;
  for (double r : wanted) {
    Relation rel(d.size());
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = 0; b < d.size(); ++b)
        if (d[a][b] <= r) rel.set(int(a), int(b));
    if (last && *last == rel) continue;
    out.push_back(r);
    last = rel;
  }
  return out;
}

inline Mode mode_param(const json& p) {
  const std::string m = p.value("mode", "scale");
  if (m == "scale") return Mode::scale;
  if (m == "strict") return Mode::strict;
  throw InputError("mode must be strict or scale, got " + m);
}

inline std::shared_ptr<const Space> graph_net(const Relation& adj, const std::vector<double>& radii,
                                              Mode mode = Mode::scale) {
  auto d = hop_distances(adj);
  auto r = distinct_radii(d, radii);
  auto raw = threshold_raw({}, d, r, mode);
  raw.basepoint = 0;
  return std::make_shared<Space>(validate_space(std::move(raw)));
}

inline Perm rotation(std::size_t n, std::size_t k) {
  Perm p(n);
  for (std::size_t x = 0; x < n; ++x) p[x] = int((x + k) % n);
  return p;
}

}  // namespace detail

/// Automorphisms of a simple graph by backtracking, in lexicographic order
/// of images, stopping after `cap` of them. The identity comes first.
inline std::vector<Perm> graph_automorphisms(const Relation& adj, std::size_t cap = 2000) {
  const std::size_t n = adj.points();
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) deg[v] += v != w && adj.contains(int(v), int(w));
  std::vector<Perm> out;
  Perm img(n, -1);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (out.size() >= cap) return;
    if (v == n) {
      out.push_back(img);
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || deg[c] != deg[v]) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        ok = adj.contains(int(u), int(v)) == adj.contains(img[u], int(c));
      if (!ok) continue;
      img[v] = int(c);
      used[c] = 1;
      self(self, v + 1);
      used[c] = 0;
      img[v] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

namespace detail {

inline Instance cycle_net(const json& p, const GenLimits& lim) {
  const std::size_t n = p.value("n", 6);
  check_points(n, lim);
  Instance in;
  in.space = graph_net(cycle_graph(n), radii_param(p, {1}), mode_param(p));
  return in;
}

inline Instance grid_net(const json& p, const GenLimits& lim) {
  const std::size_t w = p.value("w", 4), h = p.value("h", 3);
  check_points(w * h, lim);
  Relation adj = Relation::diagonal(w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const int v = int(y * w + x);
      if (x + 1 < w) adj.set_sym(v, v + 1);
      if (y + 1 < h) adj.set_sym(v, v + int(w));
    }
  Instance in;
  in.space = graph_net(adj, radii_param(p, {2, 1}), mode_param(p));
  return in;
}

inline Instance cycle_cover(const json& p, const GenLimits& lim) {
  const std::size_t n = p.value("n", 3), k = p.value("k", 2);
  check_points(n * k, lim);
  auto radii = radii_param(p, {1});
  Instance in;
  in.space = graph_net(cycle_graph(n * k), radii, mode_param(p));
  auto target = graph_net(cycle_graph(n), radii, mode_param(p));
  std::vector<int> v(n * k);
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = int(x % n);
  in.map = UniformMap(in.space, target, v);
  return in;
}

inline Instance rotation_action(const json& p, const GenLimits& lim) {
  const std::size_t n = p.value("n", 6), step = p.value("step", 1);
  check_points(n, lim);
  Instance in;
  in.space = graph_net(cycle_graph(n), radii_param(p, {1}), mode_param(p));
  in.action.emplace(in.space, std::vector<Perm>{rotation(n, step % n)}, std::vector<std::string>{"r"});
  if (in.action->order() > lim.max_group) throw InputError("group exceeds the size bound");
  return in;
}

inline Instance antipodal_action(const json& p, const GenLimits& lim) {
  const std::size_t n = p.value("n", 6);
  if (n % 2) throw InputError("antipodal action needs an even cycle");
  json q = p;
  q["n"] = n;
  q["step"] = n / 2;
  auto in = rotation_action(q, lim);
  in.action.emplace(in.space, std::vector<Perm>{rotation(n, n / 2)}, std::vector<std::string>{"t"});
  return in;
}

/// C_{2n} <- C_{4n} <- ... at [d<=1], bonds x -> x mod the coarser length.
inline Instance solenoid_tower(const json& p, const GenLimits& lim) {
  const std::size_t n = p.value("n", 3), levels = p.value("levels", 3);
  if (levels == 0) throw InputError("tower needs a level");
  Tower t;
  for (std::size_t k = 0; k < levels; ++k) {
    const std::size_t size = (2 * n) << k;
    check_points(size, lim);
    t.levels.push_back(graph_net(cycle_graph(size), {1}));
  }
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    std::vector<int> v(t.levels[k + 1]->size());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = int(x % t.levels[k]->size());
    t.bonds.emplace_back(t.levels[k + 1], t.levels[k], v);
  }
  Instance in;
  in.space = t.levels.back();
  in.tower = std::move(t);
  return in;
}

/// S_{g+1} as the quotient of the free group on x_1..x_g with x_i the
/// transposition (i-1 i), acting on itself by left multiplication, with the
/// strict chain E_k = {(x, y) : x y^-1 in G_k}, G_k = <x_k, ..., x_g>.
inline Instance free_group_truncated(const json& p, const GenLimits& lim) {
  const std::size_t g = p.value("gens", 3), len = p.value("len", 3), depth = p.value("depth", 3);
  if (g == 0 || g > 4) throw InputError("free-group-truncated supports 1..4 generators");
  if (depth == 0 || depth > g) throw InputError("depth must lie in 1..gens");
  const std::size_t letters = g + 1;
  std::vector<Perm> x;
  for (std::size_t i = 1; i <= g; ++i) {
    Perm t(letters);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[i - 1], t[i]);
    x.push_back(t);
  }
  // Elements by breadth-first search over words; labels are shortest words.
  Perm id(letters);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Perm> el{id};
  std::vector<std::string> label{"1"};
  std::vector<std::size_t> wlen{0};
  std::map<Perm, std::size_t> index{{id, 0}};
  for (std::size_t h = 0; h < el.size(); ++h)
    for (std::size_t i = 0; i < g; ++i) {
      Perm q = compose_perm(x[i], el[h]);
      if (index.count(q)) continue;
      index[q] = el.size();
      el.push_back(q);
      wlen.push_back(wlen[h] + 1);
      label.push_back("x" + std::to_string(i + 1) + (label[h] == "1" ? "" : label[h]));
    }
  const std::size_t n = el.size();
  check_points(n, lim);
  for (std::size_t e = 0; e < n; ++e)
    if (wlen[e] > len) {
      std::string s = "p";
      for (int v : el[e]) s += std::to_string(v);
      label[e] = s;
    }
  RawSpace raw;
  raw.points = label;
  raw.mode = Mode::strict;
  raw.basepoint = 0;
  for (std::size_t k = 1; k <= depth; ++k) {
    // G_k by closure under x_k..x_g.
    std::set<Perm> gk{id};
    std::vector<Perm> queue{id};
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (std::size_t i = k - 1; i < g; ++i) {
        Perm q = compose_perm(x[i], queue[h]);
        if (gk.insert(q).second) queue.push_back(q);
      }
    Relation r(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (gk.count(compose_perm(el[a], invert_perm(el[b])))) r.set(int(a), int(b));
    raw.entries.push_back({"E" + std::to_string(k), r});
  }
  Instance in;
  in.space = std::make_shared<Space>(validate_space(std::move(raw)));
  std::vector<Perm> gens;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g; ++i) {
    Perm act(n);
    for (std::size_t e = 0; e < n; ++e) act[e] = int(index.at(compose_perm(x[i], el[e])));
    gens.push_back(act);
    names.push_back("x" + std::to_string(i + 1));
  }
  in.action.emplace(in.space, gens, names, ActionLimits{std::max<std::size_t>(lim.max_group, 512)});
  return in;
}

/// Connected graph with a built-in symmetry (a cyclic voltage lift or an
/// involution-symmetric graph), threshold chain, and a random subgroup of
/// its automorphisms of order at most max_group.
inline Instance random_quotient(const json& p, std::uint64_t seed, const GenLimits& lim) {
  Rng rng(seed);
  const std::size_t max_points = std::min<std::size_t>(p.value("max_points", 32), lim.max_points);
  const std::size_t max_group = std::min<std::size_t>(p.value("max_group", 12), lim.max_group);
  Relation adj;
  std::size_t n = 0;
  if (pick(rng, 2) == 0) {
    const std::size_t k = 2 + pick(rng, 3);
    const std::size_t m = 2 + pick(rng, std::max<std::size_t>(1, std::min<std::size_t>(7, max_points / k - 1)));
    n = m * k;
    adj = Relation::diagonal(n);
    auto lift = [&](std::size_t u, std::size_t w, std::size_t volt) {
      for (std::size_t i = 0; i < k; ++i) adj.set_sym(int(u * k + i), int(w * k + (i + volt) % k));
    };
    for (std::size_t v = 1; v < m; ++v) lift(pick(rng, v), v, 0);
    const std::size_t extra = 1 + pick(rng, m);
    for (std::size_t e = 0; e < extra; ++e) lift(pick(rng, m), pick(rng, m), pick(rng, k));
  } else {
    n = 4 + pick(rng, std::min<std::size_t>(max_points, 16) - 3);
    Perm inv(n);
    std::iota(inv.begin(), inv.end(), 0);
    const std::size_t swaps = 1 + pick(rng, n / 2);
    for (std::size_t s = 0; s < swaps; ++s) {
      int a = int(pick(rng, n)), b = int(pick(rng, n));
      if (inv[std::size_t(a)] == a && inv[std::size_t(b)] == b) std::swap(inv[std::size_t(a)], inv[std::size_t(b)]);
    }
    adj = Relation::diagonal(n);
    auto both = [&](std::size_t u, std::size_t w) {
      adj.set_sym(int(u), int(w));
      adj.set_sym(inv[u], inv[w]);
    };
    for (std::size_t v = 1; v < n; ++v) both(pick(rng, v), v);
    const std::size_t extra = pick(rng, n / 2 + 1);
    for (std::size_t e = 0; e < extra; ++e) both(pick(rng, n), pick(rng, n));
  }
  static const std::vector<std::vector<double>> chains{{1}, {2, 1}, {3, 1}, {3, 2, 1}, {2}};
  Instance in;
  in.space = graph_net(adj, chains[pick(rng, chains.size())]);

  auto autos = graph_automorphisms(adj);
  std::optional<GroupAction> best;
  for (int attempt = 0; attempt < 24 && autos.size() > 1; ++attempt) {
    std::vector<Perm> gens{autos[1 + pick(rng, autos.size() - 1)]};
    if (pick(rng, 3) == 0) gens.push_back(autos[1 + pick(rng, autos.size() - 1)]);
    try {
      GroupAction a(in.space, gens, {}, ActionLimits{max_group + 1});
      if (a.order() <= max_group) {
        best.emplace(std::move(a));
        break;
      }
    } catch (const std::length_error&) {
    }
  }
  if (!best) best.emplace(in.space, std::vector<Perm>{});
  in.action = std::move(best);
  in.map = orbit_space(*in.action).projection;
  in.params = {{"points", n}, {"automorphisms_seen", autos.size()}};
  return in;
}

}  // namespace detail

inline const std::vector<std::string>& families() {
  static const std::vector<std::string> f{"cycle-net",         "cycle-cover",     "grid-net",
                                          "rotation-action",   "antipodal-action", "solenoid-tower",
                                          "free-group-truncated", "random-quotient"};
  return f;
}

inline Instance generate(const std::string& family, const json& params, std::uint64_t seed, GenLimits lim = {}) {
  Instance in;
  if (family == "cycle-net") in = detail::cycle_net(params, lim);
  else if (family == "cycle-cover") in = detail::cycle_cover(params, lim);
  else if (family == "grid-net") in = detail::grid_net(params, lim);
  else if (family == "rotation-action") in = detail::rotation_action(params, lim);
  else if (family == "antipodal-action") in = detail::antipodal_action(params, lim);
  else if (family == "solenoid-tower") in = detail::solenoid_tower(params, lim);
  else if (family == "free-group-truncated") in = detail::free_group_truncated(params, lim);
  else if (family == "random-quotient") in = detail::random_quotient(params, seed, lim);
  else throw InputError("unknown family " + family);
  in.family = family;
  json merged = params.is_object() ? params : json::object();
  for (auto& [k, v] : in.params.items()) merged[k] = v;
  in.params = merged;
  in.id = family + "-" + std::to_string(seed);
  return in;
}

/// Writes the instance's files into `dir`; returns the names written.
inline std::vector<std::string> write_instance(const fs::path& dir, const Instance& in) {
  fs::create_directories(dir);
  std::vector<std::string> out;
  auto put = [&](const std::string& name, const json& j) {
    write_json(dir / name, j);
    out.push_back(name);
  };
  if (in.tower) {
    json levels = json::array(), bonds = json::array();
    for (std::size_t k = 0; k < in.tower->levels.size(); ++k) {
      const std::string name = "level" + std::to_string(k) + ".json";
      put(name, space_to_json(*in.tower->levels[k]));
      levels.push_back(name);
    }
    for (std::size_t k = 0; k < in.tower->bonds.size(); ++k) {
      const std::string name = "bond" + std::to_string(k) + ".json";
      put(name, {{"source", levels[k + 1]}, {"target", levels[k]}, {"values", in.tower->bonds[k].values}});
      bonds.push_back(name);
    }
    put("tower.json", {{"levels", levels}, {"bonds", bonds}});
    return out;
  }
  put("space.json", space_to_json(*in.space));
  if (in.map) {
    put("target.json", space_to_json(*in.map->target));
    put("map.json", {{"source", "space.json"}, {"target", "target.json"}, {"values", in.map->values}});
  }
  if (in.action) {
    json gens = json::array();
    for (const auto& g : in.action->generators()) gens.push_back(g);
    put("action.json", {{"space", "space.json"}, {"generators", gens}, {"names", in.action->names()}});
  }
  return out;
}

}  // namespace ucl
