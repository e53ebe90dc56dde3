// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Generalized paths over a finite chain base, the E* entourages between
/// them, and the uniform fundamental group as an inverse system of edge-path
/// groups, either presented or abelianized.
///
/// For a finite base the inverse system of homotopy classes is constant
/// from the finest entry on, so GP(X, x0) is the set of E_m-homotopy classes
/// of E_m-chains from x0: the vertices of the universal cover of R(X, E_m).

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homotopy.hpp"

namespace ucl {

/// Loop at the basepoint representing a generator: tree path, edge, tree path.
inline std::vector<int> generator_loop(const EdgePathGroup& g, int gen) {
  auto to_root = [&](int v) {
    std::vector<int> p{v};
    while (g.parent[std::size_t(p.back())] >= 0) p.push_back(g.parent[std::size_t(p.back())]);
    return p;
  };
  const auto& e = g.gen_edge[std::size_t(gen)];
  auto head = to_root(e[0]);
  std::reverse(head.begin(), head.end());
  auto tail = to_root(e[1]);
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

// ---------------------------------------------------------------------------
// GP classes

struct GPOptions {
  std::size_t radius = 8;          // BFS depth of a partial enumeration
  std::size_t max_classes = 20000;
  bool entourages = true;          // E* tables (complete enumerations only)
};

struct GPClass {
  int endpoint = 0;
  std::vector<int> chain;  // representative E_m-chain from the basepoint
  int element = -1;        // pi_1 element from the coset table, -1 when partial
};

struct GPSpace {
  int basepoint = 0;
  std::size_t scale = 0;  // index of E_m
  bool partial = false;
  std::size_t radius = 0;       // BFS depth reached
  std::size_t group_order = 0;  // |pi_1(R(X, E_m))| when finite and enumerated
  std::string note;
  std::vector<GPClass> classes;
  std::vector<NamedRelation> entries;  // E_i* on classes, coarse to fine
  std::size_t undecided_pairs = 0;     // pairs the tiered decider left unknown

  json to_json(const Space& s) const {
    json cls = json::array();
    for (const auto& c : classes) {
      json chain = json::array();
      for (int v : c.chain) chain.push_back(s.label(v));
      cls.push_back({{"endpoint", s.label(c.endpoint)}, {"chain", chain}});
    }
    json ents = json::object();
    for (const auto& e : entries) {
      json pairs = json::array();
      for (auto [a, b] : e.rel.upper_pairs())
        if (a != b) pairs.push_back({a, b});
      ents[e.name] = pairs;
    }
    json j{{"basepoint", s.label(basepoint)}, {"scale", s.name(scale)}, {"partial", partial},
           {"classes", cls}, {"class_count", classes.size()}, {"entourages", ents},
           {"undecided_pairs", undecided_pairs}};
    if (partial) j["radius"] = radius;
    if (group_order) j["pi1_order"] = group_order;
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

namespace detail {

/// (pi_1 presentation, coset table if finite within budget) at one scale.
struct ScaleGroup {
  std::shared_ptr<RipsComplex> complex;
  EdgePathGroup group;
  std::optional<CosetTable> table;

  ScaleGroup(const Space& s, std::size_t i, int base, std::size_t max_cosets)
      : complex(std::make_shared<RipsComplex>(s.entry(i), 2)), group(pi1_presentation(*complex, base)) {
    table = enumerate_cosets(group.reduced.pres, max_cosets);
  }

  int element_of(std::span<const int> chain) const {
    return table->trace(group.reduced.translate(group.word_of(*complex, chain)));
  }
};

}  // namespace detail

/// Classes of E_m-chains from the basepoint up to E_m-homotopy, with the E*
/// entourages: (a, b) in E_i* iff a^-1 * b is E_i-short.
inline GPSpace gp_space(const Space& s, Budgets budgets = Budgets::from_env(), GPOptions opt = {}) {
  GPSpace gp;
  gp.basepoint = s.basepoint().value_or(0);
  gp.scale = s.finest_index();
  const Relation& e = s.finest();
  const int n = int(s.size());
  detail::ScaleGroup fine(s, gp.scale, gp.basepoint, budgets.cosets);
  const auto& k = *fine.complex;
  const auto& g = fine.group;
  if (g.component.size() < s.size()) gp.note = "chains from the basepoint reach only its chain component";

  if (fine.table) {
    gp.group_order = fine.table->order();
    std::map<std::pair<int, int>, std::size_t> index;
    gp.classes.push_back({gp.basepoint, {gp.basepoint}, 0});
    index[{gp.basepoint, 0}] = 0;
    for (std::size_t head = 0; head < gp.classes.size(); ++head) {
      const int u = gp.classes[head].endpoint, c = gp.classes[head].element;
      for (int w = 0; w < n; ++w) {
        if (w == u || !e.contains(u, w)) continue;
        const int c2 = fine.table->trace(g.reduced.translate(g.edge_word(k, u, w)), c);
        if (index.count({w, c2})) continue;
        if (gp.classes.size() >= opt.max_classes) {
          gp.partial = true;
          gp.note = "class cap reached";
          break;
        }
        index[{w, c2}] = gp.classes.size();
        auto chain = gp.classes[head].chain;
        chain.push_back(w);
        gp.classes.push_back({w, std::move(chain), c2});
      }
    }
  } else {
    // No finite table: breadth-first over chains keyed by endpoint and the
    // freely reduced word; this identifies only freely equal classes.
    gp.partial = true;
    gp.note = "pi_1 not enumerated within the coset budget; classes identified up to free reduction";
    std::map<std::pair<int, Word>, std::size_t> index;
    std::vector<Word> words{{}};
    std::vector<std::size_t> depth{0};
    gp.classes.push_back({gp.basepoint, {gp.basepoint}, -1});
    index[{gp.basepoint, {}}] = 0;
    for (std::size_t head = 0; head < gp.classes.size(); ++head) {
      if (depth[head] >= opt.radius) continue;
      const int u = gp.classes[head].endpoint;
      for (int w = 0; w < n; ++w) {
        if (w == u || !e.contains(u, w)) continue;
        Word wd = free_reduce(words[head] * g.reduced.translate(g.edge_word(k, u, w)));
        if (index.count({w, wd})) continue;
        if (gp.classes.size() >= opt.max_classes) break;
        index[{w, wd}] = gp.classes.size();
        auto chain = gp.classes[head].chain;
        chain.push_back(w);
        gp.classes.push_back({w, std::move(chain), -1});
        words.push_back(std::move(wd));
        depth.push_back(depth[head] + 1);
        gp.radius = std::max(gp.radius, depth.back());
      }
    }
  }
  if (gp.partial || !opt.entourages) return gp;

  const std::size_t m = gp.classes.size();
  for (std::size_t i = 0; i < s.scales(); ++i) {
    Relation r(m);
    std::optional<detail::ScaleGroup> sg;
    if (i == gp.scale)
      sg = fine;
    else
      sg.emplace(s, i, gp.basepoint, budgets.cosets);
    std::vector<int> elem(m, -1);
    if (sg->table)
      for (std::size_t a = 0; a < m; ++a) elem[a] = sg->element_of(gp.classes[a].chain);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        const auto& ca = gp.classes[a];
        const auto& cb = gp.classes[b];
        if (!s.entry(i).contains(ca.endpoint, cb.endpoint)) continue;
        bool in = false;
        if (sg->table) {
          auto w = sg->group.reduced.translate(sg->group.edge_word(*sg->complex, cb.endpoint, ca.endpoint));
          in = sg->table->trace(w, elem[b]) == elem[a];
        } else {
          auto chain = concat(reversed(Chain{ca.chain, i}), Chain{cb.chain, i});
          auto v = is_e_short(s, i, chain, budgets);
          if (v.status == Status::unknown) ++gp.undecided_pairs;
          in = v.status == Status::yes;
        }
        if (in) r.set_sym(int(a), int(b));
      }
    gp.entries.push_back({s.name(i) + "*", r});
  }
  return gp;
}

/// GP(X, x0) with its E* entries as a space, and the endpoint map to X.
/// Entries equal to their predecessor are dropped.
inline UniformMap endpoint_map(const GPSpace& gp, std::shared_ptr<const Space> x) {
  if (gp.partial || gp.entries.empty()) throw std::invalid_argument("endpoint map needs a complete enumeration");
  RawSpace raw;
  for (std::size_t c = 0; c < gp.classes.size(); ++c) raw.points.push_back("c" + std::to_string(c));
  for (const auto& e : gp.entries)
    if (raw.entries.empty() || !(raw.entries.back().rel == e.rel)) raw.entries.push_back(e);
  raw.basepoint = 0;
  auto src = std::make_shared<Space>(validate_space(raw));
  std::vector<int> v;
  for (const auto& c : gp.classes) v.push_back(c.endpoint);
  return UniformMap(src, std::move(x), std::move(v));
}

// ---------------------------------------------------------------------------
// Pro-groups

struct Tower {
  std::vector<std::shared_ptr<const Space>> levels;  // level 0 is the coarsest
  std::vector<UniformMap> bonds;                     // bonds[k]: level k+1 -> level k
};

enum class Pi1Mode { presentation, abelian };

struct ProLevel {
  std::string name;
  EdgePathGroup group;
  AbelianInvariants h1;
  SmithForm smith;  // of the relators, for abelian coordinates
};

struct ProBond {
  std::vector<Word> images;  // original generator -> word in the coarser original generators
  Verdict homomorphism;      // every relator maps to a trivial word
  IntMatrix free_matrix;     // rows: free basis of the finer H_1, cols: coarser
  IntMatrix torsion_matrix;  // rows: finer torsion then free basis, cols: coarser torsion
};

struct ProGroup {
  Pi1Mode mode = Pi1Mode::abelian;
  std::vector<ProLevel> levels;
  std::vector<ProBond> bonds;  // bonds[k]: level k+1 -> level k
  std::string note;

  json to_json() const {
    json lv = json::array();
    for (const auto& l : levels) {
      json j{{"name", l.name}, {"h1", ucl::to_json(l.h1)}};
      if (mode == Pi1Mode::presentation) j["presentation"] = ucl::to_json(l.group.reduced.pres);
      lv.push_back(j);
    }
    json bd = json::array();
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      const auto& b = bonds[k];
      json j{{"from", levels[k + 1].name}, {"to", levels[k].name}, {"homomorphism", b.homomorphism.to_json()}};
      if (mode == Pi1Mode::abelian) {
        j["free_matrix"] = b.free_matrix;
        if (!b.torsion_matrix.empty()) j["torsion_matrix"] = b.torsion_matrix;
      } else {
        json imgs = json::array();
        for (const auto& w : b.images) imgs.push_back(to_string(free_reduce(levels[k].group.reduced.translate(w))));
        j["generator_images"] = imgs;
      }
      bd.push_back(j);
    }
    json j{{"mode", mode == Pi1Mode::abelian ? "abelian" : "presentation"}, {"levels", lv}, {"bonds", bd}};
    if (!note.empty()) j["note"] = note;
    return j;
  }

  /// "Z <-x2- Z <-x2- Z" for rank-one free parts without torsion, else
  /// the levelwise invariants joined by arrows.
  std::string describe() const {
    auto group = [](const AbelianInvariants& a) {
      std::string s;
      for (int i = 0; i < a.free_rank; ++i) s += (s.empty() ? "" : "+") + std::string("Z");
      for (Int t : a.torsion) s += (s.empty() ? "" : "+") + ("Z/" + std::to_string(t));
      return s.empty() ? std::string("0") : s;
    };
    std::string out = group(levels[0].h1);
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      const auto& f = bonds[k].free_matrix;
      std::string arrow = "<-";
      if (f.size() == 1 && f[0].size() == 1) arrow += "x" + std::to_string(f[0][0]) + "-";
      else arrow += "-";
      out += " " + arrow + " " + group(levels[k + 1].h1);
    }
    return out;
  }
};

namespace detail {

inline ProLevel make_level(std::string name, const Space& s, int base) {
  RipsComplex k(s.finest(), 2);
  ProLevel l;
  l.name = std::move(name);
  l.group = pi1_presentation(k, base);
  l.smith = relator_smith(l.group.pres);
  l.h1 = invariants_of(l.smith);
  return l;
}

/// Coordinates of an exponent vector in the Smith basis: free entries
/// first, then torsion entries reduced mod their order.
inline std::pair<std::vector<Int>, std::vector<Int>> abelian_coords(const SmithForm& sf, const std::vector<Int>& x) {
  auto y = sf.transform(x);
  std::vector<Int> free, tors;
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (j >= sf.rank())
      free.push_back(y[j]);
    else if (sf.diagonal[j] > 1)
      tors.push_back(((y[j] % sf.diagonal[j]) + sf.diagonal[j]) % sf.diagonal[j]);
  }
  return {free, tors};
}

inline ProBond make_bond(const Space& fine_space, const ProLevel& fine, const Space& coarse_space,
                         const ProLevel& coarse, const std::vector<int>& vertex_map, std::size_t max_cosets) {
  ProBond b;
  RipsComplex kf(fine_space.finest(), 2), kc(coarse_space.finest(), 2);
  const Relation& ec = coarse_space.finest();
  for (auto [x, y] : fine_space.finest().pairs())
    if (!ec.contains(vertex_map[std::size_t(x)], vertex_map[std::size_t(y)])) {
      b.homomorphism = Verdict::no({{"reason", "vertex map does not send E_m-edges to E_m-edges"}, {"pair", {x, y}}});
      return b;
    }
  // The image of the fine basepoint joins the coarse basepoint by a tree path,
  // so images are loops at the coarse basepoint up to that fixed conjugation.
  for (int gen = 0; gen < fine.group.pres.generators; ++gen) {
    auto loop = generator_loop(fine.group, gen);
    std::vector<int> img;
    for (int v : loop) img.push_back(vertex_map[std::size_t(v)]);
    b.images.push_back(coarse.group.word_of(kc, img));
  }
  auto map_word = [&](const Word& w) {
    Word out;
    for (int l : w) {
      const Word& im = b.images[std::size_t(generator_of(l))];
      Word piece = l > 0 ? im : inverse(im);
      out.insert(out.end(), piece.begin(), piece.end());
    }
    return free_reduce(out);
  };
  b.homomorphism = Verdict::yes({{"relators", fine.group.pres.relators.size()}});
  for (std::size_t r = 0; r < fine.group.pres.relators.size(); ++r) {
    auto v = decide_trivial(coarse.group.reduced, map_word(fine.group.pres.relators[r]), max_cosets);
    if (!v.trivial) {
      b.homomorphism = Verdict::unknown("relator " + std::to_string(r) + " undecided within budget");
      break;
    }
    if (!*v.trivial) {
      b.homomorphism = Verdict::no({{"relator", r}});
      break;
    }
  }
  // Abelian matrices: images of the finer Smith basis in coarser coordinates.
  const auto& sf = fine.smith;
  for (std::size_t j = 0; j < sf.cols; ++j) {
    const bool free = j >= sf.rank();
    if (!free && sf.diagonal[j] <= 1) continue;
    std::vector<Int> img(std::size_t(coarse.group.pres.generators), 0);
    for (std::size_t g = 0; g < sf.cols; ++g) {
      Int c = sf.v_inverse[j][g];
      if (c == 0) continue;
      auto sums = exponent_sums(b.images[g], coarse.group.pres.generators);
      for (std::size_t t = 0; t < img.size(); ++t) img[t] = checked_add(img[t], checked_mul(c, sums[t]));
    }
    auto [fr, to] = abelian_coords(coarse.smith, img);
    if (free) b.free_matrix.push_back(fr);
    if (!to.empty()) b.torsion_matrix.push_back(to);
  }
  return b;
}

/// Flips finer free basis vectors so the leading entry of each bond row is
/// positive; a change of basis, so composites stay consistent.
inline void orient(ProGroup& p) {
  for (std::size_t k = 0; k < p.bonds.size(); ++k) {
    auto& rows = p.bonds[k].free_matrix;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto it = std::find_if(rows[r].begin(), rows[r].end(), [](Int v) { return v != 0; });
      if (it == rows[r].end() || *it > 0) continue;
      for (auto& v : rows[r]) v = -v;
      auto& tm = p.bonds[k].torsion_matrix;
      const auto& tors = p.levels[k].h1.torsion;
      if (!tm.empty()) {
        auto& trow = tm[p.levels[k + 1].h1.torsion.size() + r];
        for (std::size_t c = 0; c < trow.size(); ++c) trow[c] = (tors[c] - trow[c]) % tors[c];
      }
      if (k + 1 < p.bonds.size())
        for (auto& row : p.bonds[k + 1].free_matrix) row[r] = -row[r];
    }
  }
}

}  // namespace detail

/// Levels are the scales of one space, bonded by the identity.
inline ProGroup uniform_pi1(const Space& s, Pi1Mode mode = Pi1Mode::abelian, Budgets budgets = Budgets::from_env()) {
  ProGroup p;
  p.mode = mode;
  const int base = s.basepoint().value_or(0);
  std::vector<Space> scales;
  for (std::size_t i = 0; i < s.scales(); ++i) {
    RawSpace raw;
    raw.points = s.labels();
    raw.entries = {s.entries()[i]};
    scales.push_back(validate_space(raw));
    p.levels.push_back(detail::make_level(s.name(i), scales.back(), base));
  }
  std::vector<int> id(s.size());
  std::iota(id.begin(), id.end(), 0);
  for (std::size_t i = 0; i + 1 < s.scales(); ++i)
    p.bonds.push_back(detail::make_bond(scales[i + 1], p.levels[i + 1], scales[i], p.levels[i], id, budgets.cosets));
  if (!is_chain_connected(s).is_yes()) p.note = "computed on the basepoint's chain component";
  detail::orient(p);
  return p;
}

/// Levels of a tower at their finest scales, bonded by the tower maps.
inline ProGroup uniform_pi1(const Tower& t, Pi1Mode mode = Pi1Mode::abelian, Budgets budgets = Budgets::from_env()) {
  if (t.levels.empty() || t.bonds.size() + 1 != t.levels.size())
    throw std::invalid_argument("a tower needs one bond between consecutive levels");
  ProGroup p;
  p.mode = mode;
  std::vector<int> base(t.levels.size());
  base.back() = t.levels.back()->basepoint().value_or(0);
  for (std::size_t k = t.levels.size() - 1; k-- > 0;) base[k] = t.bonds[k](base[k + 1]);
  for (std::size_t k = 0; k < t.levels.size(); ++k)
    p.levels.push_back(detail::make_level("level" + std::to_string(k), *t.levels[k], base[k]));
  for (std::size_t k = 0; k < t.bonds.size(); ++k) {
    if (t.bonds[k].source != t.levels[k + 1] || t.bonds[k].target != t.levels[k])
      throw std::invalid_argument("bond " + std::to_string(k) + " does not join consecutive levels");
    p.bonds.push_back(detail::make_bond(*t.levels[k + 1], p.levels[k + 1], *t.levels[k], p.levels[k],
                                        t.bonds[k].values, budgets.cosets));
  }
  detail::orient(p);
  return p;
}

// ---------------------------------------------------------------------------

/// Yes iff every pair of distinct points is separated by some base entry,
/// i.e. lies in different chain components of it; then every generalized
/// path is constant.
inline Verdict verify_constant_gp(const Space& s) {
  if (s.mode() != Mode::strict) throw std::invalid_argument("verify_constant_gp expects a strict chain");
  std::vector<std::vector<int>> comps;
  for (std::size_t i = 0; i < s.scales(); ++i) comps.push_back(components(s.entry(i)));
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      bool separated = false;
      for (const auto& c : comps) separated |= c[x] != c[y];
      if (!separated) return Verdict::no({{"pair", {s.label(int(x)), s.label(int(y))}}});
    }
  return Verdict::yes({{"separating_entry", s.name(s.finest_index())}});
}

}  // namespace ucl
