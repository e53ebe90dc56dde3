// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Decision procedures for the equivalent descriptions of a uniform covering
/// map f: X -> Y between finite spaces, plus approximate uniqueness of chain
/// lifts and the resulting classification.
///
/// Every entourage of a finite chain contains the finest entry E_m, so "for
/// all E there is F" quantifiers only need the base entries, and the search
/// for F returns the coarsest entry that works.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "map.hpp"
#include "rips.hpp"

namespace ucl {

namespace detail {

inline json scale_names(const Space& s, const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (auto i : idx) out.push_back(s.name(i));
  return out;
}

/// Every f(F)-edge out of f(x1) lifts to an E-edge out of x1.
inline std::optional<json> lifting_failure(const UniformMap& f, std::size_t e, std::size_t fi) {
  const Space& x = *f.source;
  const Relation img = f.image_of_entry(fi);
  for (std::size_t x1 = 0; x1 < x.size(); ++x1) {
    const int y1 = f(int(x1));
    for (int y2 : img.row(y1)) {
      bool found = false;
      for (int x2 : x.entry(e).row(int(x1)))
        if (f(x2) == y2) {
          found = true;
          break;
        }
      if (!found) return json{{"E", x.name(e)}, {"F", x.name(fi)}, {"edge", {y1, y2}}, {"from", int(x1)}};
    }
  }
  return std::nullopt;
}

/// Two F-neighbours of one point with the same image.
inline std::optional<json> uniqueness_failure(const UniformMap& f, std::size_t fi) {
  const Space& x = *f.source;
  for (std::size_t c = 0; c < x.size(); ++c) {
    auto b = x.entry(fi).row(int(c));
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t d = a + 1; d < b.size(); ++d)
        if (f(b[a]) == f(b[d]))
          return json{{"F", x.name(fi)}, {"chains", {{int(c), b[a]}, {int(c), b[d]}}}};
  }
  return std::nullopt;
}

/// Synchronized walks over F from the diagonal. Returns the first reachable
/// pair outside `e`, decoded into two F-chains with identical images.
inline std::optional<std::pair<std::vector<int>, std::vector<int>>> product_escape(
    const UniformMap& f, const Relation& e, const Relation& fr, std::size_t max_steps = std::size_t(-1)) {
  const std::size_t n = f.source->size();
  std::vector<int> parent(n * n, -2);
  std::vector<std::size_t> depth(n * n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x) {
    parent[x * n + x] = -1;
    queue.push_back(x * n + x);
  }
  auto decode = [&](std::size_t s) {
    std::vector<int> c, d;
    for (long k = long(s); k >= 0; k = parent[std::size_t(k)]) {
      c.push_back(int(std::size_t(k) / n));
      d.push_back(int(std::size_t(k) % n));
    }
    std::reverse(c.begin(), c.end());
    std::reverse(d.begin(), d.end());
    return std::pair{c, d};
  };
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::size_t s = queue[qi];
    const int a = int(s / n), b = int(s % n);
    if (!e.contains(a, b)) return decode(s);
    if (depth[s] >= max_steps) continue;
    auto ra = fr.row(a), rb = fr.row(b);
    for (int a2 : ra)
      for (int b2 : rb) {
        if (f(a2) != f(b2)) continue;
        std::size_t t = std::size_t(a2) * n + std::size_t(b2);
        if (parent[t] != -2) continue;
        parent[t] = int(s);
        depth[t] = depth[s] + 1;
        queue.push_back(t);
      }
  }
  return std::nullopt;
}

}  // namespace detail

/// Condition 1: f maps B(x, E) bijectively onto B(f(x), f(E)) for a basis,
/// which for a finite chain means at the finest entry.
inline Verdict check_ball_bijectivity(const UniformMap& f) {
  const Space& x = *f.source;
  std::vector<std::size_t> good;
  json first_bad;
  for (std::size_t i = 0; i < x.scales(); ++i) {
    const Relation img = f.image_of_entry(i);
    json bad;
    for (std::size_t p = 0; p < x.size() && bad.is_null(); ++p) {
      auto b = ball(x, int(p), i);
      std::set<int> seen;
      for (int q : b)
        if (!seen.insert(f(q)).second) {
          bad = {{"scale", x.name(i)}, {"point", int(p)}, {"ball", b}, {"reason", "not injective"}, {"image", f(q)}};
          break;
        }
      if (!bad.is_null()) break;
      for (int y : img.row(f(int(p))))
        if (!seen.count(y)) {
          bad = {{"scale", x.name(i)}, {"point", int(p)}, {"ball", b}, {"reason", "not onto"}, {"missed", y}};
          break;
        }
    }
    if (bad.is_null())
      good.push_back(i);
    else if (first_bad.is_null() || i == x.finest_index())
      first_bad = bad;
  }
  if (!good.empty() && good.back() == x.finest_index())
    return Verdict::yes({{"scales", detail::scale_names(x, good)}});
  return Verdict::no(first_bad);
}

/// Condition 2: f_E restricts to an isomorphism of closed vertex stars
/// R(X, E) -> R(Y, f(E)), simplices up to dimension dmax.
inline Verdict check_simplicial_cover(const UniformMap& f, int dmax = 2) {
  const Space& x = *f.source;
  std::vector<std::size_t> good;
  json bad_at_finest;
  for (std::size_t i = 0; i < x.scales(); ++i) {
    RipsComplex src(x.entry(i), dmax);
    const Relation img = f.image_of_entry(i);
    RipsComplex dst(img, dmax);
    auto closed_star = [&](const RipsComplex& k, int v) {
      std::set<Simplex> out;
      for (int d = 0; d <= dmax; ++d)
        for (const auto& s : k.simplices(d)) {
          if (std::find(s.begin(), s.end(), v) == s.end() && int(s.size()) > dmax) continue;
          Simplex t = s;
          if (std::find(t.begin(), t.end(), v) == t.end()) {
            t.push_back(v);
            if (!k.is_simplex(t)) continue;
          }
          out.insert(s);
        }
      return out;
    };
    json bad;
    for (std::size_t p = 0; p < x.size() && bad.is_null(); ++p) {
      auto star = closed_star(src, int(p));
      std::set<int> verts;
      for (const auto& s : star)
        if (s.size() == 1) verts.insert(s[0]);
      std::set<int> vimg;
      for (int v : verts) vimg.insert(f(v));
      if (vimg.size() != verts.size()) {
        bad = {{"scale", x.name(i)}, {"vertex", int(p)}, {"reason", "star not injective"}};
        break;
      }
      std::set<Simplex> mapped;
      for (const auto& s : star) {
        Simplex t;
        for (int v : s) t.push_back(f(v));
        std::sort(t.begin(), t.end());
        mapped.insert(t);
      }
      auto target = closed_star(dst, f(int(p)));
      if (mapped != target) {
        json sample;
        for (const auto& t : target)
          if (!mapped.count(t)) {
            sample = t;
            break;
          }
        bad = {{"scale", x.name(i)}, {"vertex", int(p)}, {"reason", "star not onto"}, {"missed_simplex", sample}};
      }
    }
    if (bad.is_null())
      good.push_back(i);
    else if (i == x.finest_index())
      bad_at_finest = bad;
  }
  if (bad_at_finest.is_null()) return Verdict::yes({{"scales", detail::scale_names(x, good)}, {"dmax", dmax}});
  return Verdict::no(bad_at_finest);
}

/// Condition 3a: for every E some F such that f(F)-edges lift to E-edges
/// from every point of the fibre.
inline Verdict check_chain_lifting(const UniformMap& f) {
  const Space& x = *f.source;
  json table = json::object();
  for (std::size_t e = 0; e < x.scales(); ++e) {
    std::optional<std::size_t> hit;
    json last;
    for (std::size_t fi = 0; fi < x.scales() && !hit; ++fi) {
      auto bad = detail::lifting_failure(f, e, fi);
      if (!bad)
        hit = fi;
      else
        last = *bad;
    }
    if (!hit) {
      Verdict v = Verdict::no(last);
      v.base_relative = true;
      return v;
    }
    table[x.name(e)] = x.name(*hit);
  }
  Verdict v = Verdict::yes(table);
  v.base_relative = true;
  return v;
}

/// Condition 3b: some entry E_0 with (x, y) in E_0 and f(x) = f(y) only for
/// x = y. Tested on the probe relation of each entry.
inline Verdict check_transverse(const UniformMap& f) {
  const Space& x = *f.source;
  json bad;
  for (std::size_t i = 0; i < x.scales(); ++i) {
    const Relation& p = x.probe(i);
    std::optional<Pair> hit;
    for (auto [a, b] : p.upper_pairs())
      if (a != b && f(a) == f(b)) {
        hit = Pair{a, b};
        break;
      }
    if (!hit) return Verdict::yes({{"E0", x.name(i)}});
    bad = {{"scale", x.name(i)}, {"pair", {hit->first, hit->second}}};
  }
  return Verdict::no(bad);
}

/// Uniqueness of chain lifts (edge level): for some F, F-neighbours of a
/// point never share an image. Does not depend on E.
inline Verdict check_lift_uniqueness(const UniformMap& f) {
  const Space& x = *f.source;
  json bad;
  for (std::size_t fi = 0; fi < x.scales(); ++fi) {
    auto b = detail::uniqueness_failure(f, fi);
    if (!b) {
      json table = json::object();
      for (std::size_t e = 0; e < x.scales(); ++e) table[x.name(e)] = x.name(fi);
      Verdict v = Verdict::yes(table);
      v.base_relative = true;
      return v;
    }
    bad = *b;
  }
  Verdict v = Verdict::no(bad);
  v.base_relative = true;
  return v;
}

/// Condition 4: chain lifting together with uniqueness of lifts.
inline Verdict check_unique_chain_lifting(const UniformMap& f) {
  auto lift = check_chain_lifting(f);
  auto uniq = check_lift_uniqueness(f);
  Verdict v;
  if (lift.is_yes() && uniq.is_yes())
    v = Verdict::yes({{"lifting", lift.witness}, {"uniqueness", uniq.witness}});
  else if (!lift.is_yes())
    v = Verdict::no({{"part", "lifting"}, {"detail", lift.counterexample}});
  else
    v = Verdict::no({{"part", "uniqueness"}, {"detail", uniq.counterexample}});
  v.base_relative = true;
  return v;
}

/// Approximate uniqueness: for every E some F such that any two F-chains from
/// one point with identical images stay pointwise E-close.
inline Verdict check_approx_uniqueness(const UniformMap& f) {
  const Space& x = *f.source;
  json table = json::object();
  for (std::size_t e = 0; e < x.scales(); ++e) {
    std::optional<std::size_t> hit;
    for (std::size_t fi = 0; fi < x.scales() && !hit; ++fi)
      if (!detail::product_escape(f, x.entry(e), x.entry(fi))) hit = fi;
    if (!hit) {
      auto [c, d] = *detail::product_escape(f, x.entry(e), x.finest());
      Verdict v = Verdict::no({{"E", x.name(e)},
                               {"F", x.name(x.finest_index())},
                               {"state", {c.back(), d.back()}},
                               {"chains", {c, d}}});
      v.base_relative = true;
      return v;
    }
    table[x.name(e)] = x.name(*hit);
  }
  Verdict v = Verdict::yes(table);
  v.base_relative = true;
  return v;
}

/// Whole-chain cross-checks. Lifting: for each (E, F), every f(F)-chain in Y
/// of at most max_len points, from any f(x), has an E-lift from x; tracked as
/// (endpoint, set of lift endpoints) states. Uniqueness: two F-chains from
/// one point, with equal images and at most max_len points, coincide.
struct ChainSelfCheck {
  bool lifting_agrees = true;
  bool uniqueness_agrees = true;
  std::size_t max_len = 0;

  json to_json() const {
    return {{"lifting_agrees", lifting_agrees}, {"uniqueness_agrees", uniqueness_agrees}, {"max_length", max_len}};
  }
};

inline bool lifts_all_chains(const UniformMap& f, std::size_t e, std::size_t fi, std::size_t max_len) {
  const Space& x = *f.source;
  const Relation img = f.image_of_entry(fi);
  const std::size_t n = x.size();
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    using State = std::pair<int, std::vector<char>>;
    std::set<State> seen;
    std::vector<std::pair<State, std::size_t>> queue;
    std::vector<char> start(n, 0);
    start[x0] = 1;
    queue.push_back({{f(int(x0)), start}, 1});
    seen.insert(queue.back().first);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto [st, len] = queue[qi];
      if (len >= max_len) continue;
      for (int y2 : img.row(st.first)) {
        std::vector<char> next(n, 0);
        bool any = false;
        for (std::size_t a = 0; a < n; ++a)
          if (st.second[a])
            for (int b : x.entry(e).row(int(a)))
              if (f(b) == y2) next[std::size_t(b)] = 1, any = true;
        if (!any) return false;
        State t{y2, next};
        if (seen.insert(t).second) queue.push_back({t, len + 1});
      }
    }
  }
  return true;
}

inline ChainSelfCheck chain_self_check(const UniformMap& f, const Verdict& lifting, const Verdict& uniqueness,
                                       std::size_t max_len) {
  const Space& x = *f.source;
  ChainSelfCheck out;
  out.max_len = max_len;
  bool all_lift = true;
  for (std::size_t e = 0; e < x.scales() && all_lift; ++e) {
    bool some = false;
    for (std::size_t fi = 0; fi < x.scales() && !some; ++fi) some = lifts_all_chains(f, e, fi, max_len);
    all_lift = some;
  }
  out.lifting_agrees = all_lift == lifting.is_yes();
  bool some_unique = false;
  for (std::size_t fi = 0; fi < x.scales() && !some_unique; ++fi)
    some_unique = !detail::product_escape(f, Relation::diagonal(x.size()), x.entry(fi), max_len - 1);
  out.uniqueness_agrees = some_unique == uniqueness.is_yes();
  return out;
}

enum class CoverClass { uniform_covering, generalized_covering, neither };

inline std::string_view to_string(CoverClass c) {
  switch (c) {
    case CoverClass::uniform_covering: return "uniform-covering";
    case CoverClass::generalized_covering: return "generalized-uniform-covering";
    case CoverClass::neither: return "neither";
  }
  return "neither";
}

struct CoverReport {
  Verdict generates;
  Verdict condition1, condition2, condition3a, condition3b, uniqueness, condition4;
  Verdict approximate_uniqueness;
  Verdict complete_fibers;
  std::optional<ChainSelfCheck> self_check;
  CoverClass overall = CoverClass::neither;

  bool condition3() const { return condition3a.is_yes() && condition3b.is_yes(); }

  /// Conditions 1, 3 and 4 must always agree; condition 2 is reported apart.
  bool exact_conditions_agree() const {
    return condition1.is_yes() == condition3() && condition3() == condition4.is_yes();
  }
  bool condition2_agrees() const { return condition2.is_yes() == condition4.is_yes(); }

  json to_json() const {
    json j;
    j["class"] = std::string(to_string(overall));
    j["generates_structure"] = generates.to_json();
    j["condition1"] = condition1.to_json();
    j["condition2"] = condition2.to_json();
    j["condition3a"] = condition3a.to_json();
    j["condition3b"] = condition3b.to_json();
    j["uniqueness"] = uniqueness.to_json();
    j["condition4"] = condition4.to_json();
    j["approximate_uniqueness"] = approximate_uniqueness.to_json();
    j["complete_fibers"] = complete_fibers.to_json();
    j["agreement"] = {{"conditions_1_3_4", exact_conditions_agree()}, {"condition2", condition2_agrees()}};
    if (self_check) j["self_check"] = self_check->to_json();
    return j;
  }
};

struct ClassifyOptions {
  int dmax = 2;
  std::size_t self_check_max_points = 8;  // whole-chain cross-check only on small sources
};

inline CoverReport classify_map(const UniformMap& f, ClassifyOptions opt = {}) {
  CoverReport r;
  r.generates = generates_structure(f);
  r.condition1 = check_ball_bijectivity(f);
  r.condition2 = check_simplicial_cover(f, opt.dmax);
  r.condition3a = check_chain_lifting(f);
  r.condition3b = check_transverse(f);
  r.uniqueness = check_lift_uniqueness(f);
  r.condition4 = check_unique_chain_lifting(f);
  r.approximate_uniqueness = check_approx_uniqueness(f);
  r.complete_fibers = Verdict::yes({{"reason", "finite fibres are complete"}});
  if (f.source->size() <= opt.self_check_max_points)
    r.self_check = chain_self_check(f, r.condition3a, r.uniqueness, 2 * f.source->size());
  if (r.generates.is_yes() && r.condition4.is_yes())
    r.overall = CoverClass::uniform_covering;
  else if (r.generates.is_yes() && r.condition3a.is_yes() && r.approximate_uniqueness.is_yes())
    r.overall = CoverClass::generalized_covering;
  return r;
}

}  // namespace ucl
