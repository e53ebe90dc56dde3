// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Finite permutation groups acting on finite uniform spaces: element
/// enumeration, the sets S_F and subgroups G_F, the classifier flags, the
/// orbit space and cross-checks of the implications between them.

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "covering.hpp"
#include "map.hpp"

namespace ucl {

using Perm = std::vector<int>;

inline Perm compose_perm(const Perm& g, const Perm& h) {  // (g h)(x) = g(h(x))
  Perm out(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) out[x] = g[std::size_t(h[x])];
  return out;
}

inline Perm invert_perm(const Perm& g) {
  Perm out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[std::size_t(g[x])] = int(x);
  return out;
}

inline bool is_permutation(const Perm& g, std::size_t n) {
  if (g.size() != n) return false;
  std::vector<char> hit(n, 0);
  for (int v : g) {
    if (v < 0 || std::size_t(v) >= n || hit[std::size_t(v)]) return false;
    hit[std::size_t(v)] = 1;
  }
  return true;
}

struct ActionLimits {
  std::size_t max_elements = 512;
};

class GroupAction {
public:
  GroupAction(std::shared_ptr<const Space> space, std::vector<Perm> generators, std::vector<std::string> names = {},
              ActionLimits limits = {})
      : space_(std::move(space)), generators_(std::move(generators)), names_(std::move(names)) {
    const std::size_t n = space_->size();
    for (std::size_t k = 0; k < generators_.size(); ++k)
      if (!is_permutation(generators_[k], n))
        throw std::invalid_argument("generator " + std::to_string(k) + " is not a permutation of the points");
    if (names_.empty())
      for (std::size_t k = 0; k < generators_.size(); ++k) names_.push_back("g" + std::to_string(k + 1));
    if (names_.size() != generators_.size()) throw std::invalid_argument("one name per generator expected");

    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    elements_.push_back(id);
    words_.push_back({});
    index_[id] = 0;
    for (std::size_t head = 0; head < elements_.size(); ++head)
      for (std::size_t k = 0; k < generators_.size(); ++k) {
        Perm next = compose_perm(generators_[k], elements_[head]);
        if (index_.count(next)) continue;
        if (elements_.size() >= limits.max_elements)
          throw std::length_error("group exceeds " + std::to_string(limits.max_elements) + " elements");
        index_[next] = elements_.size();
        elements_.push_back(next);
        std::vector<int> w{int(k)};
        w.insert(w.end(), words_[head].begin(), words_[head].end());
        words_.push_back(std::move(w));
      }
    const std::size_t g = elements_.size();
    mult_.assign(g * g, 0);
    for (std::size_t a = 0; a < g; ++a)
      for (std::size_t b = 0; b < g; ++b) mult_[a * g + b] = index_.at(compose_perm(elements_[a], elements_[b]));
    inverse_.resize(g);
    for (std::size_t a = 0; a < g; ++a) inverse_[a] = index_.at(invert_perm(elements_[a]));
    for (std::size_t k = 0; k < generators_.size(); ++k)
      if (generators_[k] == id) trivial_generators_.push_back(int(k));
  }

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t order() const { return elements_.size(); }
  const Perm& element(std::size_t g) const { return elements_[g]; }
  int act(std::size_t g, int x) const { return elements_[g][std::size_t(x)]; }
  std::size_t multiply(std::size_t a, std::size_t b) const { return mult_[a * order() + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  std::optional<std::size_t> find(const Perm& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  /// Generators that act as the identity; they are dropped from the group.
  const std::vector<int>& trivial_generators() const { return trivial_generators_; }

  /// Shortest generator word, left to right, e.g. "r*r"; "1" for the identity.
  std::string word(std::size_t g) const {
    if (words_[g].empty()) return "1";
    std::string s;
    for (int k : words_[g]) s += (s.empty() ? "" : "*") + names_[std::size_t(k)];
    return s;
  }

  /// Orbit index of each point (orbits numbered by smallest member).
  std::vector<int> orbits() const {
    const std::size_t n = space_->size();
    std::vector<int> orbit(n, -1);
    int next = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (orbit[x] >= 0) continue;
      for (std::size_t g = 0; g < order(); ++g) orbit[std::size_t(act(g, int(x)))] = next;
      ++next;
    }
    return orbit;
  }

  /// g^-1(E) contains E_m for each base entry E, i.e. g is uniformly continuous.
  bool uniformly_continuous(std::size_t g) const {
    for (std::size_t i = 0; i < space_->scales(); ++i)
      for (auto [x, y] : space_->finest().pairs())
        if (!space_->entry(i).contains(act(g, x), act(g, y))) return false;
    return true;
  }

private:
  std::shared_ptr<const Space> space_;
  std::vector<Perm> generators_;
  std::vector<std::string> names_;
  std::vector<Perm> elements_;
  std::vector<std::vector<int>> words_;
  std::map<Perm, std::size_t> index_;
  std::vector<std::size_t> mult_;
  std::vector<std::size_t> inverse_;
  std::vector<int> trivial_generators_;
};

/// S_F = {h : (x, h x) in F for some x}, with F the probe relation of entry i.
inline std::vector<std::size_t> s_f(const GroupAction& a, std::size_t i) {
  const Relation& f = a.space().probe(i);
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < a.order(); ++g)
    for (std::size_t x = 0; x < a.space().size(); ++x)
      if (f.contains(int(x), a.act(g, int(x)))) {
        out.push_back(g);
        break;
      }
  return out;
}

/// Subgroup generated by a set of elements.
inline std::vector<std::size_t> generated_subgroup(const GroupAction& a, const std::vector<std::size_t>& gens) {
  std::vector<char> in(a.order(), 0);
  std::vector<std::size_t> out{0};
  in[0] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (std::size_t s : gens) {
      std::size_t t = a.multiply(s, out[head]);
      if (!in[t]) {
        in[t] = 1;
        out.push_back(t);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::size_t> g_f(const GroupAction& a, std::size_t i) { return generated_subgroup(a, s_f(a, i)); }

struct ActionReport {
  Verdict neutral, properly_discontinuous, equicontinuous, equi_uniform;
  Verdict ssuc, ssue, ssbo;
  Verdict free, faithful, discrete, pro_discrete, hausdorff;
  Verdict chain_connected, by_uniform_equivalences;
  std::size_t order = 0;

  json to_json() const {
    json j;
    j["order"] = order;
    j["neutral"] = neutral.to_json();
    j["uniformly_properly_discontinuous"] = properly_discontinuous.to_json();
    j["equicontinuous"] = equicontinuous.to_json();
    j["equi_uniform"] = equi_uniform.to_json();
    j["small_scale_uniformly_continuous"] = ssuc.to_json();
    j["small_scale_uniformly_equicontinuous"] = ssue.to_json();
    j["small_scale_bounded_orbits"] = ssbo.to_json();
    j["free"] = free.to_json();
    j["faithful"] = faithful.to_json();
    j["discrete"] = discrete.to_json();
    j["pro_discrete"] = pro_discrete.to_json();
    j["hausdorff"] = hausdorff.to_json();
    j["chain_connected"] = chain_connected.to_json();
    j["by_uniform_equivalences"] = by_uniform_equivalences.to_json();
    return j;
  }
};

namespace detail {

/// For each E the coarsest F with ok(E, F); otherwise the failure at the finest F.
template <class Check>
Verdict for_all_exists(const Space& s, Check check) {
  json table = json::object();
  for (std::size_t e = 0; e < s.scales(); ++e) {
    std::optional<std::size_t> hit;
    json last;
    for (std::size_t f = 0; f < s.scales() && !hit; ++f) {
      std::optional<json> bad = check(e, f);
      if (!bad)
        hit = f;
      else
        last = *bad;
    }
    if (!hit) {
      Verdict v = Verdict::no(last);
      v.base_relative = true;
      return v;
    }
    table[s.name(e)] = s.name(*hit);
  }
  Verdict v = Verdict::yes(table);
  v.base_relative = true;
  return v;
}

inline Verdict both(const Verdict& a, const Verdict& b, const char* na, const char* nb) {
  if (a.is_yes() && b.is_yes()) return Verdict::yes({{na, a.witness}, {nb, b.witness}});
  return Verdict::no({{"failed", !a.is_yes() ? na : nb}});
}

}  // namespace detail

inline ActionReport classify_action(const GroupAction& a) {
  const Space& s = a.space();
  const std::size_t n = s.size();
  ActionReport r;
  r.order = a.order();
  std::vector<std::vector<std::size_t>> gf;
  for (std::size_t i = 0; i < s.scales(); ++i) gf.push_back(g_f(a, i));
  const auto orbit = a.orbits();

  // (x, h y) in F  =>  some g with (g x, y) in E.
  r.neutral = detail::for_all_exists(s, [&](std::size_t e, std::size_t f) -> std::optional<json> {
    for (auto [x, z] : s.entry(f).pairs())
      for (std::size_t h = 0; h < a.order(); ++h) {
        const int y = a.act(a.inverse(h), z);  // z = h y
        bool found = false;
        for (std::size_t g = 0; g < a.order() && !found; ++g) found = s.entry(e).contains(a.act(g, x), y);
        if (!found)
          return json{{"E", s.name(e)}, {"F", s.name(f)}, {"x", x}, {"y", y}, {"h", a.word(h)}};
      }
    return std::nullopt;
  });

  // Some entry whose probe never holds a nontrivial (x, g x).
  {
    json bad;
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < s.scales() && !hit; ++i) {
      bool ok = true;
      for (std::size_t g = 1; g < a.order() && ok; ++g)
        for (std::size_t x = 0; x < n; ++x)
          if (s.probe(i).contains(int(x), a.act(g, int(x)))) {
            ok = false;
            bad = {{"E", s.name(i)}, {"x", int(x)}, {"g", a.word(g)}, {"gx", a.act(g, int(x))}};
            break;
          }
      if (ok) hit = i;
    }
    r.properly_discontinuous = hit ? Verdict::yes({{"E", s.name(*hit)}}) : Verdict::no(bad);
  }

  r.equicontinuous = detail::for_all_exists(s, [&](std::size_t e, std::size_t f) -> std::optional<json> {
    for (auto [x, y] : s.entry(f).pairs())
      for (std::size_t g = 0; g < a.order(); ++g)
        if (!s.entry(e).contains(a.act(g, x), a.act(g, y)))
          return json{{"E", s.name(e)}, {"F", s.name(f)}, {"pair", {x, y}}, {"g", a.word(g)}};
    return std::nullopt;
  });

  // Base of G-invariant entourages: every entry contains the G-saturation of
  // some entourage; for a finite chain, the saturation of E_m must stay in E_m.
  {
    Relation sat(n);
    for (auto [x, y] : s.finest().pairs())
      for (std::size_t g = 0; g < a.order(); ++g) sat.set(a.act(g, x), a.act(g, y));
    json invariant = json::array();
    for (std::size_t i = 0; i < s.scales(); ++i) {
      bool inv = true;
      for (auto [x, y] : s.entry(i).pairs())
        for (std::size_t g = 0; g < a.order() && inv; ++g) inv = s.entry(i).contains(a.act(g, x), a.act(g, y));
      if (inv) invariant.push_back(s.name(i));
    }
    if (sat.subset_of(s.finest()))
      r.equi_uniform = Verdict::yes({{"invariant_entries", invariant}});
    else {
      json c{{"reason", "saturation of the finest entry leaves it"}};
      for (auto [x, y] : sat.pairs())
        if (!s.finest().contains(x, y)) {
          c["pair"] = {x, y};
          break;
        }
      r.equi_uniform = Verdict::no(c);
    }
  }

  r.ssuc = detail::for_all_exists(s, [&](std::size_t e, std::size_t f) -> std::optional<json> {
    for (std::size_t g : gf[f])
      for (auto [x, y] : s.finest().pairs())
        if (!s.entry(e).contains(a.act(g, x), a.act(g, y)))
          return json{{"E", s.name(e)}, {"F", s.name(f)}, {"g", a.word(g)}, {"pair", {x, y}}};
    return std::nullopt;
  });

  r.ssue = detail::for_all_exists(s, [&](std::size_t e, std::size_t f) -> std::optional<json> {
    for (std::size_t g : gf[f])
      for (auto [x, y] : s.entry(f).pairs())
        if (!s.entry(e).contains(a.act(g, x), a.act(g, y)))
          return json{{"E", s.name(e)}, {"F", s.name(f)}, {"g", a.word(g)}, {"pair", {x, y}}};
    return std::nullopt;
  });

  r.ssbo = detail::for_all_exists(s, [&](std::size_t e, std::size_t f) -> std::optional<json> {
    for (std::size_t g : gf[f])
      for (std::size_t x = 0; x < n; ++x)
        if (!s.entry(e).contains(int(x), a.act(g, int(x))))
          return json{{"E", s.name(e)}, {"F", s.name(f)}, {"g", a.word(g)}, {"x", int(x)}};
    return std::nullopt;
  });

  {
    json bad;
    for (std::size_t g = 1; g < a.order() && bad.is_null(); ++g)
      for (std::size_t x = 0; x < n; ++x)
        if (a.act(g, int(x)) == int(x)) {
          bad = {{"g", a.word(g)}, {"x", int(x)}};
          break;
        }
    r.free = bad.is_null() ? Verdict::yes() : Verdict::no(bad);
  }

  r.faithful = Verdict::yes();
  if (!a.trivial_generators().empty()) {
    json k = json::array();
    for (int g : a.trivial_generators()) k.push_back(a.names()[std::size_t(g)]);
    r.faithful.note = "generators acting trivially were quotiented out";
    r.faithful.witness = {{"kernel_generators", k}};
  }

  r.hausdorff = s.is_hausdorff() ? Verdict::yes() : [&] {
    auto p = s.finest().upper_pairs();
    for (auto [x, y] : p)
      if (x != y) return Verdict::no({{"pair", {x, y}}});
    return Verdict::no({});
  }();
  r.chain_connected = is_chain_connected(s);

  {
    json bad;
    for (std::size_t g = 0; g < a.order(); ++g)
      if (!a.uniformly_continuous(g)) {
        bad = {{"g", a.word(g)}};
        break;
      }
    r.by_uniform_equivalences = bad.is_null() ? Verdict::yes() : Verdict::no(bad);
  }

  r.discrete = detail::both(r.equicontinuous, r.properly_discontinuous, "equicontinuous",
                            "uniformly_properly_discontinuous");
  r.pro_discrete = detail::both(r.equicontinuous, r.ssbo, "equicontinuous", "small_scale_bounded_orbits");
  return r;
}

struct QuotientResult {
  std::shared_ptr<const Space> space;
  UniformMap projection;
  std::vector<std::vector<int>> orbits;  // members of each orbit
  bool downgraded = false;                // strict source, scale quotient
};

/// X/G with base entries p(E_i), deduplicated in chain order.
inline QuotientResult orbit_space(const GroupAction& a) {
  const Space& s = a.space();
  const auto orbit = a.orbits();
  const std::size_t m = std::size_t(*std::max_element(orbit.begin(), orbit.end()) + 1);
  QuotientResult q;
  q.orbits.assign(m, {});
  for (std::size_t x = 0; x < s.size(); ++x) q.orbits[std::size_t(orbit[x])].push_back(int(x));

  RawSpace raw;
  for (const auto& o : q.orbits) {
    std::string label;
    for (int x : o) label += (label.empty() ? "" : "|") + s.label(std::size_t(x));
    raw.points.push_back(label);
  }
  for (std::size_t i = 0; i < s.scales(); ++i) {
    Relation r = image(s.entry(i), orbit, m);
    if (raw.entries.empty() || !(raw.entries.back().rel == r)) raw.entries.push_back({s.name(i), r});
  }
  if (s.basepoint()) raw.basepoint = orbit[std::size_t(*s.basepoint())];
  raw.mode = s.mode();
  std::shared_ptr<const Space> qs;
  try {
    qs = std::make_shared<Space>(validate_space(raw));
  } catch (const ValidationError&) {
    raw.mode = Mode::scale;
    qs = std::make_shared<Space>(validate_space(raw));
    q.downgraded = true;
  }
  q.space = qs;
  q.projection = UniformMap(a.space_ptr(), qs, orbit);
  return q;
}

/// One checked implication or equivalence.
struct TheoremCheck {
  std::string name;
  std::string status;  // "pass", "fail", "skipped"
  json detail;

  json to_json() const { return {{"name", name}, {"status", status}, {"detail", detail}}; }
};

struct ActionTheorems {
  ActionReport action;
  CoverReport projection;
  std::vector<TheoremCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }

  json to_json() const {
    json cs = json::array();
    for (const auto& c : checks) cs.push_back(c.to_json());
    return {{"action", action.to_json()}, {"projection_class", std::string(to_string(projection.overall))},
            {"projection", projection.to_json()}, {"checks", cs}, {"all_pass", all_pass()}};
  }
};

inline ActionTheorems verify_action_theorems(const GroupAction& a, ClassifyOptions opt = {}) {
  ActionTheorems t;
  t.action = classify_action(a);
  auto q = orbit_space(a);
  t.projection = classify_map(q.projection, opt);
  const auto& r = t.action;
  const auto& p = t.projection;
  const bool uc = p.overall == CoverClass::uniform_covering;
  const bool covering_class = p.overall != CoverClass::neither;
  const bool cc = r.chain_connected.is_yes();
  const bool faithful = r.faithful.is_yes();

  auto implication = [&](std::string name, bool hyp, bool concl, json detail = {}) {
    t.checks.push_back({std::move(name), !hyp ? "skipped" : concl ? "pass" : "fail", std::move(detail)});
  };
  auto equivalence = [&](std::string name, bool lhs, bool rhs) {
    t.checks.push_back({std::move(name), lhs == rhs ? "pass" : "fail", {{"lhs", lhs}, {"rhs", rhs}}});
  };

  equivalence("neutral iff chain lifting", r.neutral.is_yes(), p.condition3a.is_yes());
  {
    bool same = true;
    if (r.properly_discontinuous.is_yes()) {
      // The PD entourage itself is transverse to p.
      const Space& s = a.space();
      std::string e = r.properly_discontinuous.witness["E"];
      for (std::size_t i = 0; i < s.scales(); ++i)
        if (s.name(i) == e)
          for (auto [x, y] : s.probe(i).upper_pairs())
            if (q.projection(x) == q.projection(y)) same = false;
    }
    implication("properly discontinuous implies transverse", r.properly_discontinuous.is_yes(),
                p.condition3b.is_yes() && same);
  }
  implication("equicontinuous implies neutral", r.equicontinuous.is_yes(), r.neutral.is_yes());
  implication("ssbo implies ssue", r.ssbo.is_yes(), r.ssue.is_yes());
  implication("ssue implies ssuc", r.ssue.is_yes(), r.ssuc.is_yes());
  implication("ssbo implies approximate uniqueness", r.ssbo.is_yes(), p.approximate_uniqueness.is_yes());
  implication("ssue, chain connected and approximate uniqueness imply ssbo",
              r.ssue.is_yes() && cc && p.approximate_uniqueness.is_yes(), r.ssbo.is_yes());
  implication("faithful, Hausdorff and ssbo imply free", faithful && r.hausdorff.is_yes() && r.ssbo.is_yes(),
              r.free.is_yes());
  implication("neutral and properly discontinuous imply uniform covering",
              r.neutral.is_yes() && r.properly_discontinuous.is_yes(), uc);
  implication("discrete implies uniform covering", r.discrete.is_yes(), uc);
  implication("pro-discrete implies covering class", r.pro_discrete.is_yes(), covering_class);
  equivalence("uniform covering iff neutral and transverse", uc, r.neutral.is_yes() && p.condition3b.is_yes());
  implication("unique lifts, faithful, ssuc, chain connected imply properly discontinuous",
              p.uniqueness.is_yes() && faithful && r.ssuc.is_yes() && cc, r.properly_discontinuous.is_yes());
  if (cc && faithful)
    equivalence("ssuc and uniform covering iff neutral and properly discontinuous", r.ssuc.is_yes() && uc,
                r.neutral.is_yes() && r.properly_discontinuous.is_yes());
  else
    t.checks.push_back({"ssuc and uniform covering iff neutral and properly discontinuous", "skipped", {}});
  return t;
}

}  // namespace ucl
