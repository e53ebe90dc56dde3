// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <tuple>
#include <random>

#include "ucl/covering.hpp"
#include "ucl/metric.hpp"

using namespace ucl;

namespace {

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr make(std::vector<Relation> rels, Mode mode = Mode::scale) {
  RawSpace raw;
  for (std::size_t i = 0; i < rels[0].points(); ++i) raw.points.push_back(std::to_string(i));
  for (std::size_t i = 0; i < rels.size(); ++i) raw.entries.push_back({"E" + std::to_string(i + 1), rels[i]});
  raw.mode = mode;
  return std::make_shared<Space>(validate_space(raw));
}

// [d<=2, d<=1] on a graph, or just [d<=1] when the graph has diameter 1.
SpacePtr two_scales(const Relation& adj) {
  auto d = hop_distances(adj);
  bool far = false;
  for (auto& row : d)
    for (double v : row) far |= v > 1;
  return std::make_shared<Space>(graph_space(adj, far ? std::vector<double>{2, 1} : std::vector<double>{1}));
}

SpacePtr point() { return make({Relation::diagonal(1)}); }

// Target whose entries are the images of the source entries, so f always
// generates the structure.
UniformMap onto_images(SpacePtr x, std::vector<int> values, std::size_t m) {
  std::vector<Relation> rels;
  for (std::size_t i = 0; i < x->scales(); ++i) {
    Relation r = image(x->entry(i), values, m);
    if (rels.empty() || !(rels.back() == r)) rels.push_back(r);
  }
  return UniformMap(x, make(rels), std::move(values));
}

// Literal enumeration of chains: every f(F)-chain in Y of at most `len`
// points, from each f(x), must have an E-lift starting at x.
bool oracle_lifts(const UniformMap& f, std::size_t e, std::size_t fi, std::size_t len) {
  const Space& x = *f.source;
  Relation img = f.image_of_entry(fi);
  const int ny = int(f.target->size()), nx = int(x.size());
  std::function<bool(int, const std::vector<int>&, std::size_t)> has_lift =
      [&](int at, const std::vector<int>& ys, std::size_t k) {
        if (k == ys.size()) return true;
        for (int b = 0; b < nx; ++b)
          if (x.entry(e).contains(at, b) && f(b) == ys[k] && has_lift(b, ys, k + 1)) return true;
        return false;
      };
  std::function<bool(int, std::vector<int>&)> all = [&](int x0, std::vector<int>& ys) {
    if (!has_lift(x0, ys, 1)) return false;
    if (ys.size() >= len) return true;
    for (int y = 0; y < ny; ++y)
      if (img.contains(ys.back(), y)) {
        ys.push_back(y);
        bool ok = all(x0, ys);
        ys.pop_back();
        if (!ok) return false;
      }
    return true;
  };
  for (int x0 = 0; x0 < nx; ++x0) {
    std::vector<int> ys{f(x0)};
    if (!all(x0, ys)) return false;
  }
  return true;
}

// Literal enumeration of pairs of F-chains from one point with identical
// images; true if all stay E-close (pointwise).
bool oracle_close(const UniformMap& f, const Relation& e, const Relation& fr, std::size_t len) {
  const int n = int(f.source->size());
  // Memo over (a, b, k): same answer for every pair of prefixes ending there.
  std::map<std::tuple<int, int, std::size_t>, bool> memo;
  std::function<bool(int, int, std::size_t)> walk = [&](int a, int b, std::size_t k) {
    if (!e.contains(a, b)) return false;
    if (k >= len) return true;
    auto key = std::tuple{a, b, k};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = true;
    for (int a2 = 0; a2 < n; ++a2)
      for (int b2 = 0; b2 < n; ++b2)
        if (ok && fr.contains(a, a2) && fr.contains(b, b2) && f(a2) == f(b2) && !walk(a2, b2, k + 1)) ok = false;
    return memo[key] = ok;
  };
  for (int x0 = 0; x0 < n; ++x0)
    if (!walk(x0, x0, 1)) return false;
  return true;
}

}  // namespace

TEST(Covering, HexagonOntoTriangle) {
  auto c6 = std::make_shared<Space>(cycle_space(6, {1}));
  auto c3 = std::make_shared<Space>(cycle_space(3, {1}));
  UniformMap f(c6, c3, {0, 1, 2, 0, 1, 2});
  auto r = classify_map(f);
  EXPECT_EQ(r.overall, CoverClass::uniform_covering);
  EXPECT_TRUE(r.condition1.is_yes());
  EXPECT_TRUE(r.condition3a.is_yes());
  EXPECT_EQ(r.condition3a.witness["d<=1"], "d<=1");
  EXPECT_TRUE(r.condition3b.is_yes());
  EXPECT_TRUE(r.condition4.is_yes());
  EXPECT_TRUE(r.approximate_uniqueness.is_yes());
  // The hexagon maps onto the filled triangle, whose vertex stars contain
  // the 2-simplex; a star isomorphism is impossible.
  EXPECT_TRUE(r.condition2.is_no());
  EXPECT_TRUE(r.exact_conditions_agree());
  ASSERT_TRUE(r.self_check);
  EXPECT_TRUE(r.self_check->lifting_agrees);
  EXPECT_TRUE(r.self_check->uniqueness_agrees);
}

TEST(Covering, IdentityIsAlwaysUniformCovering) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 8;
    Relation adj = Relation::diagonal(n);
    for (std::size_t k = 1; k < n; ++k) adj.set_sym(int(k), int(rng() % k));
    auto s = two_scales(adj);
    auto r = classify_map(identity_map(s));
    EXPECT_EQ(r.overall, CoverClass::uniform_covering);
    EXPECT_TRUE(r.condition2.is_yes());
  }
}

TEST(Covering, CollapsingPathThree) {
  auto p3 = std::make_shared<Space>(graph_space(path_graph(3), {1}));
  auto p2 = std::make_shared<Space>(graph_space(path_graph(2), {1}));
  UniformMap f(p3, p2, {0, 1, 0});
  auto c1 = check_ball_bijectivity(f);
  ASSERT_TRUE(c1.is_no());
  EXPECT_EQ(c1.counterexample["point"], 1);
  EXPECT_EQ(c1.counterexample["ball"], json({0, 1, 2}));
  auto c4 = check_unique_chain_lifting(f);
  EXPECT_TRUE(c4.is_no());
  auto au = check_approx_uniqueness(f);
  ASSERT_TRUE(au.is_no());
  EXPECT_EQ(au.counterexample["state"], json({0, 2}));
  auto chains = au.counterexample["chains"];
  EXPECT_EQ(f.apply(chains[0].get<std::vector<int>>()), f.apply(chains[1].get<std::vector<int>>()));
  EXPECT_EQ(chains[0][0], chains[1][0]);
  EXPECT_EQ(classify_map(f).overall, CoverClass::neither);
}

TEST(Covering, ConstantMapHasNoStarIsomorphism) {
  auto c3 = std::make_shared<Space>(cycle_space(3, {1}));
  UniformMap f(c3, point(), {0, 0, 0});
  EXPECT_TRUE(check_simplicial_cover(f).is_no());
}

TEST(Covering, CloseFibrePointsAreNotTransverse) {
  auto two = make({Relation::full(2)});
  UniformMap f(two, point(), {0, 0});
  auto v = check_transverse(f);
  ASSERT_TRUE(v.is_no());
  EXPECT_EQ(v.counterexample["pair"], json({0, 1}));
  auto d = make({Relation::full(2), Relation::diagonal(2)}, Mode::strict);
  EXPECT_EQ(check_transverse(UniformMap(d, point(), {0, 0})).witness["E0"], "E2");
}

TEST(Covering, RotationQuotientIsNeither) {
  auto c6 = std::make_shared<Space>(cycle_space(6, {1}));
  UniformMap f(c6, point(), std::vector<int>(6, 0));
  auto r = classify_map(f);
  EXPECT_EQ(r.overall, CoverClass::neither);
  ASSERT_TRUE(r.approximate_uniqueness.is_no());
  auto c = r.approximate_uniqueness.counterexample["chains"];
  EXPECT_TRUE(is_chain(c6->entry(0), c[0].get<std::vector<int>>()));
  EXPECT_TRUE(is_chain(c6->entry(0), c[1].get<std::vector<int>>()));
  EXPECT_FALSE(c6->entry(0).contains(c[0].back(), c[1].back()));
}

TEST(Covering, EdgeLevelVerdictsMatchChainEnumeration) {
  std::mt19937 rng(101);
  int generalized_only = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 3 + rng() % 4, m = 1 + rng() % 3;
    Relation adj = Relation::diagonal(n);
    for (std::size_t k = 1; k < n; ++k) adj.set_sym(int(k), int(rng() % k));
    for (std::size_t k = 0; k < n / 2; ++k) adj.set_sym(int(rng() % n), int(rng() % n));
    auto x = two_scales(adj);
    std::vector<int> v(n);
    for (auto& y : v) y = int(rng() % m);
    for (std::size_t y = 0; y < m; ++y) v[y % n] = int(y);  // onto
    auto f = onto_images(x, v, m);
    auto r = classify_map(f);
    ASSERT_TRUE(r.generates.is_yes());
    EXPECT_TRUE(r.exact_conditions_agree()) << "trial " << trial;

    bool lift = true;
    for (std::size_t e = 0; e < x->scales() && lift; ++e) {
      bool some = false;
      for (std::size_t fi = 0; fi < x->scales() && !some; ++fi) some = oracle_lifts(f, e, fi, 6);
      lift = some;
    }
    EXPECT_EQ(lift, r.condition3a.is_yes()) << "trial " << trial;

    bool unique = false;
    for (std::size_t fi = 0; fi < x->scales() && !unique; ++fi)
      unique = oracle_close(f, Relation::diagonal(n), x->entry(fi), 6);
    EXPECT_EQ(unique, r.uniqueness.is_yes()) << "trial " << trial;

    bool approx = true;
    for (std::size_t e = 0; e < x->scales() && approx; ++e) {
      bool some = false;
      for (std::size_t fi = 0; fi < x->scales() && !some; ++fi) some = oracle_close(f, x->entry(e), x->entry(fi), 8);
      approx = some;
    }
    EXPECT_EQ(approx, r.approximate_uniqueness.is_yes()) << "trial " << trial;
    if (r.uniqueness.is_yes()) {
      EXPECT_TRUE(r.approximate_uniqueness.is_yes());
    }
    if (r.overall == CoverClass::generalized_covering) ++generalized_only;
    ASSERT_TRUE(r.self_check);
    EXPECT_TRUE(r.self_check->lifting_agrees && r.self_check->uniqueness_agrees) << "trial " << trial;
  }
  EXPECT_GT(generalized_only, 0);
}
