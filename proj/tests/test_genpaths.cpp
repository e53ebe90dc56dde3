// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ucl/covering.hpp"
#include "ucl/genpaths.hpp"
#include "ucl/metric.hpp"

using namespace ucl;

namespace {

Space full_space(std::size_t n, Mode mode = Mode::scale) {
  RawSpace raw;
  for (std::size_t i = 0; i < n; ++i) raw.points.push_back(std::to_string(i));
  raw.entries = {{"X", Relation::full(n)}};
  raw.mode = mode;
  return validate_space(raw);
}

std::shared_ptr<const Space> cycle(std::size_t n) { return std::make_shared<Space>(cycle_space(n, {1})); }

Tower dyadic(std::size_t levels) {
  Tower t;
  for (std::size_t k = 0; k < levels; ++k) t.levels.push_back(cycle(6u << k));
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    std::vector<int> v(t.levels[k + 1]->size());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = int(x % t.levels[k]->size());
    t.bonds.emplace_back(t.levels[k + 1], t.levels[k], v);
  }
  return t;
}

}  // namespace

TEST(GPSpace, FullRelationIsOneClassPerPoint) {
  auto s = full_space(5);
  auto gp = gp_space(s);
  EXPECT_FALSE(gp.partial);
  EXPECT_EQ(gp.group_order, 1u);
  ASSERT_EQ(gp.classes.size(), 5u);
  ASSERT_EQ(gp.entries.size(), 1u);
  EXPECT_EQ(gp.entries[0].rel, Relation::full(5));
}

TEST(GPSpace, HexagonIsPartialLine) {
  auto s = cycle_space(6, {1});
  GPOptions opt;
  opt.radius = 5;
  auto gp = gp_space(s, Budgets{10000, 2000}, opt);
  EXPECT_TRUE(gp.partial);
  EXPECT_EQ(gp.radius, 5u);
  // The universal cover is a line: 2r + 1 vertices within radius r.
  EXPECT_EQ(gp.classes.size(), 11u);
  EXPECT_TRUE(gp.entries.empty());
  for (const auto& c : gp.classes) EXPECT_TRUE(is_chain(s.finest(), c.chain));
}

TEST(GPSpace, OctahedronIsSimplyConnected) {
  auto s = cycle_space(6, {3, 2});
  auto gp = gp_space(s);
  EXPECT_FALSE(gp.partial);
  EXPECT_EQ(gp.group_order, 1u);
  EXPECT_EQ(gp.classes.size(), 6u);
  ASSERT_EQ(gp.entries.size(), 2u);
  // Simply connected: E* is E transported along the endpoint bijection.
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      EXPECT_EQ(gp.entries[1].rel.contains(int(a), int(b)),
                s.entry(1).contains(gp.classes[a].endpoint, gp.classes[b].endpoint));
}

TEST(GPSpace, EntouragesMatchExhaustiveMoves) {
  std::mt19937 rng(31);
  int complete = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    Relation adj = Relation::diagonal(n);
    for (std::size_t k = 1; k < n; ++k) adj.set_sym(int(k), int(rng() % k));
    for (std::size_t k = 0; k < n; ++k) adj.set_sym(int(rng() % n), int(rng() % n));
    auto d = hop_distances(adj);
    double diam = 0;
    for (auto& row : d)
      for (double v : row) diam = std::max(diam, v);
    auto x = std::make_shared<Space>(graph_space(adj, diam > 1 ? std::vector<double>{2, 1} : std::vector<double>{1}));
    auto gp = gp_space(*x, Budgets{10000, 500});
    for (const auto& c : gp.classes) EXPECT_TRUE(is_chain(x->finest(), c.chain));
    if (gp.partial) continue;
    ++complete;
    EXPECT_EQ(gp.classes.size(), x->size() * gp.group_order);
    for (std::size_t i = 0; i < x->scales(); ++i) {
      const Relation& e = x->entry(i);
      for (std::size_t a = 0; a < gp.classes.size(); ++a)
        for (std::size_t b = 0; b < gp.classes.size(); ++b) {
          const auto& ca = gp.classes[a].chain;
          const auto& cb = gp.classes[b].chain;
          bool expect = false;
          if (e.contains(ca.back(), cb.back())) {
            std::vector<int> loop(ca.rbegin(), ca.rend());
            loop.insert(loop.end(), cb.begin() + 1, cb.end());
            std::vector<int> edge{ca.back()};
            if (cb.back() != ca.back()) edge.push_back(cb.back());
            auto o = oracle::reachable_by_moves(e, loop, edge, 12);
            ASSERT_TRUE(o.has_value());
            expect = *o;
          }
          EXPECT_EQ(gp.entries[i].rel.contains(int(a), int(b)), expect) << "trial " << trial;
        }
    }
    if (is_chain_connected(*x).is_yes()) {
      auto p = endpoint_map(gp, x);
      EXPECT_TRUE(check_chain_lifting(p).is_yes()) << "trial " << trial;
    }
  }
  EXPECT_GE(complete, 15);
}

TEST(UniformPi1, FullRelationIsTrivial) {
  auto p = uniform_pi1(full_space(4));
  ASSERT_EQ(p.levels.size(), 1u);
  EXPECT_TRUE(p.levels[0].h1.trivial());
}

TEST(UniformPi1, HexagonScales) {
  auto p = uniform_pi1(cycle_space(6, {2, 1}), Pi1Mode::presentation);
  ASSERT_EQ(p.levels.size(), 2u);
  EXPECT_TRUE(p.levels[0].h1.trivial());
  EXPECT_EQ(p.levels[1].h1.free_rank, 1);
  EXPECT_EQ(p.levels[1].group.reduced.pres.generators, 1);
  EXPECT_TRUE(p.levels[1].group.reduced.pres.relators.empty());
  ASSERT_EQ(p.bonds.size(), 1u);
  EXPECT_TRUE(p.bonds[0].homomorphism.is_yes());
  EXPECT_EQ(p.bonds[0].free_matrix, IntMatrix{std::vector<Int>{}});
}

TEST(UniformPi1, DyadicTower) {
  auto p = uniform_pi1(dyadic(3));
  ASSERT_EQ(p.bonds.size(), 2u);
  for (const auto& b : p.bonds) {
    EXPECT_TRUE(b.homomorphism.is_yes());
    EXPECT_EQ(b.free_matrix, (IntMatrix{{2}}));
  }
  EXPECT_EQ(p.describe(), "Z <-x2- Z <-x2- Z");
}

TEST(UniformPi1, BondMatricesCompose) {
  auto t = dyadic(3);
  auto p = uniform_pi1(t);
  std::vector<int> v(t.levels[2]->size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = int(x % 6);
  Tower direct{{t.levels[0], t.levels[2]}, {UniformMap(t.levels[2], t.levels[0], v)}};
  auto q = uniform_pi1(direct);
  auto product = multiply(p.bonds[1].free_matrix, p.bonds[0].free_matrix, 1);
  EXPECT_EQ(q.bonds[0].free_matrix, product);
  EXPECT_EQ(product, (IntMatrix{{4}}));
}

TEST(UniformPi1, RejectsBrokenTowers) {
  auto t = dyadic(2);
  t.bonds.clear();
  EXPECT_THROW(uniform_pi1(t), std::invalid_argument);
}

TEST(ConstantGP, Examples) {
  EXPECT_TRUE(verify_constant_gp(full_space(3, Mode::strict)).is_no());
  EXPECT_TRUE(verify_constant_gp(full_space(1, Mode::strict)).is_yes());
  RawSpace raw;
  raw.points = {"a", "b", "c", "d"};
  raw.mode = Mode::strict;
  raw.entries = {{"E1", Relation::from_pairs(4, std::vector<Pair>{{0, 1}, {2, 3}})}, {"E2", Relation::diagonal(4)}};
  EXPECT_TRUE(verify_constant_gp(validate_space(raw)).is_yes());
  EXPECT_THROW(verify_constant_gp(cycle_space(6, {1})), std::invalid_argument);
}
