// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "ucl/convergence.hpp"
#include "ucl/metric.hpp"

using namespace ucl;

namespace {

std::shared_ptr<const Space> cycle(std::size_t n, std::vector<double> radii = {1}) {
  return std::make_shared<Space>(cycle_space(n, radii));
}

Perm rotation(std::size_t n, int k) {
  Perm p(n);
  for (std::size_t x = 0; x < n; ++x) p[x] = int((x + std::size_t(k)) % n);
  return p;
}

Perm reflection(std::size_t n) {
  Perm p(n);
  for (std::size_t x = 0; x < n; ++x) p[x] = int((n - x) % n);
  return p;
}

// Nested partitions refined at random: a strict chain.
std::shared_ptr<const Space> random_strict(std::size_t n, std::size_t levels, std::mt19937& rng) {
  std::vector<int> block(n, 0);
  RawSpace raw;
  for (std::size_t i = 0; i < n; ++i) raw.points.push_back(std::to_string(i));
  raw.mode = Mode::strict;
  for (std::size_t l = 0; l < levels; ++l) {
    Relation r(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (block[a] == block[b]) r.set(int(a), int(b));
    if (raw.entries.empty() || !(raw.entries.back().rel == r)) raw.entries.push_back({"E" + std::to_string(l + 1), r});
    for (std::size_t a = 0; a < n; ++a)
      if (rng() % 3 == 0) block[a] = block[a] * 7 + int(l) + 1;
  }
  return std::make_shared<Space>(validate_space(raw));
}

Perm random_involution(std::size_t n, std::mt19937& rng) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t k = 0; k < n / 2; ++k) {
    int a = int(rng() % n), b = int(rng() % n);
    if (p[std::size_t(a)] == a && p[std::size_t(b)] == b) std::swap(p[std::size_t(a)], p[std::size_t(b)]);
  }
  return p;
}

// Listed X^G, built independently of make_carrier.
std::vector<Fn> all_functions(std::size_t n, std::size_t g) {
  std::vector<Fn> out{{}};
  for (std::size_t k = 0; k < g; ++k) {
    std::vector<Fn> next;
    for (const auto& u : out)
      for (std::size_t x = 0; x < n; ++x) {
        next.push_back(u);
        next.back().push_back(int(x));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST(FnStructures, TrivialGroupKindsCoincide) {
  GroupAction a(cycle(6, {2, 1}), {});
  auto u = build_fn_structure(a, FnKind::uniform);
  auto p = build_fn_structure(a, FnKind::pointwise);
  auto s = build_fn_structure(a, FnKind::small_scale);
  EXPECT_EQ(u.carrier.functions.size(), 6u);
  EXPECT_EQ(compare(a.space(), u, p).relation, Refinement::equal);
  EXPECT_EQ(compare(a.space(), u, s).relation, Refinement::equal);
  EXPECT_TRUE(phi_uniformly_continuous(a, u).is_yes());
}

TEST(FnStructures, FiniteGroupUniformEqualsPointwise) {
  GroupAction a(cycle(6), {rotation(6, 1)});
  auto u = build_fn_structure(a, FnKind::uniform);
  auto p = build_fn_structure(a, FnKind::pointwise);
  EXPECT_TRUE(u.carrier.full);
  EXPECT_EQ(compare(a.space(), u, p).relation, Refinement::equal);
}

TEST(FnStructures, AntipodalSmallScaleIsStrictlyCoarser) {
  GroupAction a(cycle(6), {rotation(6, 3)});
  auto u = build_fn_structure(a, FnKind::uniform);
  auto s = build_fn_structure(a, FnKind::small_scale);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].coords, std::vector<std::size_t>{0});
  EXPECT_EQ(u.carrier.functions.size(), 36u);
  EXPECT_EQ(compare(a.space(), u, s).relation, Refinement::finer);
}

TEST(FnStructures, CoordinatewiseSubsetMatchesEnumeration) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng() % 3;
    auto sp = random_strict(n, 3, rng);
    GroupAction a(sp, {random_involution(n, rng)});
    const auto listed = all_functions(n, a.order());
    for (FnKind k : {FnKind::uniform, FnKind::pointwise, FnKind::small_scale}) {
      auto st = build_fn_structure(a, k);
      ASSERT_TRUE(st.carrier.full);
      ASSERT_EQ(st.carrier.functions.size(), listed.size());
      for (const auto& x : st.entries)
        for (const auto& y : st.entries) {
          bool brute = true;
          for (const auto& u : listed)
            for (const auto& v : listed)
              if (fn_contains(*sp, x, u, v) && !fn_contains(*sp, y, u, v)) brute = false;
          EXPECT_EQ(fn_subset(*sp, st.carrier, x, y), brute) << x.name << " in " << y.name;
        }
    }
  }
}

TEST(FnStructures, LargePowersFallBackToImageOfPhi) {
  GroupAction a(cycle(12), {rotation(12, 1)});
  auto st = build_fn_structure(a, FnKind::uniform);
  EXPECT_FALSE(st.carrier.full);
  EXPECT_EQ(st.carrier.functions.size(), 12u);
  EXPECT_EQ(st.carrier.functions[3], phi(a, 3));
}

TEST(Phi, RotationIsEquicontinuous) {
  GroupAction a(cycle(6), {rotation(6, 1)});
  EXPECT_TRUE(phi_uniformly_continuous(a, build_fn_structure(a, FnKind::uniform)).is_yes());
  EXPECT_TRUE(phi_uniformly_continuous(a, build_fn_structure(a, FnKind::pointwise)).is_yes());
}

TEST(GroupStructures, Antipodal) {
  GroupAction a(cycle(6), {rotation(6, 3)});
  auto [star, bar] = build_group_structures(a);
  EXPECT_EQ(star.entries[0].rel, Relation::diagonal(2));
  EXPECT_EQ(bar.entries[0].rel, Relation::diagonal(2));
  EXPECT_TRUE(is_discrete(star).is_yes());
  EXPECT_EQ(compare(star, star).relation, Refinement::equal);
  EXPECT_EQ(classify_map(orbit_space(a).projection).overall, CoverClass::uniform_covering);
}

TEST(GroupStructures, RotationIsNotDiscrete) {
  GroupAction a(cycle(6), {rotation(6, 1)});
  auto [star, bar] = build_group_structures(a);
  auto r = *a.find(rotation(6, 1));
  EXPECT_TRUE(star.entries[0].rel.contains(0, int(r)));
  EXPECT_TRUE(bar.entries[0].rel.contains(0, int(r)));
  EXPECT_TRUE(is_discrete(star).is_no());
  auto c = compare(star, bar);
  // Star: |g - h| <= 1 in Z/6; bar: everything, since G_E = G.
  EXPECT_EQ(c.relation, Refinement::finer);
  EXPECT_NE(classify_map(orbit_space(a).projection).overall, CoverClass::uniform_covering);
}

TEST(GroupStructures, MatchDefinitionsByBruteForce) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng() % 5;
    auto sp = random_strict(n, 3, rng);
    GroupAction a(sp, {random_involution(n, rng), random_involution(n, rng)});
    auto [star, bar] = build_group_structures(a);
    for (std::size_t i = 0; i < sp->scales(); ++i) {
      std::set<Perm> sf;
      for (std::size_t g = 0; g < a.order(); ++g)
        for (std::size_t x = 0; x < n; ++x)
          if (sp->entry(i).contains(int(x), a.act(g, int(x)))) sf.insert(a.element(g));
      std::set<Perm> gf{a.element(0)};
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& u : std::set<Perm>(gf))
          for (const auto& v : sf) grew |= gf.insert(compose_perm(u, v)).second;
      }
      for (std::size_t g = 0; g < a.order(); ++g)
        for (std::size_t h = 0; h < a.order(); ++h) {
          bool all = true;
          for (std::size_t x = 0; x < n; ++x)
            all = all && sp->entry(i).contains(a.element(g)[x], a.element(h)[x]);
          EXPECT_EQ(star.entries[i].rel.contains(int(g), int(h)), all);
          const Perm q = compose_perm(a.element(g), invert_perm(a.element(h)));
          EXPECT_EQ(bar.entries[i].rel.contains(int(g), int(h)), gf.count(q) > 0);
        }
    }
  }
}

TEST(GroupStructures, CompareRejectsDifferentGroups) {
  GroupAction a(cycle(6), {rotation(6, 3)});
  GroupAction b(cycle(6), {rotation(6, 2)});
  EXPECT_THROW(compare(build_group_structures(a).first, build_group_structures(b).first), std::invalid_argument);
}

TEST(Corollaries, HoldOnCycleSymmetries) {
  for (std::size_t n = 4; n <= 9; ++n)
    for (int k = 1; k < int(n); ++k) {
      GroupAction rot(cycle(n), {rotation(n, k)});
      auto r = verify_convergence(rot);
      for (const auto& c : r.checks) EXPECT_NE(c.status, "fail") << n << " " << k << " " << c.name;
      GroupAction dih(cycle(n), {rotation(n, k), reflection(n)});
      auto d = verify_convergence(dih);
      for (const auto& c : d.checks) EXPECT_NE(c.status, "fail") << n << " " << k << " dihedral " << c.name;
    }
}

TEST(Corollaries, PhiChecksOnStrictChains) {
  std::mt19937 rng(21);
  int fired = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 3 + rng() % 7;
    auto sp = random_strict(n, 2 + rng() % 3, rng);
    GroupAction a(sp, {random_involution(n, rng)});
    auto r = verify_convergence(a);
    for (const auto& c : r.checks) {
      // Both have finite counterexamples, pinned below.
      if (c.name.rfind("neutral free", 0) == 0 || c.name == "ssue implies phi small-scale continuous") continue;
      EXPECT_NE(c.status, "fail") << "trial " << trial << ": " << c.name << " " << c.detail.dump();
      fired += c.status == "pass";
    }
  }
  EXPECT_GT(fired, 400);
}

TEST(Corollaries, ReflectionOfPathSeparatesDiscretenessFromCovering) {
  // Free isometric involution of P4 at d<=1: it moves 0 far and 1 a little,
  // so E* is the diagonal while (1, 2) collapses in the quotient.
  auto p4 = std::make_shared<Space>(graph_space(path_graph(4), {1}));
  GroupAction a(p4, {{3, 2, 1, 0}});
  auto r = verify_convergence(a);
  EXPECT_TRUE(r.action.neutral.is_yes());
  EXPECT_TRUE(r.action.free.is_yes());
  EXPECT_TRUE(r.star_discrete.is_yes());
  EXPECT_NE(r.projection.overall, CoverClass::uniform_covering);
}

TEST(Corollaries, SsueDoesNotForcePhiSmallScaleContinuity) {
  // Strict chain [{a,b,c}{d}, {a,b}{c}{d}] with g = (a d)(b c): g moves b
  // within E1 but nothing within E2, so G_E2 is trivial and ssue holds,
  // yet g sends the E2 pair (a, b) to (d, c), outside E1.
  RawSpace raw;
  raw.points = {"a", "b", "c", "d"};
  raw.mode = Mode::strict;
  raw.entries = {{"E1", Relation::from_pairs(4, std::vector<Pair>{{0, 1}, {0, 2}, {1, 2}})},
                 {"E2", Relation::from_pairs(4, std::vector<Pair>{{0, 1}})}};
  auto sp = std::make_shared<Space>(validate_space(raw));
  GroupAction a(sp, {{3, 2, 1, 0}});
  auto r = verify_convergence(a);
  EXPECT_TRUE(r.action.ssue.is_yes());
  ASSERT_TRUE(r.phi_small_scale.is_no());
  EXPECT_EQ(r.phi_small_scale.counterexample["entry"], "E1*ss");
  EXPECT_EQ(r.phi_small_scale.counterexample["pair"], json({0, 1}));
}
