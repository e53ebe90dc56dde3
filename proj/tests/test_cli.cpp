// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "ucl/io.hpp"
#include "ucl/suite.hpp"

using namespace ucl;
namespace fs = std::filesystem;

namespace {

const fs::path data = UCL_TEST_DATA;

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  Run r;
  std::string cmd = std::string(UCL_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("ucl_cli_" + std::to_string(::getpid())) / name;
  fs::create_directories(d.parent_path());
  return d;
}

std::string arg(const fs::path& p) { return "'" + p.string() + "'"; }

// Every chain of the finest target entry (at most `len` points) from f(x)
// has exactly one lift from x along the finest source entry.
bool oracle_unique_lifts(const UniformMap& f, std::size_t len) {
  const Relation& ex = f.source->finest();
  const Relation& ey = f.target->finest();
  const int nx = int(f.source->size()), ny = int(f.target->size());
  std::function<std::size_t(int, const std::vector<int>&, std::size_t)> lifts = [&](int at, const std::vector<int>& ys,
                                                                                    std::size_t k) -> std::size_t {
    if (k == ys.size()) return 1;
    std::size_t c = 0;
    for (int b = 0; b < nx; ++b)
      if (ex.contains(at, b) && f(b) == ys[k]) c += lifts(b, ys, k + 1);
    return c;
  };
  std::function<bool(int, std::vector<int>&)> all = [&](int x0, std::vector<int>& ys) {
    if (lifts(x0, ys, 1) != 1) return false;
    if (ys.size() >= len) return true;
    for (int y = 0; y < ny; ++y)
      if (ey.contains(ys.back(), y)) {
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

// Closure of the generators, independent of GroupAction's tables.
std::set<Perm> oracle_group(const std::vector<Perm>& gens) {
  Perm id(gens.at(0).size());
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> g{id};
  std::vector<Perm> queue{id};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& s : gens) {
      Perm q(id.size());
      for (std::size_t x = 0; x < q.size(); ++x) q[x] = s[std::size_t(queue[h][x])];
      if (g.insert(q).second) queue.push_back(q);
    }
  return g;
}

bool preserves(const Perm& g, const Relation& from, const Relation& into) {
  for (auto [a, b] : from.pairs())
    if (!into.contains(g[std::size_t(a)], g[std::size_t(b)])) return false;
  return true;
}

}  // namespace

TEST(Golden, HexagonOntoTriangle) {
  auto r = cli("check-cover --map " + arg(data / "c6_c3/map.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out), read_json(data / "c6_c3/expected.json"));
  EXPECT_TRUE(oracle_unique_lifts(load_map(data / "c6_c3/map.json"), 8));
}

TEST(Golden, AntipodalIsDiscreteWithCoveringQuotient) {
  auto r = cli("classify-action --action " + arg(data / "antipodal/action.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j, read_json(data / "antipodal/expected.json"));
  EXPECT_EQ(j["action"]["discrete"]["status"], "yes");
  EXPECT_EQ(j["projection_class"], "uniform-covering");

  // Brute force: isometric, and t moves every point out of its d<=1 ball.
  auto a = load_action(data / "antipodal/action.json");
  const Relation& e = a.space().finest();
  for (const auto& g : oracle_group(a.generators())) {
    EXPECT_TRUE(preserves(g, e, e));
    bool identity = true;
    for (std::size_t x = 0; x < g.size(); ++x) identity &= g[x] == int(x);
    for (std::size_t x = 0; x < g.size() && !identity; ++x) EXPECT_FALSE(e.contains(int(x), g[x]));
  }
  auto q = scratch("antipodal_map.json");
  ASSERT_EQ(cli("quotient --action " + arg(data / "antipodal/action.json") + " --map " + arg(q)).code, 0);
  EXPECT_TRUE(oracle_unique_lifts(load_map(q), 8));
}

TEST(Golden, RotationIsNeither) {
  auto r = cli("classify-action --action " + arg(data / "rotation/action.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j, read_json(data / "rotation/expected.json"));
  EXPECT_EQ(j["projection_class"], "neither");
  const auto& au = j["projection"]["approximate_uniqueness"];
  ASSERT_EQ(au["status"], "no");
  auto chains = au["counterexample"]["chains"].get<std::vector<std::vector<int>>>();
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(chains[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(chains[1], (std::vector<int>{0, 5}));

  // Both are d<=1 chains from one point over the same image (X/G is a
  // point), and their ends lie at hop distance 2.
  auto a = load_action(data / "rotation/action.json");
  const Relation& e = a.space().finest();
  for (const auto& c : chains) EXPECT_TRUE(is_chain(e, c));
  EXPECT_FALSE(e.contains(chains[0].back(), chains[1].back()));
  auto q = scratch("rotation_map.json");
  ASSERT_EQ(cli("quotient --action " + arg(data / "rotation/action.json") + " --map " + arg(q)).code, 0);
  EXPECT_FALSE(oracle_unique_lifts(load_map(q), 4));
  EXPECT_EQ(cli("check-cover --map " + arg(q) + " --report " + arg(scratch("rotation_report.json"))).code, 4);
}

TEST(Golden, TruncatedFreeGroupAction) {
  auto r = cli("classify-action --action " + arg(data / "truncated/action.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j, read_json(data / "truncated/expected.json"));
  EXPECT_EQ(j["action"]["small_scale_uniformly_equicontinuous"]["status"], "yes");
  EXPECT_EQ(j["action"]["equicontinuous"]["status"], "no");
  EXPECT_EQ(j["projection_class"], "generalized-uniform-covering");

  // Brute force on the strict chain: equicontinuity needs g(E_m) in E_m for
  // every g; ssue only for g in G_{E_m}, generated by the g that move some
  // point inside E_m.
  auto a = load_action(data / "truncated/action.json");
  const Relation& em = a.space().finest();
  auto group = oracle_group(a.generators());
  bool equi = true;
  for (const auto& g : group) equi &= preserves(g, em, em);
  EXPECT_FALSE(equi);
  std::vector<Perm> s_f;
  for (const auto& g : group)
    for (std::size_t x = 0; x < g.size(); ++x)
      if (em.contains(int(x), g[x])) {
        s_f.push_back(g);
        break;
      }
  for (const auto& g : oracle_group(s_f)) EXPECT_TRUE(preserves(g, em, em));

  auto q = scratch("truncated_map.json");
  ASSERT_EQ(cli("quotient --action " + arg(data / "truncated/action.json") + " --map " + arg(q)).code, 0);
  EXPECT_EQ(cli("check-cover --map " + arg(q) + " --report " + arg(scratch("truncated_report.json"))).code, 3);

  auto gp = cli("gp --space " + arg(data / "truncated/space.json"));
  ASSERT_EQ(gp.code, 0);
  EXPECT_EQ(json::parse(gp.out), read_json(data / "truncated/gp_expected.json"));
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(cli("check-cover --map " + arg(data / "missing.json")).code, 2);
  auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(cli("check-cover --map " + arg(bad)).code, 2);
  auto nonsym = scratch("nonsym.json");
  std::ofstream(nonsym) << R"({"points":["a","b"],"entourages":[{"name":"E","pairs":[[0,1]]}],"mode":"strict",)"
                        << R"("symmetric":false})";
  auto m = scratch("nonsym_map.json");
  std::ofstream(m) << R"({"source":)" << json(nonsym.string()) << R"(,"target":)" << json(nonsym.string())
                   << R"(,"values":[0,5]})";
  EXPECT_EQ(cli("check-cover --map " + arg(m)).code, 2);
  EXPECT_EQ(cli("verify --suite nope").code, 2);
  EXPECT_EQ(cli("rips --space " + arg(data / "c6_c3/c6.json") + " --scale E9").code, 2);
  EXPECT_EQ(cli("").code, 2);
}

TEST(Cli, RipsH1AndTower) {
  auto r = cli("rips --space " + arg(data / "c6_c3/c6.json") + " --scale 'd<=1' --dmax 2");
  ASSERT_EQ(r.code, 0);
  auto k = json::parse(r.out);
  EXPECT_EQ(k["vertices"], 6);
  EXPECT_EQ(k["simplices"].size(), 12u);  // 6 vertices, 6 edges, no triangles

  auto h = json::parse(cli("h1 --space " + arg(data / "c6_c3/c6.json")).out);
  EXPECT_EQ(h["levels"][0]["h1"]["free_rank"], 1);

  auto dir = scratch("tower");
  ASSERT_EQ(cli("gen --family solenoid-tower --out " + arg(dir)).code, 0);
  auto p = cli("pi1 --tower " + arg(dir / "tower.json") + " --mode abelian");
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(json::parse(p.out)["summary"], "Z <-x2- Z <-x2- Z");
  auto pres = json::parse(cli("pi1 --tower " + arg(dir / "tower.json") + " --mode pres --max-cosets 1000").out);
  EXPECT_EQ(pres["levels"][0]["presentation"]["generators"], 1);
}

TEST(Cli, VerifyIsDeterministic) {
  auto a = cli("verify --suite covering --count 24 --seed 3");
  auto b = cli("verify --suite covering --count 24 --seed 3 --threads 1");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
  auto j = json::parse(a.out);
  EXPECT_EQ(a.code, j["all_pass"].get<bool>() ? 0 : 1);
  auto ids = j["instances"];
  for (std::size_t i = 1; i < ids.size(); ++i) EXPECT_LT(ids[i - 1]["id"], ids[i]["id"]);
}

TEST(Suite, CertificatesReplayToFailures) {
  auto rep = run_suite("all", 40, 7);
  std::size_t replayed = 0;
  const json props = rep.to_json()["propositions"];
  for (const auto& [name, row] : props.items()) {
    if (!row.contains("certificates")) continue;
    for (const auto& c : row["certificates"]) {
      const auto& r = c["replay"];
      auto in = replay_instance(r["suite"], r["seed"], r["index"]);
      InstanceResult again;
      if (r["suite"] == "covering")
        detail::run_covering(in, again, {});
      else if (r["suite"] == "actions")
        detail::run_actions(in, again, {});
      else
        detail::run_convergence(in, again, {});
      bool failed = false;
      for (const auto& o : again.outcomes) failed |= o.proposition == name && o.status == "fail";
      EXPECT_TRUE(failed) << name << " " << c["instance"];
      ++replayed;
    }
  }
  EXPECT_EQ(replayed > 0, rep.any_fail());
}
