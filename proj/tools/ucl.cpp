// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Reports are JSON; exit codes follow each verb's
// contract, with 2 reserved for unreadable or invalid input.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "ucl/convergence.hpp"
#include "ucl/covering.hpp"
#include "ucl/generators.hpp"
#include "ucl/genpaths.hpp"
#include "ucl/io.hpp"
#include "ucl/rips.hpp"
#include "ucl/suite.hpp"

using namespace ucl;

namespace {

constexpr int kInputError = 2;

void emit(const json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json(path, j);
}

/// Entry by name, or by index when the argument is numeric.
std::size_t scale_index(const Space& s, const std::string& arg) {
  for (std::size_t i = 0; i < s.scales(); ++i)
    if (s.name(i) == arg) return i;
  try {
    std::size_t pos = 0;
    const auto i = std::stoull(arg, &pos);
    if (pos == arg.size() && i < s.scales()) return i;
  } catch (const std::logic_error&) {
  }
  throw InputError("no entry named " + arg);
}

json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  if (text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("--params: ") + e.what());
    }
  }
  return read_json(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform coverings of finite chains of entourages"};
  app.require_subcommand(1);
  std::string report;
  int code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated instance to a directory");
  std::string family, params, out_dir;
  std::uint64_t seed = 7;
  bool list = false;
  gen->add_option("--family", family, "Instance family");
  gen->add_option("--params", params, "JSON object or file with family parameters");
  gen->add_option("--seed", seed, "Seed for randomized families");
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_flag("--list", list, "List families");
  gen->callback([&] {
    if (list) {
      for (const auto& f : families()) std::cout << f << '\n';
      return;
    }
    if (family.empty() || out_dir.empty()) throw InputError("gen needs --family and --out");
    auto in = generate(family, parse_params(params), seed);
    auto files = write_instance(out_dir, in);
    std::cout << json{{"id", in.id}, {"family", in.family}, {"params", in.params}, {"files", files}}.dump(2) << '\n';
  });

  // check-cover
  auto* cover = app.add_subcommand("check-cover", "Classify a uniform map");
  std::string map_path;
  ClassifyOptions copt;
  cover->add_option("--map", map_path, "Map file")->required();
  cover->add_option("--report", report, "Report file (default stdout)");
  cover->add_option("--dmax", copt.dmax, "Rips dimension for condition 2")->check(CLI::Range(1, 4));
  cover->callback([&] {
    auto rep = classify_map(load_map(map_path), copt);
    emit(rep.to_json(), report);
    if (!report.empty()) std::cout << to_string(rep.overall) << '\n';
    code = rep.overall == CoverClass::uniform_covering       ? 0
           : rep.overall == CoverClass::generalized_covering ? 3
                                                             : 4;
  });

  // classify-action
  auto* classify = app.add_subcommand("classify-action", "Classify a group action and check its theorems");
  std::string action_path;
  classify->add_option("--action", action_path, "Action file")->required();
  classify->add_option("--report", report, "Report file (default stdout)");
  classify->callback([&] { emit(verify_action_theorems(load_action(action_path)).to_json(), report); });

  // quotient
  auto* quotient = app.add_subcommand("quotient", "Orbit space and projection of an action");
  std::string q_out, q_map;
  quotient->add_option("--action", action_path, "Action file")->required();
  quotient->add_option("--out", q_out, "Write the quotient space here");
  quotient->add_option("--map", q_map, "Write the projection map here, with inline spaces");
  quotient->add_option("--report", report, "Report file (default stdout)");
  quotient->callback([&] {
    auto a = load_action(action_path);
    auto q = orbit_space(a);
    json space = space_to_json(*q.space);
    json proj{{"source", space_to_json(a.space())}, {"target", space}, {"values", q.projection.values}};
    if (!q_out.empty()) write_json(q_out, space);
    if (!q_map.empty()) write_json(q_map, proj);
    emit({{"space", space},
          {"orbits", q.orbits},
          {"downgraded", q.downgraded},
          {"projection", json{{"values", q.projection.values}}},
          {"class", std::string(to_string(classify_map(q.projection).overall))}},
         report);
  });

  // structures
  auto* structures = app.add_subcommand("structures", "Function-space and group structures of an action");
  structures->add_option("--action", action_path, "Action file")->required();
  structures->add_option("--report", report, "Report file (default stdout)");
  structures->callback([&] {
    auto a = load_action(action_path);
    emit(verify_convergence(a).to_json(a), report);
  });

  // rips
  auto* rips = app.add_subcommand("rips", "Rips complex of one entry");
  std::string space_path, scale_arg, rips_out;
  int dmax = 2;
  rips->add_option("--space", space_path, "Space file")->required();
  rips->add_option("--scale", scale_arg, "Entry name or index (default finest)");
  rips->add_option("--dmax", dmax, "Top simplex dimension")->check(CLI::Range(1, 6));
  rips->add_option("--out", rips_out, "Complex file (default stdout)");
  rips->callback([&] {
    auto s = load_space(space_path);
    const std::size_t i = scale_arg.empty() ? s.finest_index() : scale_index(s, scale_arg);
    auto k = RipsComplex::build(s, i, dmax);
    json j = k.to_json();
    j["scale"] = s.name(i);
    emit(j, rips_out);
  });

  // h1
  auto* h1cmd = app.add_subcommand("h1", "First homology of the Rips complexes");
  h1cmd->add_option("--space", space_path, "Space file")->required();
  h1cmd->add_option("--scale", scale_arg, "Entry name or index (default all)");
  h1cmd->add_option("--report", report, "Report file (default stdout)");
  h1cmd->callback([&] {
    auto s = load_space(space_path);
    json levels = json::array();
    for (std::size_t i = 0; i < s.scales(); ++i) {
      if (!scale_arg.empty() && i != scale_index(s, scale_arg)) continue;
      auto k = RipsComplex::build(s, i, 2);
      levels.push_back({{"scale", s.name(i)}, {"h1", to_json(h1(k))}});
    }
    emit({{"levels", levels}}, report);
  });

  // pi1
  auto* pi1 = app.add_subcommand("pi1", "Uniform fundamental pro-group of a space or tower");
  std::string tower_path, mode = "abelian";
  Budgets budgets = Budgets::from_env();
  pi1->add_option("--space", space_path, "Space file");
  pi1->add_option("--tower", tower_path, "Tower file");
  pi1->add_option("--mode", mode, "abelian or pres")->check(CLI::IsMember({"abelian", "pres"}));
  pi1->add_option("--max-cosets", budgets.cosets, "Coset table budget");
  pi1->add_option("--report", report, "Report file (default stdout)");
  pi1->callback([&] {
    if (space_path.empty() == tower_path.empty()) throw InputError("pi1 needs exactly one of --space, --tower");
    const Pi1Mode m = mode == "pres" ? Pi1Mode::presentation : Pi1Mode::abelian;
    auto p = tower_path.empty() ? uniform_pi1(load_space(space_path), m, budgets)
                                : uniform_pi1(load_tower(tower_path), m, budgets);
    json j = p.to_json();
    j["summary"] = p.describe();
    emit(j, report);
  });

  // gp
  auto* gp = app.add_subcommand("gp", "Space of generalized paths");
  GPOptions gopt;
  gp->add_option("--space", space_path, "Space file")->required();
  gp->add_option("--radius", gopt.radius, "Word radius when the group is not enumerated");
  gp->add_option("--max-classes", gopt.max_classes, "Class budget");
  gp->add_option("--report", report, "Report file (default stdout)");
  gp->callback([&] {
    auto s = load_space(space_path);
    auto g = gp_space(s, budgets, gopt);
    json j = g.to_json(s);
    if (s.mode() == Mode::strict) j["constant_generalized_paths"] = verify_constant_gp(s).to_json();
    emit(j, report);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Seeded proposition suites");
  std::string suite = "all";
  std::size_t count = 200;
  SuiteOptions sopt;
  verify->add_option("--suite", suite, "all, covering, actions or convergence")->check(CLI::IsMember(suites()));
  verify->add_option("--count", count, "Instances per sub-suite");
  verify->add_option("--seed", seed, "Corpus seed");
  verify->add_option("--threads", sopt.threads, "Worker threads (0: all cores)");
  verify->add_option("--report", report, "Report file (default stdout)");
  verify->callback([&] {
    auto rep = run_suite(suite, count, seed, sopt);
    emit(rep.to_json(sopt.max_certificates), report);
    if (!report.empty())
      for (const auto& [name, row] : rep.tally())
        std::cout << name << ": " << row.at("pass") << " pass, " << row.at("fail") << " fail, " << row.at("skipped")
                  << " skipped\n";
    code = rep.any_fail() ? 1 : 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : kInputError;
  } catch (const InputError& e) {
    std::cerr << "ucl: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    std::cerr << "ucl: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "ucl: " << e.what() << '\n';
    return 1;
  }
  return code;
}
