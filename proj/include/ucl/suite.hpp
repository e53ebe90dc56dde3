// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Seeded batch verification: builds a corpus per suite, evaluates every
/// proposition on every applicable instance in a worker pool and assembles
/// a report whose bytes depend only on (suite, count, seed).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "convergence.hpp"
#include "generators.hpp"

namespace ucl {

/// SplitMix64 step: instance seeds that stay independent for nearby inputs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct Outcome {
  std::string proposition;
  std::string status;  // pass, fail, skipped
  json detail;
};

struct InstanceResult {
  std::string id;
  std::string kind;
  std::size_t index = 0;
  std::string family;
  json params;
  json digest;
  std::vector<Outcome> outcomes;
  std::string error;
};

struct SuiteOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
  std::size_t max_certificates = 10;
  ClassifyOptions classify;
};

/// Instance `i` of the covering corpus: cyclic covers, rotation quotients
/// and random automorphism quotients.
inline Instance covering_instance(std::uint64_t seed, std::size_t i) {
  const std::uint64_t s = mix_seed(seed, i);
  Rng rng(s);
  switch (i % 4) {
    case 0: {
      const std::size_t n = 3 + pick(rng, 6), k = 1 + pick(rng, std::min<std::size_t>(4, 32 / n));
      json p{{"n", n}, {"k", k}, {"scales", pick(rng, 2) ? json{2, 1} : json{1}}};
      return generate("cycle-cover", p, s);
    }
    case 1: {
      const std::size_t n = 4 + pick(rng, 9);
      json p{{"n", n}, {"step", 1 + pick(rng, n - 1)}, {"scales", pick(rng, 2) ? json{2, 1} : json{1}}};
      auto in = generate("rotation-action", p, s);
      in.map = orbit_space(*in.action).projection;
      return in;
    }
    default: return generate("random-quotient", json::object(), s);
  }
}

/// Instance `i` of the action corpus: rotations of cycles and random
/// automorphism subgroups, |G| <= 12.
inline Instance action_instance(std::uint64_t seed, std::size_t i) {
  const std::uint64_t s = mix_seed(seed, i) ^ 0xA5A5A5A5ull;
  Rng rng(s);
  if (i % 3 == 0) {
    const std::size_t n = 4 + pick(rng, 9);
    json p{{"n", n}, {"step", 1 + pick(rng, n - 1)}};
    switch (pick(rng, 3)) {
      case 0: p["scales"] = {1}; break;
      case 1: p["scales"] = {2, 1}; break;
      default: p["scales"] = {1, 0}, p["mode"] = "strict";  // finest entry is the diagonal
    }
    return generate("rotation-action", p, s);
  }
  return generate("random-quotient", json::object(), s);
}

/// Rebuilds instance `index` of a sub-suite corpus; certificates carry
/// exactly these three values.
inline Instance replay_instance(const std::string& kind, std::uint64_t seed, std::size_t index) {
  if (kind == "covering") return covering_instance(seed, index);
  if (kind == "actions" || kind == "convergence") return action_instance(seed, index);
  throw InputError("unknown sub-suite " + kind);
}

/// Zero-padded so lexicographic order is corpus order.
inline std::string instance_key(const std::string& kind, std::size_t index) {
  std::string n = std::to_string(index);
  return kind + "/" + std::string(n.size() < 6 ? 6 - n.size() : 0, '0') + n;
}

namespace detail {

inline void run_covering(const Instance& in, InstanceResult& r, const SuiteOptions& opt) {
  auto rep = classify_map(*in.map, opt.classify);
  r.digest["cover"] = std::string(to_string(rep.overall));
  r.digest["points"] = in.map->source->size();
  const bool gen = rep.generates.is_yes();
  auto gate = [&](const std::string& name, bool hyp, bool ok, const char* why, json detail = {}) {
    r.outcomes.push_back({name, !hyp ? "skipped" : ok ? "pass" : "fail", hyp ? detail : json{{"failed", why}}});
  };
  gate("conditions 1, 3 and 4 agree", gen, rep.exact_conditions_agree(), "generates_structure",
       {{"1", std::string(to_string(rep.condition1.status))},
        {"3a", std::string(to_string(rep.condition3a.status))},
        {"3b", std::string(to_string(rep.condition3b.status))},
        {"4", std::string(to_string(rep.condition4.status))}});
  gate("condition 2 agrees", gen && rep.condition2.status != Status::unknown, rep.condition2_agrees(),
       gen ? "condition 2 incomplete" : "generates_structure",
       {{"2", std::string(to_string(rep.condition2.status))}, {"4", std::string(to_string(rep.condition4.status))}});
  gate("chain enumeration agrees", rep.self_check.has_value(),
       rep.self_check && rep.self_check->lifting_agrees && rep.self_check->uniqueness_agrees, "more than 8 points");
}

inline void run_actions(const Instance& in, InstanceResult& r, const SuiteOptions& opt) {
  auto t = verify_action_theorems(*in.action, opt.classify);
  r.digest["order"] = in.action->order();
  r.digest["projection"] = std::string(to_string(t.projection.overall));
  for (const auto& c : t.checks) r.outcomes.push_back({c.name, c.status, c.detail});
}

inline void run_convergence(const Instance& in, InstanceResult& r, const SuiteOptions& opt) {
  auto c = verify_convergence(*in.action, opt.classify);
  r.digest["structures_on_G"] = std::string(to_string(c.star_vs_bar.relation));
  r.digest["discrete"] = c.star_discrete.is_yes();
  for (const auto& k : c.checks) r.outcomes.push_back({k.name, k.status, k.detail});
}

}  // namespace detail

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<InstanceResult> instances;

  bool any_fail() const {
    for (const auto& i : instances) {
      if (!i.error.empty()) return true;
      for (const auto& o : i.outcomes)
        if (o.status == "fail") return true;
    }
    return false;
  }

  /// pass/fail/skipped per proposition, summed over instances.
  std::map<std::string, std::map<std::string, std::size_t>> tally() const {
    std::map<std::string, std::map<std::string, std::size_t>> t;
    for (const auto& i : instances)
      for (const auto& o : i.outcomes) {
        auto& row = t[o.proposition];
        row.try_emplace("pass", 0);
        row.try_emplace("fail", 0);
        row.try_emplace("skipped", 0);
        ++row[o.status];
      }
    return t;
  }

  json to_json(std::size_t max_certificates = 10) const {
    json props = json::object();
    for (const auto& [name, row] : tally()) props[name] = row;
    for (const auto& i : instances)
      for (const auto& o : i.outcomes)
        if (o.status == "fail") {
          auto& certs = props[o.proposition]["certificates"];
          if (certs.is_null()) certs = json::array();
          if (certs.size() < max_certificates)
            certs.push_back({{"instance", i.id},
                            {"replay", {{"suite", i.kind}, {"seed", seed}, {"index", i.index}}},
                            {"params", i.params},
                            {"detail", o.detail}});
        }
    json inst = json::array();
    json errors = json::array();
    for (const auto& i : instances) {
      inst.push_back({{"id", i.id}, {"family", i.family}, {"digest", i.digest}});
      if (!i.error.empty()) errors.push_back({{"instance", i.id}, {"error", i.error}});
    }
    json j{{"suite", suite}, {"seed", seed}, {"count", count}, {"propositions", props}, {"instances", inst},
           {"all_pass", !any_fail()}};
    if (!errors.empty()) j["errors"] = errors;
    return j;
  }
};

inline const std::vector<std::string>& suites() {
  static const std::vector<std::string> s{"all", "covering", "actions", "convergence"};
  return s;
}

/// `count` instances per selected sub-suite, verified in parallel; the
/// report lists instances in corpus order regardless of scheduling.
inline SuiteReport run_suite(const std::string& suite, std::size_t count, std::uint64_t seed, SuiteOptions opt = {}) {
  if (std::find(suites().begin(), suites().end(), suite) == suites().end())
    throw InputError("unknown suite " + suite);
  struct Job {
    std::string kind;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const std::string kind : {"covering", "actions", "convergence"})
    if (suite == "all" || suite == kind)
      for (std::size_t i = 0; i < count; ++i) jobs.push_back({kind, i});

  SuiteReport rep;
  rep.suite = suite;
  rep.seed = seed;
  rep.count = count;
  rep.instances.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      auto& r = rep.instances[j];
      const auto& job = jobs[j];
      r.kind = job.kind;
      r.index = job.index;
      try {
        Instance in = replay_instance(job.kind, seed, job.index);
        r.id = instance_key(job.kind, job.index) + "/" + in.id;
        r.family = in.family;
        r.params = in.params;
        if (job.kind == "covering")
          detail::run_covering(in, r, opt);
        else if (job.kind == "actions")
          detail::run_actions(in, r, opt);
        else
          detail::run_convergence(in, r, opt);
      } catch (const std::exception& e) {
        r.id = instance_key(job.kind, job.index);
        r.error = e.what();
      }
    }
  };
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::sort(rep.instances.begin(), rep.instances.end(),
            [](const InstanceResult& a, const InstanceResult& b) { return a.id < b.id; });
  return rep;
}

}  // namespace ucl
