// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// JSON files for spaces, maps, actions and towers. Files that reference
/// other files resolve them relative to their own directory; an inline
/// object is accepted wherever a file name is.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "action.hpp"
#include "genpaths.hpp"
#include "metric.hpp"

namespace ucl {

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace fs = std::filesystem;

inline json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

namespace detail {

inline Mode parse_mode(const json& j) {
  std::string m = j.value("mode", "scale");
  if (m == "strict") return Mode::strict;
  if (m == "scale") return Mode::scale;
  throw InputError("mode must be strict or scale, got " + m);
}

inline std::vector<std::string> parse_labels(const json& j, std::size_t n) {
  std::vector<std::string> out;
  if (!j.contains("points")) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }
  for (const auto& p : j.at("points")) out.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  return out;
}

}  // namespace detail

inline Space space_from_json(const json& j) {
  try {
    RawSpace raw;
    if (j.contains("metric")) {
      auto d = j.at("metric").get<DistanceMatrix>();
      for (const auto& row : d)
        if (row.size() != d.size()) throw InputError("metric must be square");
      raw = threshold_raw(detail::parse_labels(j, d.size()), d, j.at("scales").get<std::vector<double>>(),
                          detail::parse_mode(j));
      if (raw.points.size() != d.size()) throw InputError("points and metric disagree in size");
    } else {
      raw.points = detail::parse_labels(j, 0);
      raw.mode = detail::parse_mode(j);
      const std::size_t n = raw.points.size();
      for (const auto& e : j.at("entourages")) {
        auto pairs = e.at("pairs").get<std::vector<Pair>>();
        try {
          raw.entries.push_back({e.at("name").get<std::string>(), Relation::from_pairs(n, pairs)});
        } catch (const std::out_of_range&) {
          throw InputError("entourage " + e.at("name").get<std::string>() + " has a point index out of range");
        }
      }
    }
    if (j.contains("basepoint")) raw.basepoint = j.at("basepoint").get<int>();
    return validate_space(std::move(raw));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed space: ") + e.what());
  }
}

inline json space_to_json(const Space& s) {
  json ents = json::array();
  for (std::size_t i = 0; i < s.scales(); ++i) {
    json pairs = json::array();
    for (auto [a, b] : s.entry(i).upper_pairs())
      if (a != b) pairs.push_back({a, b});
    ents.push_back({{"name", s.name(i)}, {"pairs", pairs}});
  }
  json j{{"points", s.labels()}, {"entourages", ents}, {"mode", std::string(to_string(s.mode()))}};
  if (s.basepoint()) j["basepoint"] = *s.basepoint();
  return j;
}

/// A file name relative to `dir`, or an inline object.
inline json resolve(const json& ref, const fs::path& dir) {
  if (ref.is_string()) return read_json(dir / ref.get<std::string>());
  if (ref.is_object()) return ref;
  throw InputError("expected a file name or an inline object");
}

inline std::shared_ptr<const Space> space_ref(const json& ref, const fs::path& dir) {
  return std::make_shared<Space>(space_from_json(resolve(ref, dir)));
}

inline UniformMap map_from_json(const json& j, const fs::path& dir) {
  try {
    auto src = space_ref(j.at("source"), dir);
    auto dst = space_ref(j.at("target"), dir);
    return UniformMap(src, dst, j.at("values").get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed map: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline GroupAction action_from_json(const json& j, const fs::path& dir) {
  try {
    auto s = space_ref(j.at("space"), dir);
    auto gens = j.at("generators").get<std::vector<Perm>>();
    auto names = j.value("names", std::vector<std::string>{});
    return GroupAction(s, std::move(gens), std::move(names));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed action: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline Tower tower_from_json(const json& j, const fs::path& dir) {
  try {
    Tower t;
    for (const auto& l : j.at("levels")) t.levels.push_back(space_ref(l, dir));
    // Bond maps name their own source and target; those are replaced by the
    // tower's level objects so identity checks in uniform_pi1 hold.
    std::size_t k = 0;
    for (const auto& b : j.at("bonds")) {
      json m = resolve(b, dir);
      if (k + 1 >= t.levels.size()) throw InputError("more bonds than level pairs");
      t.bonds.emplace_back(t.levels[k + 1], t.levels[k], m.at("values").get<std::vector<int>>());
      ++k;
    }
    if (t.bonds.size() + 1 != t.levels.size()) throw InputError("a tower needs one bond between consecutive levels");
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tower: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline Space load_space(const fs::path& p) { return space_from_json(read_json(p)); }
inline UniformMap load_map(const fs::path& p) { return map_from_json(read_json(p), p.parent_path()); }
inline GroupAction load_action(const fs::path& p) { return action_from_json(read_json(p), p.parent_path()); }
inline Tower load_tower(const fs::path& p) { return tower_from_json(read_json(p), p.parent_path()); }

}  // namespace ucl
