// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace ucl {

using json = nlohmann::json;

enum class Status { yes, no, unknown };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::yes: return "yes";
    case Status::no: return "no";
    case Status::unknown: return "unknown";
  }
  return "unknown";
}

/// Three-valued answer of a decision procedure. A "yes" carries a witness
/// (usually an entourage table), a "no" carries a concrete counterexample.
struct Verdict {
  Status status = Status::unknown;
  json witness;
  json counterexample;
  bool base_relative = false;
  std::string note;

  static Verdict yes(json w = json::object()) { return {Status::yes, std::move(w), nullptr, false, {}}; }
  static Verdict no(json c) { return {Status::no, nullptr, std::move(c), false, {}}; }
  static Verdict unknown(std::string why) { return {Status::unknown, nullptr, nullptr, false, std::move(why)}; }

  bool is_yes() const { return status == Status::yes; }
  bool is_no() const { return status == Status::no; }
  explicit operator bool() const { return is_yes(); }

  json to_json() const {
    json j;
    j["status"] = std::string(to_string(status));
    if (!witness.is_null()) j["witness"] = witness;
    if (!counterexample.is_null()) j["counterexample"] = counterexample;
    if (base_relative) j["base_relative"] = true;
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

inline Verdict from_bool(bool ok, json witness, json counterexample) {
  return ok ? Verdict::yes(std::move(witness)) : Verdict::no(std::move(counterexample));
}

}  // namespace ucl
