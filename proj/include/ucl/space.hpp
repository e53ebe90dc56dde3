// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Finite uniform spaces given by a descending chain of entourages, listed
/// coarsest first. Every "for each entourage E there is F" quantifier in the
/// library ranges over these base entries only: on a finite set the chain is
/// cofinal in the filter it generates, so any entourage contains the finest
/// entry.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relation.hpp"
#include "verdict.hpp"

namespace ucl {

enum class Mode { strict, scale };

inline std::string_view to_string(Mode m) { return m == Mode::strict ? "strict" : "scale"; }

struct NamedRelation {
  std::string name;
  Relation rel;
};

/// Unvalidated description, as read from a file.
struct RawSpace {
  std::vector<std::string> points;
  std::vector<NamedRelation> entries;
  Mode mode = Mode::scale;
  std::optional<int> basepoint;
};

class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid space:";
    for (const auto& x : v) s += " " + x + ";";
    return s;
  }
  std::vector<std::string> violations_;
};

class Space {
public:
  std::size_t size() const { return labels_.size(); }
  std::size_t scales() const { return entries_.size(); }
  Mode mode() const { return mode_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int x) const { return labels_[std::size_t(x)]; }
  std::optional<int> basepoint() const { return basepoint_; }

  const Relation& entry(std::size_t i) const { return entries_.at(i).rel; }
  const std::string& name(std::size_t i) const { return entries_.at(i).name; }
  const std::vector<NamedRelation>& entries() const { return entries_; }
  std::size_t finest_index() const { return entries_.size() - 1; }
  const Relation& finest() const { return entries_.back().rel; }

  /// Relation used when a definition asks for "some small entourage" with
  /// an implicit F∘F ⊆ E0 step. Strict chains satisfy the square axiom, so
  /// the entry itself; scale chains use the two-step relation E∘E.
  const Relation& probe(std::size_t i) const { return probes_.at(i); }

  bool is_hausdorff() const { return finest().is_diagonal(); }

  /// R is an entourage iff it contains some base entry, i.e. the finest one.
  bool is_entourage(const Relation& r) const { return finest().subset_of(r); }

  /// Square-axiom witness: for entry i, the coarsest j with E_j∘E_j ⊆ E_i.
  std::optional<std::size_t> square_witness(std::size_t i) const {
    for (std::size_t j = 0; j < scales(); ++j)
      if (compose(entry(j), entry(j)).subset_of(entry(i))) return j;
    return std::nullopt;
  }

  Space with_mode(Mode m) const {
    Space s = *this;
    s.mode_ = m;
    s.rebuild_probes();
    return s;
  }

  friend Space validate_space(RawSpace raw);

private:
  void rebuild_probes() {
    probes_.clear();
    for (const auto& e : entries_)
      probes_.push_back(mode_ == Mode::strict ? e.rel : compose(e.rel, e.rel));
  }

  std::vector<std::string> labels_;
  std::vector<NamedRelation> entries_;
  std::vector<Relation> probes_;
  Mode mode_ = Mode::scale;
  std::optional<int> basepoint_;
};

/// Checks the entourage axioms and returns a validated space, or throws
/// ValidationError listing every violated axiom.
inline Space validate_space(RawSpace raw) {
  std::vector<std::string> bad;
  const std::size_t n = raw.points.size();
  if (n == 0) bad.push_back("empty point set");
  if (raw.entries.empty()) bad.push_back("empty entourage chain");
  for (const auto& e : raw.entries) {
    if (e.rel.points() != n) {
      bad.push_back("entourage " + e.name + " has wrong point count");
      continue;
    }
    if (!e.rel.is_symmetric()) bad.push_back("entourage " + e.name + " is not symmetric");
    if (!e.rel.is_reflexive()) bad.push_back("entourage " + e.name + " misses the diagonal");
  }
  if (bad.empty()) {
    for (std::size_t i = 0; i + 1 < raw.entries.size(); ++i) {
      const auto& a = raw.entries[i].rel;
      const auto& b = raw.entries[i + 1].rel;
      if (!b.subset_of(a) || a == b)
        bad.push_back("chain not strictly descending at " + raw.entries[i + 1].name);
    }
  }
  if (raw.basepoint && (*raw.basepoint < 0 || std::size_t(*raw.basepoint) >= n))
    bad.push_back("basepoint out of range");

  Space s;
  s.labels_ = std::move(raw.points);
  s.entries_ = std::move(raw.entries);
  s.mode_ = raw.mode;
  s.basepoint_ = raw.basepoint;
  if (bad.empty() && s.mode_ == Mode::strict) {
    for (std::size_t i = 0; i < s.scales(); ++i)
      if (!s.square_witness(i))
        bad.push_back("square axiom fails for " + s.name(i) + ": no entry E_j with E_j∘E_j ⊆ it");
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  s.rebuild_probes();
  return s;
}

inline std::vector<int> ball(const Space& s, int x, std::size_t i) { return s.entry(i).row(x); }

inline Relation compose_relations(const Relation& e, const Relation& f) { return compose(e, f); }

/// Chain connected iff the finest entry's adjacency graph is connected.
inline Verdict is_chain_connected(const Space& s) {
  auto comp = components(s.finest());
  for (std::size_t y = 1; y < comp.size(); ++y)
    if (comp[y] != comp[0])
      return Verdict::no({{"points", {0, int(y)}}, {"scale", s.name(s.finest_index())}});
  return Verdict::yes({{"scale", s.name(s.finest_index())}});
}

/// Point sequence whose consecutive pairs lie in entry `scale`.
struct Chain {
  std::vector<int> points;
  std::size_t scale = 0;

  int front() const { return points.front(); }
  int back() const { return points.back(); }
  std::size_t length() const { return points.size(); }
};

inline bool is_chain(const Relation& e, std::span<const int> pts) {
  if (pts.empty()) return false;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    if (!e.contains(pts[k], pts[k + 1])) return false;
  return true;
}

inline bool is_valid(const Space& s, const Chain& c) {
  if (c.scale >= s.scales()) return false;
  for (int p : c.points)
    if (p < 0 || std::size_t(p) >= s.size()) return false;
  return is_chain(s.entry(c.scale), c.points);
}

inline Chain reversed(Chain c) {
  std::reverse(c.points.begin(), c.points.end());
  return c;
}

/// c followed by d; when c ends where d starts the shared point is kept once.
inline Chain concat(const Chain& c, const Chain& d) {
  Chain out = c;
  auto it = d.points.begin();
  if (!c.points.empty() && !d.points.empty() && c.back() == d.front()) ++it;
  out.points.insert(out.points.end(), it, d.points.end());
  return out;
}

}  // namespace ucl
