// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// E-homotopy of chains rel. endpoints. Two E-chains are homotopic when one
/// turns into the other by inserting or deleting single vertices that span
/// a simplex of R(X,E) with their neighbours. The decision is tiered:
/// abelian obstruction, then breadth-first search over moves, then coset
/// enumeration on the edge-path presentation. Exhausted budgets give
/// "unknown", never a guess.

#include <cstdlib>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "rips.hpp"

namespace ucl {

struct Budgets {
  std::size_t moves = 10000;    // BFS states
  std::size_t cosets = 100000;  // Todd-Coxeter table rows

  static Budgets from_env() {
    Budgets b;
    if (const char* m = std::getenv("UCL_BUDGET_MOVES")) b.moves = std::stoull(m);
    if (const char* c = std::getenv("UCL_BUDGET_COSETS")) b.cosets = std::stoull(c);
    return b;
  }
};

struct Move {
  enum class Kind { insert, erase } kind = Kind::insert;
  std::size_t position = 0;
  int vertex = 0;

  friend bool operator==(const Move&, const Move&) = default;

  json to_json() const {
    return {{"op", kind == Kind::insert ? "insert" : "delete"}, {"position", position}, {"vertex", vertex}};
  }
};

/// Applies one elementary move; returns false if it is not legal in E.
inline bool apply_move(const Relation& e, std::vector<int>& pts, const Move& m) {
  std::vector<int> next = pts;
  if (m.kind == Move::Kind::insert) {
    if (m.position > next.size()) return false;
    next.insert(next.begin() + std::ptrdiff_t(m.position), m.vertex);
  } else {
    if (m.position >= next.size() || next.size() < 2 || next[m.position] != m.vertex) return false;
    next.erase(next.begin() + std::ptrdiff_t(m.position));
  }
  // A legal move keeps both endpoints and leaves an E-chain; for a single
  // insertion or deletion this is exactly "the vertex spans a simplex with
  // its neighbours".
  if (next.front() != pts.front() || next.back() != pts.back()) return false;
  if (!is_chain(e, next)) return false;
  pts = std::move(next);
  return true;
}

inline bool replay(const Relation& e, std::vector<int> from, const std::vector<int>& to,
                   const std::vector<Move>& script) {
  if (!is_chain(e, from)) return false;
  for (const auto& m : script)
    if (!apply_move(e, from, m)) return false;
  return from == to;
}

struct HomotopyVerdict {
  Status status = Status::unknown;
  std::string tier;                // "abelian", "moves", "free-reduction", "coset-table", "exhausted"
  std::vector<Move> script;        // on yes from the move search
  std::vector<Int> obstruction;    // on no from the abelian tier
  std::size_t states = 0;
  std::size_t cosets = 0;

  json to_json() const {
    json j{{"status", std::string(to_string(status))}, {"tier", tier}, {"states", states}};
    if (!script.empty() || (status == Status::yes && tier == "moves")) {
      json s = json::array();
      for (const auto& m : script) s.push_back(m.to_json());
      j["moves"] = s;
    }
    if (!obstruction.empty()) j["obstruction"] = obstruction;
    if (cosets) j["cosets"] = cosets;
    return j;
  }
};

namespace detail {

/// Collapses immediate repetitions, recording each removal.
inline std::vector<int> collapse(std::vector<int> pts, std::vector<Move>* moves) {
  std::size_t k = 1;
  while (k < pts.size()) {
    if (pts[k] == pts[k - 1]) {
      if (moves) moves->push_back({Move::Kind::erase, k, pts[k]});
      pts.erase(pts.begin() + std::ptrdiff_t(k));
    } else {
      ++k;
    }
  }
  return pts;
}

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ std::size_t(x + 1);
    return h;
  }
};

/// Best-first search over repetition-free chains, ordered by chain length
/// plus depth so that shortening moves are explored first. Each edge of the
/// search is a short script of elementary moves.
inline std::optional<std::vector<Move>> move_search(const Relation& e, const std::vector<int>& from,
                                                    const std::vector<int>& to, std::size_t budget,
                                                    std::size_t& explored) {
  struct Node {
    std::vector<int> pts;
    std::size_t parent;
    std::vector<Move> moves;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<int>, std::size_t, VectorHash> seen;
  nodes.push_back({from, std::size_t(-1), {}, 0});
  using Key = std::pair<std::size_t, std::size_t>;  // (priority, node), smallest first
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
  open.push({from.size(), 0});
  seen.emplace(from, 0);
  const int n = int(e.points());

  auto finish = [&](std::size_t idx) {
    std::vector<std::vector<Move>> parts;
    for (std::size_t k = idx; k != std::size_t(-1); k = nodes[k].parent) parts.push_back(nodes[k].moves);
    std::vector<Move> out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return out;
  };

  if (from == to) {
    explored = 1;
    return std::vector<Move>{};
  }
  while (!open.empty()) {
    if (nodes.size() >= budget) break;
    const std::size_t head = open.top().second;
    open.pop();
    const std::vector<int> cur = nodes[head].pts;
    std::vector<std::pair<std::vector<int>, std::vector<Move>>> succ;
    const std::size_t len = cur.size();
    // Deletion of an interior vertex whose neighbours are E-close.
    for (std::size_t p = 1; p + 1 < len; ++p) {
      if (!e.contains(cur[p - 1], cur[p + 1])) continue;
      std::vector<Move> ms{{Move::Kind::erase, p, cur[p]}};
      std::vector<int> nx = cur;
      nx.erase(nx.begin() + std::ptrdiff_t(p));
      nx = collapse(std::move(nx), &ms);
      succ.emplace_back(std::move(nx), std::move(ms));
    }
    // Insertion between two consecutive vertices.
    for (std::size_t p = 1; p < len; ++p)
      for (int v = 0; v < n; ++v) {
        if (v == cur[p - 1] || v == cur[p]) continue;
        if (!e.contains(cur[p - 1], v) || !e.contains(v, cur[p])) continue;
        std::vector<int> nx = cur;
        nx.insert(nx.begin() + std::ptrdiff_t(p), v);
        succ.emplace_back(std::move(nx), std::vector<Move>{{Move::Kind::insert, p, v}});
      }
    // Spur x -> x v x, as a duplicate followed by an insertion.
    for (std::size_t p = 0; p < len; ++p)
      for (int v = 0; v < n; ++v) {
        if (v == cur[p] || !e.contains(cur[p], v)) continue;
        std::vector<int> nx = cur;
        nx.insert(nx.begin() + std::ptrdiff_t(p) + 1, {v, cur[p]});
        succ.emplace_back(std::move(nx), std::vector<Move>{{Move::Kind::insert, p + 1, cur[p]},
                                                          {Move::Kind::insert, p + 1, v}});
      }
    for (auto& [nx, ms] : succ) {
      if (seen.count(nx)) continue;
      seen.emplace(nx, nodes.size());
      open.push({nx.size() + nodes[head].depth + 1, nodes.size()});
      nodes.push_back({nx, head, std::move(ms), nodes[head].depth + 1});
      if (nx == to) {
        explored = nodes.size();
        return finish(nodes.size() - 1);
      }
      if (nodes.size() >= budget) break;
    }
  }
  explored = nodes.size();
  return std::nullopt;
}

}  // namespace detail

/// Decides whether two E_i-chains with common endpoints are homotopic rel.
/// endpoints in R(X, E_i).
inline HomotopyVerdict chains_homotopic(const Space& s, std::size_t scale, const Chain& c, const Chain& d,
                                        Budgets budgets = Budgets::from_env()) {
  if (c.scale != scale || d.scale != scale) throw std::invalid_argument("chains at a different scale");
  if (!is_valid(s, c) || !is_valid(s, d)) throw std::invalid_argument("not an E-chain at this scale");
  if (c.front() != d.front() || c.back() != d.back()) throw std::invalid_argument("chain endpoints differ");

  const Relation& e = s.entry(scale);
  HomotopyVerdict v;
  RipsComplex k(e, 2);
  auto group = pi1_presentation(k, c.front());
  Word loop = group.word_of(k, c.points) * inverse(group.word_of(k, d.points));

  // Tier 1: nonzero class in the abelianization.
  auto sf = relator_smith(group.pres);
  auto sums = exponent_sums(loop, group.pres.generators);
  if (!sf.in_row_lattice(sums)) {
    v.status = Status::no;
    v.tier = "abelian";
    auto y = sf.transform(sums);
    for (std::size_t j = 0; j < y.size(); ++j)
      if (j >= sf.rank() || sf.diagonal[j] != 1) v.obstruction.push_back(j < sf.rank() ? y[j] % sf.diagonal[j] : y[j]);
    return v;
  }

  // Tier 2: elementary moves.
  std::vector<Move> head, tail;
  auto from = detail::collapse(c.points, &head);
  auto to = detail::collapse(d.points, &tail);
  std::size_t explored = 0;
  if (auto path = detail::move_search(e, from, to, budgets.moves, explored)) {
    v.status = Status::yes;
    v.tier = "moves";
    v.states = explored;
    v.script = head;
    v.script.insert(v.script.end(), path->begin(), path->end());
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
      v.script.push_back({Move::Kind::insert, it->position, it->vertex});
    return v;
  }
  v.states = explored;

  // Tier 3: word problem via coset enumeration.
  auto w = decide_trivial(group.reduced, loop, budgets.cosets);
  v.cosets = w.cosets;
  if (!w.trivial) {
    v.tier = "exhausted";
    v.status = Status::unknown;
    return v;
  }
  v.status = *w.trivial ? Status::yes : Status::no;
  v.tier = w.tier == WordVerdict::Tier::free_reduction ? "free-reduction"
           : w.tier == WordVerdict::Tier::abelian      ? "abelian"
                                                       : "coset-table";
  return v;
}

/// The chain is E-homotopic rel. endpoints to the edge path between its endpoints.
inline HomotopyVerdict is_e_short(const Space& s, std::size_t scale, const Chain& c,
                                  Budgets budgets = Budgets::from_env()) {
  if (!s.entry(scale).contains(c.front(), c.back()))
    throw std::invalid_argument("endpoints are not E-close; E-shortness is undefined");
  Chain edge{{c.front()}, scale};
  if (c.back() != c.front()) edge.points.push_back(c.back());
  return chains_homotopic(s, scale, c, edge, budgets);
}

/// c^-1 * d is E-short; c and d share their origin.
inline HomotopyVerdict e_homotopic_pair(const Space& s, std::size_t scale, const Chain& c, const Chain& d,
                                        Budgets budgets = Budgets::from_env()) {
  if (c.front() != d.front()) throw std::invalid_argument("chains do not share their origin");
  return is_e_short(s, scale, concat(reversed(c), d), budgets);
}

}  // namespace ucl
