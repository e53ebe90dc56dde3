// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Finitely presented groups: words, free reduction, Tietze simplification,
/// abelianization, and Todd-Coxeter coset enumeration over the trivial
/// subgroup (which solves the word problem when the group is finite).

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smith.hpp"

namespace ucl {

/// Letter +(g+1) is generator g, -(g+1) its inverse.
using Word = std::vector<int>;

inline int generator_of(int letter) { return std::abs(letter) - 1; }

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

inline Word free_reduce(const Word& w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  std::size_t a = 0, b = w.size();
  while (b - a >= 2 && w[a] == -w[b - 1]) {
    ++a;
    --b;
  }
  return Word(w.begin() + std::ptrdiff_t(a), w.begin() + std::ptrdiff_t(b));
}

inline Word operator*(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return free_reduce(a);
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w) {
    if (!s.empty()) s += ' ';
    s += "g" + std::to_string(generator_of(l));
    if (l < 0) s += "^-1";
  }
  return s;
}

struct Presentation {
  int generators = 0;
  std::vector<Word> relators;
  std::vector<std::string> names;  // optional per-generator labels
};

struct AbelianInvariants {
  int free_rank = 0;
  std::vector<Int> torsion;  // each >= 2, successive divisibility

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

inline std::vector<Int> exponent_sums(const Word& w, int generators) {
  std::vector<Int> v(std::size_t(generators), 0);
  for (int l : w) v[std::size_t(generator_of(l))] += l > 0 ? 1 : -1;
  return v;
}

inline SmithForm relator_smith(const Presentation& p) {
  IntMatrix m;
  for (const auto& r : p.relators) m.push_back(exponent_sums(r, p.generators));
  return smith(std::move(m), std::size_t(p.generators));
}

inline AbelianInvariants invariants_of(const SmithForm& sf) {
  AbelianInvariants a;
  a.free_rank = int(sf.cols - sf.rank());
  for (Int d : sf.diagonal)
    if (d > 1) a.torsion.push_back(d);
  return a;
}

inline AbelianInvariants abelianization(const Presentation& p) { return invariants_of(relator_smith(p)); }

/// A presentation after Tietze moves together with the images of the
/// original generators as words in the surviving ones.
struct Simplified {
  Presentation pres;
  std::vector<Word> image;  // original generator -> reduced word

  Word translate(const Word& w) const {
    Word out;
    for (int l : w) {
      const Word& g = image[std::size_t(generator_of(l))];
      if (l > 0)
        out.insert(out.end(), g.begin(), g.end());
      else {
        auto gi = inverse(g);
        out.insert(out.end(), gi.begin(), gi.end());
      }
    }
    return free_reduce(out);
  }
};

/// Eliminates generators that occur exactly once in a short relator.
/// Relator length never grows past `max_len`.
inline Simplified simplify(const Presentation& p, std::size_t max_len = 24) {
  const int n = p.generators;
  std::vector<Word> image(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) image[std::size_t(g)] = {g + 1};
  std::vector<Word> rels;
  for (const auto& r : p.relators) {
    auto c = cyclic_reduce(r);
    if (!c.empty()) rels.push_back(c);
  }

  auto substitute = [](const Word& w, int g, const Word& value) {
    Word out;
    for (int l : w) {
      if (generator_of(l) != g)
        out.push_back(l);
      else if (l > 0)
        out.insert(out.end(), value.begin(), value.end());
      else {
        auto vi = inverse(value);
        out.insert(out.end(), vi.begin(), vi.end());
      }
    }
    return free_reduce(out);
  };

  bool progress = true;
  while (progress) {
    progress = false;
    std::sort(rels.begin(), rels.end(), [](const Word& a, const Word& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
    for (std::size_t ri = 0; ri < rels.size() && !progress; ++ri) {
      const Word r = rels[ri];
      for (std::size_t k = 0; k < r.size(); ++k) {
        int g = generator_of(r[k]);
        auto occurrences = std::count_if(r.begin(), r.end(), [&](int l) { return generator_of(l) == g; });
        if (occurrences != 1) continue;
        // r = u x^e v  =>  x^e = u^-1 v^-1 (as cyclic word: x^e = (v u)^-1)
        Word vu(r.begin() + std::ptrdiff_t(k) + 1, r.end());
        vu.insert(vu.end(), r.begin(), r.begin() + std::ptrdiff_t(k));
        Word value = inverse(vu);
        if (r[k] < 0) value = inverse(value);
        value = free_reduce(value);
        bool fits = true;
        std::vector<Word> next;
        for (std::size_t rj = 0; rj < rels.size(); ++rj) {
          if (rj == ri) continue;
          auto s = cyclic_reduce(substitute(rels[rj], g, value));
          if (s.size() > max_len) {
            fits = false;
            break;
          }
          if (!s.empty()) next.push_back(s);
        }
        if (!fits) continue;
        for (auto& im : image) im = substitute(im, g, value);
        rels = std::move(next);
        progress = true;
        break;
      }
    }
  }

  // Renumber surviving generators densely.
  std::vector<int> used;
  auto mark = [&](const Word& w) {
    for (int l : w) used.push_back(generator_of(l));
  };
  for (const auto& r : rels) mark(r);
  for (const auto& im : image) mark(im);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<int, int> renumber;
  for (std::size_t i = 0; i < used.size(); ++i) renumber[used[i]] = int(i);
  auto remap = [&](Word w) {
    for (int& l : w) l = (l > 0 ? 1 : -1) * (renumber.at(generator_of(l)) + 1);
    return w;
  };
  Simplified out;
  out.pres.generators = int(used.size());
  for (int g : used)
    out.pres.names.push_back(std::size_t(g) < p.names.size() ? p.names[std::size_t(g)] : "g" + std::to_string(g));
  for (const auto& r : rels) out.pres.relators.push_back(remap(r));
  for (const auto& im : image) out.image.push_back(remap(im));
  return out;
}

/// Completed coset table of the trivial subgroup: the regular representation.
struct CosetTable {
  int generators = 0;
  std::vector<std::vector<int>> table;  // coset -> column (2g for g, 2g+1 for g^-1)

  std::size_t order() const { return table.size(); }

  static std::size_t column(int letter) {
    return std::size_t(2 * generator_of(letter) + (letter < 0 ? 1 : 0));
  }

  int trace(const Word& w, int start = 0) const {
    int c = start;
    for (int l : w) c = table[std::size_t(c)][column(l)];
    return c;
  }
};

/// HLT-style Todd-Coxeter enumeration. Returns nullopt when more than
/// `max_cosets` cosets would be defined.
inline std::optional<CosetTable> enumerate_cosets(const Presentation& p, std::size_t max_cosets) {
  const std::size_t cols = std::size_t(2 * p.generators);
  constexpr int undef = -1;
  std::vector<std::vector<int>> t;
  std::vector<int> parent;
  auto col = [](int letter) { return CosetTable::column(letter); };

  auto fresh = [&]() -> std::optional<int> {
    if (t.size() >= max_cosets) return std::nullopt;
    t.emplace_back(cols, undef);
    parent.push_back(int(parent.size()));
    return int(t.size() - 1);
  };
  auto rep = [&](int c) {
    int r = c;
    while (parent[std::size_t(r)] != r) r = parent[std::size_t(r)];
    while (parent[std::size_t(c)] != r) {
      int next = parent[std::size_t(c)];
      parent[std::size_t(c)] = r;
      c = next;
    }
    return r;
  };
  auto alive = [&](int c) { return parent[std::size_t(c)] == c; };

  auto coincidence = [&](int a, int b) {
    std::vector<int> queue;
    auto merge = [&](int k, int l) {
      int x = rep(k), y = rep(l);
      if (x == y) return;
      int lo = std::min(x, y), hi = std::max(x, y);
      parent[std::size_t(hi)] = lo;
      queue.push_back(hi);
    };
    merge(a, b);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int g = queue[qi];
      for (std::size_t x = 0; x < cols; ++x) {
        int d = t[std::size_t(g)][x];
        if (d == undef) continue;
        t[std::size_t(d)][x ^ 1] = undef;
        int mu = rep(g), nu = rep(d);
        if (t[std::size_t(mu)][x] != undef)
          merge(nu, t[std::size_t(mu)][x]);
        else if (t[std::size_t(nu)][x ^ 1] != undef)
          merge(mu, t[std::size_t(nu)][x ^ 1]);
        else {
          t[std::size_t(mu)][x] = nu;
          t[std::size_t(nu)][x ^ 1] = mu;
        }
      }
    }
  };

  // Returns false on budget exhaustion.
  auto scan_and_fill = [&](int c, const Word& w) -> bool {
    if (w.empty()) return true;
    int f = c, b = c;
    std::ptrdiff_t i = 0, j = std::ptrdiff_t(w.size()) - 1;
    while (true) {
      while (i <= j && t[std::size_t(f)][col(w[std::size_t(i)])] != undef) {
        f = t[std::size_t(f)][col(w[std::size_t(i)])];
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && t[std::size_t(b)][col(-w[std::size_t(j)])] != undef) {
        b = t[std::size_t(b)][col(-w[std::size_t(j)])];
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        t[std::size_t(f)][col(w[std::size_t(i)])] = b;
        t[std::size_t(b)][col(-w[std::size_t(i)])] = f;
        return true;
      }
      auto n = fresh();
      if (!n) return false;
      t[std::size_t(f)][col(w[std::size_t(i)])] = *n;
      t[std::size_t(*n)][col(-w[std::size_t(i)])] = f;
    }
  };

  if (!fresh()) return std::nullopt;
  for (std::size_t a = 0; a < t.size(); ++a) {
    for (const auto& r : p.relators) {
      if (!alive(int(a))) break;
      if (!scan_and_fill(int(a), r)) return std::nullopt;
    }
    for (std::size_t x = 0; x < cols; ++x) {
      if (!alive(int(a))) break;
      if (t[a][x] == undef) {
        auto n = fresh();
        if (!n) return std::nullopt;
        t[a][x] = *n;
        t[std::size_t(*n)][x ^ 1] = int(a);
      }
    }
  }

  std::vector<int> index(t.size(), -1);
  int live = 0;
  for (std::size_t c = 0; c < t.size(); ++c)
    if (alive(int(c))) index[c] = live++;
  CosetTable out;
  out.generators = p.generators;
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (!alive(int(c))) continue;
    std::vector<int> row(cols);
    for (std::size_t x = 0; x < cols; ++x) {
      if (t[c][x] == undef) return std::nullopt;
      row[x] = index[std::size_t(rep(t[c][x]))];
    }
    out.table.push_back(std::move(row));
  }
  return out;
}

/// Decision record for "w = 1 in the group".
struct WordVerdict {
  enum class Tier { free_reduction, abelian, coset_table, exhausted } tier = Tier::exhausted;
  std::optional<bool> trivial;
  std::vector<Int> obstruction;  // nonzero abelianized class when tier == abelian
  std::size_t cosets = 0;
};

inline WordVerdict decide_trivial(const Simplified& s, const Word& original, std::size_t max_cosets) {
  WordVerdict v;
  Word w = s.translate(original);
  if (w.empty()) {
    v.tier = WordVerdict::Tier::free_reduction;
    v.trivial = true;
    return v;
  }
  auto sf = relator_smith(s.pres);
  auto sums = exponent_sums(w, s.pres.generators);
  if (!sf.in_row_lattice(sums)) {
    v.tier = WordVerdict::Tier::abelian;
    v.trivial = false;
    v.obstruction = sf.transform(sums);
    return v;
  }
  if (auto table = enumerate_cosets(s.pres, max_cosets)) {
    v.tier = WordVerdict::Tier::coset_table;
    v.cosets = table->order();
    v.trivial = table->trace(w) == 0;
    return v;
  }
  v.tier = WordVerdict::Tier::exhausted;
  v.cosets = max_cosets;
  return v;
}

}  // namespace ucl
