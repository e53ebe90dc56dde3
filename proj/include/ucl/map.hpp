// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "space.hpp"

namespace ucl {

/// A point function between two finite uniform spaces.
struct UniformMap {
  std::shared_ptr<const Space> source;
  std::shared_ptr<const Space> target;
  std::vector<int> values;

  UniformMap() = default;
  UniformMap(std::shared_ptr<const Space> src, std::shared_ptr<const Space> dst, std::vector<int> v)
      : source(std::move(src)), target(std::move(dst)), values(std::move(v)) {
    if (values.size() != source->size()) throw std::invalid_argument("map is not total on source points");
    for (int y : values)
      if (y < 0 || std::size_t(y) >= target->size()) throw std::out_of_range("map value out of range");
  }

  int operator()(int x) const { return values[std::size_t(x)]; }

  Relation image(const Relation& e) const { return ucl::image(e, values, target->size()); }
  Relation image_of_entry(std::size_t i) const { return image(source->entry(i)); }
  Relation preimage(const Relation& e) const { return ucl::preimage(e, values); }

  /// Points of the source over y.
  std::vector<int> fiber(int y) const {
    std::vector<int> out;
    for (std::size_t x = 0; x < values.size(); ++x)
      if (values[x] == y) out.push_back(int(x));
    return out;
  }

  bool is_surjective() const {
    std::vector<char> hit(target->size(), 0);
    for (int y : values) hit[std::size_t(y)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }

  std::vector<int> apply(std::span<const int> pts) const {
    std::vector<int> out;
    out.reserve(pts.size());
    for (int p : pts) out.push_back((*this)(p));
    return out;
  }
};

inline UniformMap identity_map(std::shared_ptr<const Space> s) {
  std::vector<int> v(s->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = int(i);
  return UniformMap(s, s, std::move(v));
}

/// f generates the structure of Y: f is onto and every f(E_i) contains a
/// base entry of Y. The witness maps each source entry to the coarsest
/// target entry it contains.
inline Verdict generates_structure(const UniformMap& f) {
  if (!f.is_surjective()) {
    for (std::size_t y = 0; y < f.target->size(); ++y)
      if (f.fiber(int(y)).empty())
        return Verdict::no({{"reason", "not surjective"}, {"missed_point", int(y)}});
  }
  json table = json::object();
  for (std::size_t i = 0; i < f.source->scales(); ++i) {
    Relation img = f.image_of_entry(i);
    std::optional<std::size_t> hit;
    for (std::size_t j = 0; j < f.target->scales() && !hit; ++j)
      if (f.target->entry(j).subset_of(img)) hit = j;
    if (!hit)
      return Verdict::no({{"reason", "image is not an entourage"}, {"entry", f.source->name(i)}});
    table[f.source->name(i)] = f.target->name(*hit);
  }
  return Verdict::yes(table);
}

}  // namespace ucl
