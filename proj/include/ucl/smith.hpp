// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Smith normal form over the integers, with the column transform kept so
/// that quotients Z^n / rowspace(A) get explicit coordinates.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ucl {

using Int = std::int64_t;
using IntMatrix = std::vector<std::vector<Int>>;

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith form");
  return r;
}

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith form");
  return r;
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner) {
  const std::size_t rows = a.size();
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix out(rows, std::vector<Int>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        out[i][j] = checked_add(out[i][j], checked_mul(a[i][k], b[k][j]));
    }
  return out;
}

/// Result of U·A·V = D. Only V and V^{-1} are kept; U is never needed
/// because rowspace(A)·V = rowspace(D).
struct SmithForm {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> diagonal;  // d_0 | d_1 | ... (rank entries, all positive)
  IntMatrix v;                // cols x cols
  IntMatrix v_inverse;        // cols x cols

  std::size_t rank() const { return diagonal.size(); }

  /// Row vector x ↦ x·V.
  std::vector<Int> transform(const std::vector<Int>& x) const {
    std::vector<Int> out(cols, 0);
    for (std::size_t k = 0; k < cols; ++k) {
      if (x[k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[j] = checked_add(out[j], checked_mul(x[k], v[k][j]));
    }
    return out;
  }

  /// x lies in the row lattice of A.
  bool in_row_lattice(const std::vector<Int>& x) const {
    auto y = transform(x);
    for (std::size_t j = 0; j < cols; ++j) {
      if (j < rank()) {
        if (y[j] % diagonal[j] != 0) return false;
      } else if (y[j] != 0) {
        return false;
      }
    }
    return true;
  }
};

/// Smith normal form of an r x c matrix (rows may be empty when c > 0).
inline SmithForm smith(IntMatrix a, std::size_t cols) {
  const std::size_t rows = a.size();
  SmithForm out;
  out.rows = rows;
  out.cols = cols;
  out.v = identity_matrix(cols);
  out.v_inverse = identity_matrix(cols);

  auto col_swap = [&](std::size_t p, std::size_t q) {
    if (p == q) return;
    for (auto& r : a) std::swap(r[p], r[q]);
    for (auto& r : out.v) std::swap(r[p], r[q]);
    std::swap(out.v_inverse[p], out.v_inverse[q]);
  };
  // col q += k * col p
  auto col_add = [&](std::size_t p, std::size_t q, Int k) {
    if (k == 0) return;
    for (auto& r : a) r[q] = checked_add(r[q], checked_mul(k, r[p]));
    for (auto& r : out.v) r[q] = checked_add(r[q], checked_mul(k, r[p]));
    for (std::size_t j = 0; j < cols; ++j)
      out.v_inverse[p][j] = checked_add(out.v_inverse[p][j], checked_mul(-k, out.v_inverse[q][j]));
  };
  auto col_negate = [&](std::size_t p) {
    for (auto& r : a) r[p] = -r[p];
    for (auto& r : out.v) r[p] = -r[p];
    for (auto& x : out.v_inverse[p]) x = -x;
  };
  auto row_add = [&](std::size_t p, std::size_t q, Int k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols; ++j) a[q][j] = checked_add(a[q][j], checked_mul(k, a[p][j]));
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    std::size_t pr = rows, pc = cols;
    Int best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
          best = std::llabs(a[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(a[t], a[pr]);
    col_swap(t, pc);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        row_add(t, i, -(a[i][t] / a[t][t]));
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        col_add(t, j, -(a[t][j] / a[t][t]));
        if (a[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility of the remaining block by the pivot.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_add(i, t, 1);
            clean = false;
            break;
          }
    }
    if (a[t][t] < 0) col_negate(t);
    out.diagonal.push_back(a[t][t]);
    ++t;
  }
  return out;
}

}  // namespace ucl
