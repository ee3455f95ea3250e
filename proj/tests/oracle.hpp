#pragma once
// Independent reference computations used by the unit tests. Nothing here
// calls into the library's elimination routines.

#include <random>
#include <vector>

#include "phimod/exactlin.hpp"

namespace oracle {

using phimod::Scalar;
using Rows = std::vector<std::vector<Scalar>>;

// Rank by plain fraction-valued Gaussian elimination (partial pivot search,
// no reduction above pivots).
inline std::size_t rank(Rows a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      const Scalar f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline Rows rows_of(const phimod::Matrix& m) {
  Rows out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

inline std::size_t rank(const phimod::Matrix& m) { return rank(rows_of(m)); }

inline Rows random_rows(std::mt19937_64& g, std::size_t r, std::size_t c, int bound = 3) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Rows out(r, std::vector<Scalar>(c));
  for (auto& row : out)
    for (auto& x : row) x = d(g);
  return out;
}

}  // namespace oracle
