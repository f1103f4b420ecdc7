#include "polyreg/linalg.hpp"

#include <cassert>

namespace polyreg {

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rat inv = Rat(1) / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rat f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.erase(m.begin() + static_cast<long>(row), m.end());
  return pivots;
}

int rank(RatMat m) { return static_cast<int>(rref(m).size()); }

std::optional<RatVec> solve_linear(RatMat a, RatVec rhs) {
  const std::size_t n = a.size();
  assert(rhs.size() == n);
  for (std::size_t i = 0; i < n; ++i) {
    assert(a[i].size() == n);
    a[i].push_back(rhs[i]);
  }
  const auto pivots = rref(a);
  if (pivots.size() != n) return std::nullopt;  // singular (or n == 0)
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] == static_cast<int>(n)) return std::nullopt;  // inconsistent
  RatVec x(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<std::size_t>(pivots[i])] = a[i][n];
  return x;
}

std::vector<RatVec> kernel_basis(const RatMat& m, int dim) {
  RatMat a = m;
  for ([[maybe_unused]] auto& r : a)
    assert(static_cast<int>(r.size()) == dim);
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(dim), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<RatVec> basis;
  for (int free = 0; free < dim; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    RatVec v = zero_vec(dim);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[static_cast<std::size_t>(pivots[i])] = -a[i][static_cast<std::size_t>(free)];
    basis.push_back(primitive_scale(v));
  }
  return basis;
}

}  // namespace polyreg
