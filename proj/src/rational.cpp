#include "quadfr/rational.hpp"

#include <stdexcept>

namespace quadfr {

std::vector<std::size_t> rref(RationalRows& rows, std::size_t n_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n_cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const Rational inv = 1 / rows[r][c];
    for (std::size_t j = c; j < n_cols; ++j) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = c; j < n_cols; ++j) {
        if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::size_t rational_rank(RationalRows rows, std::size_t n_cols) {
  return rref(rows, n_cols).size();
}

RationalRows rational_nullspace(RationalRows rows, std::size_t n_cols) {
  const auto pivots = rref(rows, n_cols);
  std::vector<int> pivot_row(n_cols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<int>(i);

  RationalRows basis;
  for (std::size_t free = 0; free < n_cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    RationalRow v(n_cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Rational> express_in_span(const RationalRows& basis, const RationalRow& target) {
  if (basis.empty()) return {};
  const std::size_t n = target.size();
  const std::size_t m = basis.size();
  // Solve sum_i c_i basis[i] = target as an n x (m + 1) augmented system.
  RationalRows aug(n, RationalRow(m + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) aug[j][i] = basis[i][j];
    aug[j][m] = target[j];
  }
  const auto pivots = rref(aug, m + 1);
  if (!pivots.empty() && pivots.back() == m) return {};
  if (pivots.size() != m) throw std::invalid_argument("express_in_span: dependent basis");
  std::vector<Rational> c(m);
  for (std::size_t i = 0; i < m; ++i) c[pivots[i]] = aug[i][m];
  return c;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace quadfr
