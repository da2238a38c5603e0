#include "c3o/nnls.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

namespace c3o {

namespace {

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t row = n; row-- > 0;) {
    double sum = b[row];
    for (std::size_t k = row + 1; k < n; ++k) sum -= a[row][k] * x[k];
    x[row] = sum / a[row][row];
  }
  return x;
}

}  // namespace

std::vector<double> nnls(const std::vector<std::vector<double>>& columns,
                         const std::vector<double>& rhs) {
  const std::size_t n_cols = columns.size();
  const std::size_t n_rows = rhs.size();

  double rhs_norm2 = 0.0;
  for (double v : rhs) rhs_norm2 += v * v;

  std::vector<double> best(n_cols, 0.0);
  double best_rss = rhs_norm2;  // the empty support

  for (std::size_t mask = 1; mask < (std::size_t{1} << n_cols); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (mask & (std::size_t{1} << j)) support.push_back(j);
    }
    const std::size_t m = support.size();

    // Normal equations on the support columns.
    std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
    std::vector<double> proj(m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p; q < m; ++q) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) dot += columns[support[p]][r] * columns[support[q]][r];
        gram[p][q] = dot;
        gram[q][p] = dot;
      }
      for (std::size_t r = 0; r < n_rows; ++r) proj[p] += columns[support[p]][r] * rhs[r];
    }
    auto solution = solve_dense(gram, proj);
    if (!solution.has_value()) continue;

    bool feasible = true;
    for (double v : *solution) {
      if (v < 0.0) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    double rss = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      double fitted = 0.0;
      for (std::size_t p = 0; p < m; ++p) fitted += (*solution)[p] * columns[support[p]][r];
      const double d = rhs[r] - fitted;
      rss += d * d;
    }
    if (rss < best_rss) {
      best_rss = rss;
      best.assign(n_cols, 0.0);
      for (std::size_t p = 0; p < m; ++p) best[support[p]] = (*solution)[p];
    }
  }
  return best;
}

}  // namespace c3o
