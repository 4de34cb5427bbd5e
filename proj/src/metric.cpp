#include "diffseq/metric.hpp"

#include <utility>

namespace diffseq {

ConstantMetric::ConstantMetric(std::vector<std::vector<Rational>> entries, std::string name)
    : g_(std::move(entries)), name_(std::move(name)) {
  const std::size_t n = g_.size();
  if (n == 0) throw DimensionMismatch("empty metric");
  for (const auto& row : g_)
    if (row.size() != n) throw DimensionMismatch("metric is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g_[i][j] != g_[j][i]) throw std::invalid_argument("metric is not symmetric");

  // Gauss-Jordan on [g | I]
  std::vector<std::vector<Rational>> a = g_;
  ginv_.assign(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) ginv_[i][i] = 1;
  det_ = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw DegenerateMetric("metric is degenerate");
    if (p != c) {
      std::swap(a[p], a[c]);
      std::swap(ginv_[p], ginv_[c]);
      det_ = -det_;
    }
    const Rational piv = a[c][c];
    det_ *= piv;
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      ginv_[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        ginv_[r][j] -= f * ginv_[c][j];
      }
    }
  }
}

ConstantMetric ConstantMetric::euclidean(int n) {
  std::vector<std::vector<Rational>> g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return ConstantMetric(std::move(g), "euclidean");
}

ConstantMetric ConstantMetric::minkowski(int n) {
  std::vector<std::vector<Rational>> g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  g[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)] = -1;
  return ConstantMetric(std::move(g), "minkowski");
}

ConstantMetric ConstantMetric::by_name(const std::string& name, int n) {
  if (name == "euclidean") return euclidean(n);
  if (name == "minkowski") return minkowski(n);
  throw std::invalid_argument("unknown metric '" + name + "'");
}

}  // namespace diffseq
