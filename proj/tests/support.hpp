#pragma once

#include <random>
#include <vector>

#include "diffseq/polynomial.hpp"
#include "diffseq/operator.hpp"

namespace testsupport {

using diffseq::MultiIndex;
using diffseq::Rational;
using diffseq::RationalPoly;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// Random polynomial with integer coefficients in [lo, hi], total degree <= max_deg.
inline RationalPoly random_poly(int n, int max_deg, int terms, int lo = -9, int hi = 9) {
  std::vector<diffseq::Term> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    int budget = uniform(0, max_deg);
    for (int i = 0; i < n && budget > 0; ++i) {
      const int x = uniform(0, budget);
      e[static_cast<std::size_t>(i)] = x;
      budget -= x;
    }
    t.push_back({MultiIndex::from(e), Rational(uniform(lo, hi))});
  }
  return RationalPoly::from_terms(n, std::move(t));
}

inline diffseq::JetSection random_section(int n, int comps, int max_deg = 5) {
  diffseq::JetSection s;
  for (int k = 0; k < comps; ++k) s.comps.push_back(random_poly(n, max_deg, uniform(1, 6)));
  return s;
}

// Plain Gaussian elimination on a dense copy.
inline int dense_rank(std::vector<std::vector<Rational>> a) {
  int rank = 0;
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[rank]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<Rational>> eval_matrix(const diffseq::OperatorMatrix& D, const std::vector<Rational>& pt) {
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(D.rows()), std::vector<Rational>(static_cast<std::size_t>(D.cols())));
  for (int r = 0; r < D.rows(); ++r)
    for (int c = 0; c < D.cols(); ++c) m[r][c] = D.at(r, c).evaluate(pt);
  return m;
}

// Max rank over a few random integer points: a lower bound on the generic rank.
inline int sampled_rank(const diffseq::OperatorMatrix& D, int samples = 4) {
  int best = 0;
  for (int s = 0; s < samples; ++s) {
    std::vector<Rational> pt;
    for (int i = 0; i < D.n(); ++i) pt.emplace_back(uniform(-50, 50));
    best = std::max(best, dense_rank(eval_matrix(D, pt)));
  }
  return best;
}

// Dimension of {c with homogeneous degree-d entries : sum_a c_a * row_a = 0}
// for an operator whose rows are homogeneous of one common degree.
inline int syzygy_slice_dim(const diffseq::OperatorMatrix& D, int d) {
  const int n = D.n();
  const auto& md = diffseq::monomials_of_degree(n, d);
  int row_deg = -1;
  for (int r = 0; r < D.rows(); ++r)
    for (int c = 0; c < D.cols(); ++c)
      if (!D.at(r, c).is_zero()) row_deg = D.at(r, c).degree();
  const auto& out = diffseq::monomials_of_degree(n, d + row_deg);
  const int unknowns = D.rows() * static_cast<int>(md.size());
  std::vector<std::vector<Rational>> sys(static_cast<std::size_t>(D.cols() * out.size()), std::vector<Rational>(static_cast<std::size_t>(unknowns)));
  auto out_pos = [&](const MultiIndex& m) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] == m) return static_cast<int>(i);
    return -1;
  };
  for (int a = 0; a < D.rows(); ++a)
    for (std::size_t u = 0; u < md.size(); ++u)
      for (int c = 0; c < D.cols(); ++c)
        for (const auto& t : D.at(a, c).terms()) {
          const int p = out_pos(md[u] * t.mono);
          sys[static_cast<std::size_t>(c * static_cast<int>(out.size()) + p)][static_cast<std::size_t>(a * static_cast<int>(md.size()) + static_cast<int>(u))] += t.coef;
        }
  return unknowns - dense_rank(std::move(sys));
}

// Polynomial vector fields of degree <= d: dimension of the kernel of D acting on them.
inline int polynomial_kernel_dim(const diffseq::OperatorMatrix& D, int d) {
  const int n = D.n();
  std::vector<diffseq::JetSection> basis;
  for (int k = 0; k < D.cols(); ++k)
    for (int e = 0; e <= d; ++e)
      for (const auto& m : diffseq::monomials_of_degree(n, e)) {
        diffseq::JetSection s;
        s.comps.assign(static_cast<std::size_t>(D.cols()), RationalPoly(n));
        s.comps[static_cast<std::size_t>(k)] = RationalPoly::monomial(m);
        basis.push_back(s);
      }
  std::vector<MultiIndex> monos;
  for (int e = 0; e <= d; ++e)
    for (const auto& m : diffseq::monomials_of_degree(n, e)) monos.push_back(m);
  std::vector<std::vector<Rational>> cols;
  for (const auto& s : basis) {
    const auto img = diffseq::apply(D, s);
    std::vector<Rational> v;
    for (const auto& p : img.comps)
      for (const auto& m : monos) v.push_back(p.coefficient(m));
    cols.push_back(std::move(v));
  }
  std::vector<std::vector<Rational>> m(cols[0].size(), std::vector<Rational>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m[i][j] = cols[j][i];
  return static_cast<int>(basis.size()) - dense_rank(std::move(m));
}

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace testsupport
