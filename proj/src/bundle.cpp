#include "diffseq/bundle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace diffseq {

using kernels::SparseEntry;

namespace {

void enumerate_factor(int n, const TensorFactor& f, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == f.slots) {
      out.push_back(cur);
      return;
    }
    int start = 0;
    if (f.kind == FactorKind::Sym) start = lo;
    if (f.kind == FactorKind::Alt) start = lo;
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(pos + 1, f.kind == FactorKind::Alt ? i + 1 : i);
      cur.pop_back();
    }
  };
  rec(0, 0);
}

int encode(const std::vector<int>& idx, std::size_t from, std::size_t len, int n) {
  int code = 0;
  for (std::size_t i = 0; i < len; ++i) code = code * n + idx[from + i];
  return code;
}

}  // namespace

int permutation_sign(std::vector<int> idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

TensorSpace::TensorSpace(std::string label, int n, std::vector<TensorFactor> factors)
    : label_(std::move(label)), n_(n), factors_(std::move(factors)) {
  if (n < 1 || n > kMaxVars) throw std::invalid_argument("unsupported dimension");
  std::vector<std::vector<std::vector<int>>> per;
  for (const auto& f : factors_) {
    if (f.slots < 0) throw std::invalid_argument("negative slot count");
    slots_ += f.slots;
    std::vector<std::vector<int>> t;
    enumerate_factor(n, f, t);
    int size = 1;
    for (int s = 0; s < f.slots; ++s) size *= n;
    std::vector<int> offs(static_cast<std::size_t>(size), -1);
    for (std::size_t i = 0; i < t.size(); ++i) offs[static_cast<std::size_t>(encode(t[i], 0, t[i].size(), n))] = static_cast<int>(i);
    factor_offsets_.push_back(std::move(offs));
    per.push_back(std::move(t));
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t f = factors_.size(); f-- > 1;)
    strides_[f - 1] = strides_[f] * static_cast<int>(per[f].size());
  tuples_.push_back({});
  for (const auto& t : per) {
    std::vector<std::vector<int>> next;
    for (const auto& a : tuples_)
      for (const auto& b : t) {
        auto c = a;
        c.insert(c.end(), b.begin(), b.end());
        next.push_back(std::move(c));
      }
    tuples_ = std::move(next);
  }
  free_pos_.assign(tuples_.size(), -1);
}

std::optional<std::pair<int, int>> TensorSpace::locate(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != slots_) throw DimensionMismatch("index tuple has wrong length");
  int coord = 0;
  int sign = 1;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const auto& fac = factors_[f];
    std::vector<int> part(idx.begin() + static_cast<long>(pos), idx.begin() + static_cast<long>(pos) + fac.slots);
    for (int v : part)
      if (v < 0 || v >= n_) throw std::out_of_range("index out of range");
    if (fac.kind == FactorKind::Alt) {
      const int s = permutation_sign(part);
      if (s == 0) return std::nullopt;
      sign *= s;
      std::sort(part.begin(), part.end());
    } else if (fac.kind == FactorKind::Sym) {
      std::sort(part.begin(), part.end());
    }
    const int local = factor_offsets_[f][static_cast<std::size_t>(encode(part, 0, part.size(), n_))];
    coord += local * strides_[f];
    pos += static_cast<std::size_t>(fac.slots);
  }
  return std::make_pair(coord, sign);
}

std::string TensorSpace::tuple_label(int coord) const {
  const auto& t = tuple(coord);
  std::string s;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (f) s += ',';
    for (int k = 0; k < factors_[f].slots; ++k) s += std::to_string(t[pos++] + 1);
  }
  return s;
}

void TensorSpace::add_constraint(const std::vector<std::pair<std::vector<int>, Rational>>& terms) {
  std::vector<SparseEntry> e;
  for (const auto& [idx, c] : terms) {
    auto loc = locate(idx);
    if (!loc) continue;
    e.push_back({loc->first, c * loc->second});
  }
  add_constraint_row(kernels::make_row(std::move(e)));
}

void TensorSpace::add_constraint_row(SparseRow row) {
  if (finalized_) throw std::logic_error("tensor space already finalized");
  if (!row.empty()) pending_.push_back(std::move(row));
}

void TensorSpace::finalize() {
  if (finalized_) return;
  const int A = ambient_dim();
  // Reverse the column order so pivots land on the latest coordinates and the
  // lexicographically earliest ones stay free.
  std::vector<SparseRow> rev;
  rev.reserve(pending_.size());
  for (const auto& r : pending_) {
    std::vector<SparseEntry> e;
    for (const auto& x : r) e.push_back({A - 1 - x.col, x.val});
    rev.push_back(kernels::make_row(std::move(e)));
  }
  const auto ech = kernels::reduced_echelon(rev, A, kernels::Exec::Serial);
  std::vector<char> pivot(static_cast<std::size_t>(A), 0);
  for (const auto& r : ech.rows) {
    std::vector<SparseEntry> e;
    for (const auto& x : r) e.push_back({A - 1 - x.col, x.val});
    constraints_.push_back(kernels::make_row(std::move(e)));
  }
  for (int p : ech.pivots) pivot[static_cast<std::size_t>(A - 1 - p)] = 1;
  for (int c = 0; c < A; ++c)
    if (!pivot[static_cast<std::size_t>(c)]) {
      free_pos_[static_cast<std::size_t>(c)] = static_cast<int>(free_.size());
      free_.push_back(c);
    }
  expansion_.assign(static_cast<std::size_t>(A), {});
  for (int c : free_) expansion_[static_cast<std::size_t>(c)] = {{free_pos_[static_cast<std::size_t>(c)], 1}};
  for (std::size_t i = 0; i < ech.rows.size(); ++i) {
    const int p = A - 1 - ech.pivots[i];
    std::vector<SparseEntry> e;
    for (std::size_t k = 1; k < ech.rows[i].size(); ++k) {
      const int c = A - 1 - ech.rows[i][k].col;
      e.push_back({free_pos_[static_cast<std::size_t>(c)], -ech.rows[i][k].val});
    }
    expansion_[static_cast<std::size_t>(p)] = kernels::make_row(std::move(e));
  }
  pending_.clear();
  finalized_ = true;
}

std::vector<Rational> TensorSpace::expand(const std::vector<Rational>& free_coords) const {
  if (static_cast<int>(free_coords.size()) != dim()) throw DimensionMismatch("wrong number of free coordinates");
  std::vector<Rational> out(static_cast<std::size_t>(ambient_dim()), 0);
  for (int a = 0; a < ambient_dim(); ++a)
    for (const auto& e : expansion_[static_cast<std::size_t>(a)])
      out[static_cast<std::size_t>(a)] += e.val * free_coords[static_cast<std::size_t>(e.col)];
  return out;
}

std::vector<Rational> TensorSpace::restrict_to_free(const std::vector<Rational>& ambient) const {
  if (static_cast<int>(ambient.size()) != ambient_dim()) throw DimensionMismatch("wrong ambient length");
  std::vector<Rational> out;
  out.reserve(free_.size());
  for (int c : free_) out.push_back(ambient[static_cast<std::size_t>(c)]);
  return out;
}

bool TensorSpace::satisfies_constraints(const std::vector<Rational>& ambient) const {
  if (static_cast<int>(ambient.size()) != ambient_dim()) throw DimensionMismatch("wrong ambient length");
  for (const auto& r : constraints_) {
    Rational s = 0;
    for (const auto& e : r) s += e.val * ambient[static_cast<std::size_t>(e.col)];
    if (s != 0) return false;
  }
  return true;
}

BundleBasis BundleBasis::of(TensorSpacePtr space) {
  BundleBasis b;
  b.label = space->label();
  for (int c : space->free_components()) b.elements.push_back(space->label() + "[" + space->tuple_label(c) + "]");
  b.space = std::move(space);
  return b;
}

BundleBasis BundleBasis::generic(std::string label, int dim, const std::string& prefix) {
  BundleBasis b;
  b.label = std::move(label);
  for (int i = 0; i < dim; ++i) b.elements.push_back(prefix + std::to_string(i + 1));
  return b;
}

// ------------------------------------------------------------ standard fibres

TensorSpacePtr tangent_space(int n) {
  auto s = std::make_shared<TensorSpace>("T", n, std::vector<TensorFactor>{{FactorKind::Full, 1}});
  s->finalize();
  return s;
}

TensorSpacePtr exterior_space(int n, int r) {
  if (r < 0 || r > n) throw std::out_of_range("exterior degree out of range");
  auto s = std::make_shared<TensorSpace>("Lambda" + std::to_string(r), n,
                                         std::vector<TensorFactor>{{FactorKind::Alt, r}});
  s->finalize();
  return s;
}

TensorSpacePtr sym2_space(int n) {
  auto s = std::make_shared<TensorSpace>("S2", n, std::vector<TensorFactor>{{FactorKind::Sym, 2}});
  s->finalize();
  return s;
}

TensorSpacePtr trace_free_sym2_space(int n, const ConstantMetric& metric) {
  if (metric.n() != n) throw DimensionMismatch("metric dimension");
  auto s = std::make_shared<TensorSpace>("S2_0", n, std::vector<TensorFactor>{{FactorKind::Sym, 2}});
  std::vector<std::pair<std::vector<int>, Rational>> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (metric.upper(i, j) != 0) t.push_back({{i, j}, metric.upper(i, j)});
  s->add_constraint(t);
  s->finalize();
  return s;
}

namespace {

void add_riemann_constraints(TensorSpace& s, int n) {
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          s.add_constraint({{{k, l, i, j}, 1}, {{i, j, k, l}, -1}});
          s.add_constraint({{{k, l, i, j}, 1}, {{k, i, j, l}, 1}, {{k, j, l, i}, 1}});
        }
}

std::shared_ptr<TensorSpace> alt2_alt2(const std::string& label, int n) {
  return std::make_shared<TensorSpace>(label, n,
                                       std::vector<TensorFactor>{{FactorKind::Alt, 2}, {FactorKind::Alt, 2}});
}

}  // namespace

TensorSpacePtr riemann_candidate_space(int n) {
  if (n < 2) throw std::invalid_argument("Riemann candidate needs n >= 2");
  auto s = alt2_alt2("F1", n);
  add_riemann_constraints(*s, n);
  s->finalize();
  return s;
}

TensorSpacePtr weyl_candidate_space(int n, const ConstantMetric& metric) {
  if (n < 3) throw std::invalid_argument("Weyl candidate needs n >= 3");
  if (metric.n() != n) throw DimensionMismatch("metric dimension");
  auto s = alt2_alt2("W", n);
  add_riemann_constraints(*s, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<std::pair<std::vector<int>, Rational>> t;
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k)
          if (metric.upper(r, k) != 0) t.push_back({{k, i, r, j}, metric.upper(r, k)});
      s->add_constraint(t);
    }
  s->finalize();
  return s;
}

TensorSpacePtr bianchi_target_space(int n) {
  if (n < 3) throw std::invalid_argument("Bianchi target needs n >= 3");
  auto s = std::make_shared<TensorSpace>("F2", n,
                                         std::vector<TensorFactor>{{FactorKind::Alt, 2}, {FactorKind::Alt, 3}});
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c)
          for (int d = c + 1; d < n; ++d)
            s->add_constraint({{{k, a, b, c, d}, 1}, {{k, b, a, c, d}, -1}, {{k, c, a, b, d}, 1}, {{k, d, a, b, c}, -1}});
  s->finalize();
  return s;
}

TensorSpacePtr lanczos_constraint_space(int n) {
  if (n < 2) throw std::invalid_argument("Lanczos space needs n >= 2");
  auto s = std::make_shared<TensorSpace>("L", n,
                                         std::vector<TensorFactor>{{FactorKind::Alt, 2}, {FactorKind::Full, 1}});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s->add_constraint({{{i, j, k}, 1}, {{j, k, i}, 1}, {{k, i, j}, 1}});
  s->finalize();
  return s;
}

// ------------------------------------------------------------ dense helpers

QMatrix qzero(int rows, int cols) {
  return QMatrix(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(cols), 0));
}

QMatrix qidentity(int n) {
  QMatrix m = qzero(n, n);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return m;
}

int qcols(const QMatrix& a, int fallback) { return a.empty() ? fallback : static_cast<int>(a.front().size()); }

QMatrix qmul(const QMatrix& a, const QMatrix& b) {
  const std::size_t inner = a.empty() ? b.size() : a.front().size();
  if (inner != b.size()) throw DimensionMismatch("matrix product shape mismatch");
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  QMatrix c(a.size(), std::vector<Rational>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

QMatrix qsub(const QMatrix& a, const QMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("matrix difference shape mismatch");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw DimensionMismatch("matrix difference shape mismatch");
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  }
  return c;
}

bool qis_zero(const QMatrix& a) {
  for (const auto& r : a)
    for (const auto& v : r)
      if (v != 0) return false;
  return true;
}

int qrank(const QMatrix& a) {
  if (a.empty()) return 0;
  std::vector<SparseRow> rows;
  for (const auto& r : a) {
    std::vector<SparseEntry> e;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0) e.push_back({static_cast<int>(j), r[j]});
    rows.push_back(std::move(e));
  }
  return kernels::rank_of(rows, static_cast<int>(a.front().size()));
}

// ------------------------------------------------------------ splitting

std::vector<Rational> ricci_contraction(const TensorSpace& R, const std::vector<Rational>& ambient,
                                        const ConstantMetric& metric) {
  const int n = R.n();
  auto S = sym2_space(n);
  std::vector<Rational> out(static_cast<std::size_t>(S->ambient_dim()), 0);
  for (int l = 0; l < n; ++l)
    for (int j = l; j < n; ++j) {
      Rational s = 0;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          if (metric.upper(k, i) == 0) continue;
          auto loc = R.locate({k, l, i, j});
          if (!loc) continue;
          s += metric.upper(k, i) * loc->second * ambient[static_cast<std::size_t>(loc->first)];
        }
      out[static_cast<std::size_t>(S->locate({l, j})->first)] = s;
    }
  return out;
}

namespace {

std::vector<Rational> basis_ambient(const TensorSpace& s, int f) {
  std::vector<Rational> e(static_cast<std::size_t>(s.dim()), 0);
  e[static_cast<std::size_t>(f)] = 1;
  return s.expand(e);
}

// Ambient Alt2(x)Alt2 vector of (1/(n-2)) P.omega - trP/(2(n-1)(n-2)) omega.omega.
std::vector<Rational> ricci_part(const TensorSpace& R, const std::vector<std::vector<Rational>>& P,
                                 const ConstantMetric& g) {
  const int n = R.n();
  Rational tr = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += g.upper(i, j) * P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const Rational a = Rational(1) / (n - 2);
  const Rational b = tr / (2 * (n - 1) * (n - 2));
  auto w = [&](int x, int y) -> const Rational& { return g.lower(x, y); };
  auto p = [&](int x, int y) -> const Rational& { return P[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; };
  std::vector<Rational> out(static_cast<std::size_t>(R.ambient_dim()), 0);
  for (int c = 0; c < R.ambient_dim(); ++c) {
    const auto& t = R.tuple(c);
    const int k = t[0], l = t[1], i = t[2], j = t[3];
    Rational v = a * (w(k, i) * p(l, j) + w(l, j) * p(k, i) - w(k, j) * p(l, i) - w(l, i) * p(k, j));
    v -= b * 2 * (w(k, i) * w(l, j) - w(k, j) * w(l, i));
    out[static_cast<std::size_t>(c)] = v;
  }
  return out;
}

}  // namespace

SplittingMaps split_riemann(int n, const ConstantMetric& metric) {
  if (n < 3) throw std::invalid_argument("splitting needs n >= 3");
  if (metric.n() != n) throw DimensionMismatch("metric dimension");
  SplittingMaps m;
  m.riemann = riemann_candidate_space(n);
  m.ricci = sym2_space(n);
  m.weyl = weyl_candidate_space(n, metric);
  const auto& R = *m.riemann;
  const auto& S = *m.ricci;
  const auto& W = *m.weyl;
  const int dr = R.dim(), ds = S.dim(), dw = W.dim();

  m.project_ricci = qzero(ds, dr);
  std::vector<std::vector<Rational>> r_amb;
  for (int f = 0; f < dr; ++f) {
    r_amb.push_back(basis_ambient(R, f));
    const auto ric = ricci_contraction(R, r_amb.back(), metric);
    for (int s = 0; s < ds; ++s) m.project_ricci[static_cast<std::size_t>(s)][static_cast<std::size_t>(f)] = ric[static_cast<std::size_t>(S.free_components()[static_cast<std::size_t>(s)])];
  }

  m.inject_ricci = qzero(dr, ds);
  for (int s = 0; s < ds; ++s) {
    const auto& t = S.tuple(S.free_components()[static_cast<std::size_t>(s)]);
    std::vector<std::vector<Rational>> P(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), 0));
    P[static_cast<std::size_t>(t[0])][static_cast<std::size_t>(t[1])] = 1;
    P[static_cast<std::size_t>(t[1])][static_cast<std::size_t>(t[0])] = 1;
    const auto amb = ricci_part(R, P, metric);
    if (!R.satisfies_constraints(amb)) throw std::logic_error("Ricci part is not a Riemann candidate");
    const auto v = R.restrict_to_free(amb);
    for (int f = 0; f < dr; ++f) m.inject_ricci[static_cast<std::size_t>(f)][static_cast<std::size_t>(s)] = v[static_cast<std::size_t>(f)];
  }

  m.inject_weyl = qzero(dr, dw);
  for (int w = 0; w < dw; ++w) {
    const auto amb = basis_ambient(W, w);
    const auto v = R.restrict_to_free(amb);
    for (int f = 0; f < dr; ++f) m.inject_weyl[static_cast<std::size_t>(f)][static_cast<std::size_t>(w)] = v[static_cast<std::size_t>(f)];
  }

  m.project_weyl = qzero(dw, dr);
  const QMatrix ricci_of_r = qmul(m.inject_ricci, m.project_ricci);
  for (int f = 0; f < dr; ++f) {
    std::vector<Rational> coords(static_cast<std::size_t>(dr), 0);
    for (int g = 0; g < dr; ++g) coords[static_cast<std::size_t>(g)] = (g == f ? 1 : 0) - ricci_of_r[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)];
    const auto amb = R.expand(coords);
    if (!W.satisfies_constraints(amb)) throw std::logic_error("Weyl part is not trace-free");
    const auto v = W.restrict_to_free(amb);
    for (int w = 0; w < dw; ++w) m.project_weyl[static_cast<std::size_t>(w)][static_cast<std::size_t>(f)] = v[static_cast<std::size_t>(w)];
  }
  return m;
}

// ------------------------------------------------------------ Hodge star

namespace {

Rational minor_det(const ConstantMetric& g, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::size_t k = rows.size();
  if (k == 0) return 1;
  QMatrix a(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = g.upper(rows[i], cols[j]);
  Rational det = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && a[p][c] == 0) ++p;
    if (p == k) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      if (a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace

QMatrix hodge_star(int n, int k, const ConstantMetric& metric) {
  if (k < 0 || k > n) throw std::out_of_range("form degree out of range");
  if (metric.n() != n) throw DimensionMismatch("metric dimension");
  auto src = exterior_space(n, k);
  auto dst = exterior_space(n, n - k);
  QMatrix h = qzero(dst->ambient_dim(), src->ambient_dim());
  for (int J = 0; J < dst->ambient_dim(); ++J) {
    const auto& jt = dst->tuple(J);
    for (int Ip = 0; Ip < src->ambient_dim(); ++Ip) {
      const auto& ip = src->tuple(Ip);
      std::vector<int> all = jt;
      all.insert(all.end(), ip.begin(), ip.end());
      const int eps = permutation_sign(all);
      if (eps == 0) continue;
      // a^{I'} = sum_I det(omega^{I' I}) a_I
      for (int I = 0; I < src->ambient_dim(); ++I) {
        const Rational m = minor_det(metric, ip, src->tuple(I));
        if (m != 0) h[static_cast<std::size_t>(J)][static_cast<std::size_t>(I)] += eps * m;
      }
    }
  }
  return h;
}

QMatrix hodge_relabel(const TensorSpace& source, int factor, const TensorSpace& target, const ConstantMetric& metric) {
  const int n = source.n();
  if (target.n() != n) throw DimensionMismatch("relabel between different dimensions");
  const auto& sf = source.factors();
  const auto& tf = target.factors();
  if (factor < 0 || factor >= static_cast<int>(sf.size()) || sf.size() != tf.size())
    throw std::invalid_argument("unsupported source shape for relabelling");
  const auto& fs = sf[static_cast<std::size_t>(factor)];
  const auto& ft = tf[static_cast<std::size_t>(factor)];
  const bool alt_ok = fs.kind == FactorKind::Alt && ft.slots == n - fs.slots &&
                      (ft.kind == FactorKind::Alt || (ft.kind == FactorKind::Full && ft.slots == 1));
  if (!alt_ok) throw std::invalid_argument("unsupported source shape for relabelling");
  for (std::size_t f = 0; f < sf.size(); ++f)
    if (static_cast<int>(f) != factor && (sf[f].kind != tf[f].kind || sf[f].slots != tf[f].slots))
      throw std::invalid_argument("unsupported source shape for relabelling");

  const QMatrix star = hodge_star(n, fs.slots, metric);
  auto alt_src = exterior_space(n, fs.slots);
  auto alt_dst = exterior_space(n, n - fs.slots);
  int offset = 0;
  for (int f = 0; f < factor; ++f) offset += sf[static_cast<std::size_t>(f)].slots;

  QMatrix m = qzero(target.ambient_dim(), source.ambient_dim());
  for (int c = 0; c < source.ambient_dim(); ++c) {
    const auto& t = source.tuple(c);
    std::vector<int> part(t.begin() + offset, t.begin() + offset + fs.slots);
    const int I = alt_src->locate(part)->first;
    for (int J = 0; J < alt_dst->ambient_dim(); ++J) {
      const Rational& v = star[static_cast<std::size_t>(J)][static_cast<std::size_t>(I)];
      if (v == 0) continue;
      std::vector<int> out(t.begin(), t.begin() + offset);
      const auto& jt = alt_dst->tuple(J);
      out.insert(out.end(), jt.begin(), jt.end());
      out.insert(out.end(), t.begin() + offset + fs.slots, t.end());
      auto loc = target.locate(out);
      if (!loc) continue;
      m[static_cast<std::size_t>(loc->first)][static_cast<std::size_t>(c)] += v * loc->second;
    }
  }
  return m;
}

}  // namespace diffseq
