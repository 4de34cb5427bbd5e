#include "diffseq/spencer.hpp"

#include "diffseq/builders.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace diffseq {

using kernels::SparseEntry;
using kernels::SparseRow;

namespace {

using PositionMap = std::unordered_map<MultiIndex, int, MultiIndexHash>;

const PositionMap& monomial_positions(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<PositionMap>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) {
    slot = std::make_unique<PositionMap>();
    const auto& mons = monomials_of_degree(n, d);
    for (std::size_t i = 0; i < mons.size(); ++i) (*slot)[mons[i]] = static_cast<int>(i);
  }
  return *slot;
}

int position_of(const MultiIndex& mu) { return monomial_positions(mu.size(), mu.degree()).at(mu); }

// sign of dx^i ^ dx^I against dx^J where J = I + {i} sorted
int wedge_sign(int i, const std::vector<int>& I) {
  int before = 0;
  for (int x : I)
    if (x < i) ++before;
  return before % 2 == 0 ? 1 : -1;
}

int tuple_index(int n, const std::vector<int>& t) {
  const auto& all = increasing_tuples(n, static_cast<int>(t.size()));
  auto it = std::lower_bound(all.begin(), all.end(), t);
  return static_cast<int>(it - all.begin());
}

std::vector<int> with_inserted(const std::vector<int>& I, int i) {
  std::vector<int> J = I;
  J.insert(std::upper_bound(J.begin(), J.end(), i), i);
  return J;
}

bool has(const std::vector<int>& I, int i) { return std::binary_search(I.begin(), I.end(), i); }

SymbolSpace zero_symbol(int n, int m, int q) {
  const int amb = m * static_cast<int>(count_monomials(n, q));
  std::vector<SparseRow> rows;
  for (int c = 0; c < amb; ++c) rows.push_back({{c, 1}});
  return SymbolSpace(n, m, q, std::move(rows));
}

}  // namespace

const std::vector<std::vector<int>>& increasing_tuples(int n, int r) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<std::vector<int>>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, r}];
  if (!slot) {
    slot = std::make_unique<std::vector<std::vector<int>>>();
    if (r >= 0 && r <= n) {
      std::vector<int> t(static_cast<std::size_t>(r));
      for (int i = 0; i < r; ++i) t[static_cast<std::size_t>(i)] = i;
      while (true) {
        slot->push_back(t);
        int p = r - 1;
        while (p >= 0 && t[static_cast<std::size_t>(p)] == n - r + p) --p;
        if (p < 0) break;
        ++t[static_cast<std::size_t>(p)];
        for (int k = p + 1; k < r; ++k) t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] + 1;
      }
    }
  }
  return *slot;
}

SymbolSpace::SymbolSpace(int n, int m, int q, std::vector<SparseRow> annihilator)
    : n_(n), m_(m), q_(q), per_(static_cast<int>(count_monomials(n, q))) {
  ambient_ = m_ * per_;
  ann_ = kernels::reduced_echelon(annihilator, ambient_);
  basis_ = kernels::nullspace(ann_);
}

SymbolSpace SymbolSpace::full(int n, int m, int q) { return SymbolSpace(n, m, q, {}); }

bool SymbolSpace::contains(const SparseRow& v) const {
  for (const auto& a : ann_.rows)
    if (kernels::dot(a, v) != 0) return false;
  return true;
}

int SymbolSpace::column(const MultiIndex& mu, int k) const { return k * per_ + position_of(mu); }

const MultiIndex& SymbolSpace::monomial_of(int col) const {
  return monomials_of_degree(n_, q_)[static_cast<std::size_t>(col % per_)];
}

SymbolSpace symbol_of(const OperatorMatrix& D) {
  const int q = D.order();
  if (q == 0) throw std::invalid_argument("symbol of an order-0 operator: zero principal part");
  SymbolSpace shape = SymbolSpace::full(D.n(), D.cols(), q);
  std::vector<SparseRow> rows;
  for (int a = 0; a < D.rows(); ++a) {
    std::vector<SparseEntry> e;
    for (int k = 0; k < D.cols(); ++k)
      for (const auto& t : D.at(a, k).terms())
        if (t.mono.degree() == q) e.push_back({shape.column(t.mono, k), t.coef});
    auto r = kernels::make_row(std::move(e));
    if (!r.empty()) rows.push_back(std::move(r));
  }
  return SymbolSpace(D.n(), D.cols(), q, std::move(rows));
}

SymbolSpace prolong(const SymbolSpace& g) {
  const int n = g.n();
  SymbolSpace up = SymbolSpace::full(n, g.fibre(), g.q() + 1);
  std::vector<SparseRow> rows;
  for (const auto& a : g.annihilator().rows)
    for (int i = 0; i < n; ++i) {
      std::vector<SparseEntry> e;
      for (const auto& x : a) e.push_back({up.column(g.monomial_of(x.col).raised(i), g.component_of(x.col)), x.val});
      rows.push_back(kernels::make_row(std::move(e)));
    }
  return SymbolSpace(n, g.fibre(), g.q() + 1, std::move(rows));
}

std::vector<SymbolSpace> prolongation_chain(const SymbolSpace& g, int max_order) {
  std::vector<SymbolSpace> chain{g};
  while (chain.back().dim() > 0 && chain.back().q() < max_order) chain.push_back(prolong(chain.back()));
  return chain;
}

int DeltaComplexSlice::rank() const { return kernels::rank_of(matrix, domain_dim); }

DeltaComplexSlice delta_map(int r, const SymbolSpace& g) {
  const int n = g.n();
  DeltaComplexSlice s;
  s.r = r;
  s.q = g.q();
  const auto& dom_tuples = increasing_tuples(n, r);
  s.domain_dim = static_cast<int>(dom_tuples.size()) * g.dim();
  if (g.q() == 0 || r + 1 > n) return s;
  const SymbolSpace low = SymbolSpace::full(n, g.fibre(), g.q() - 1);
  s.codomain_dim = static_cast<int>(binomial(n, r + 1)) * low.ambient_dim();
  s.matrix.assign(static_cast<std::size_t>(s.codomain_dim), {});
  for (std::size_t I = 0; I < dom_tuples.size(); ++I)
    for (int j = 0; j < g.dim(); ++j) {
      const int dcol = static_cast<int>(I) * g.dim() + j;
      for (const auto& x : g.basis()[static_cast<std::size_t>(j)]) {
        const MultiIndex& mu = g.monomial_of(x.col);
        const int k = g.component_of(x.col);
        for (int i = 0; i < n; ++i) {
          if (mu[i] == 0 || has(dom_tuples[I], i)) continue;
          const int J = tuple_index(n, with_inserted(dom_tuples[I], i));
          const int row = J * low.ambient_dim() + low.column(mu.lowered(i), k);
          Rational v = x.val;
          if (wedge_sign(i, dom_tuples[I]) < 0) v = -v;
          s.matrix[static_cast<std::size_t>(row)].push_back({dcol, std::move(v)});
        }
      }
    }
  for (auto& row : s.matrix) row = kernels::make_row(std::move(row));
  return s;
}

bool delta_squares_to_zero(int r, const SymbolSpace& g) {
  if (g.q() < 2) return true;
  const auto first = delta_map(r, g);
  const auto second = delta_map(r + 1, SymbolSpace::full(g.n(), g.fibre(), g.q() - 1));
  for (const auto& row : second.matrix) {
    SparseRow acc;
    for (const auto& e : row) acc = kernels::add_rows(acc, first.matrix[static_cast<std::size_t>(e.col)], e.val);
    if (!acc.empty()) return false;
  }
  return true;
}

int delta_cohomology(const SymbolSpace& g_q, const SymbolSpace& g_q1, int r) {
  const auto out = delta_map(r, g_q);
  const int ker = out.domain_dim - out.rank();
  const int im = r >= 1 ? delta_map(r - 1, g_q1).rank() : 0;
  return ker - im;
}

std::vector<int> delta_cohomology_dims(const OperatorMatrix& D, int r_max, int q) {
  const SymbolSpace g = symbol_of(D);
  int top = q;
  auto chain = prolongation_chain(g, std::max(q, g.q() + g.n() + 2));
  if (top < 0) {
    top = g.q();
    if (chain.back().dim() == 0)
      for (const auto& s : chain)
        if (s.dim() > 0) top = s.q();
  }
  while (chain.back().q() < top + 1) chain.push_back(prolong(chain.back()));
  const auto& gq = chain[static_cast<std::size_t>(top - g.q())];
  const auto& gq1 = chain[static_cast<std::size_t>(top + 1 - g.q())];
  std::vector<int> dims;
  for (int r = 0; r <= r_max; ++r) dims.push_back(delta_cohomology(gq, gq1, r));
  return dims;
}

bool full_delta_exact(int n, int m, int s) {
  if (s < 1) return true;
  int prev_rank = 0;
  for (int r = 0; r <= std::min(n, s); ++r) {
    const auto d = delta_map(r, SymbolSpace::full(n, m, s - r));
    const int rank = d.rank();
    if (d.domain_dim - rank != prev_rank) return false;
    prev_rank = rank;
  }
  return true;
}

int JetSystem::dim_R() const {
  int d = 0;
  for (int k = 0; k <= q; ++k) d += symbols[static_cast<std::size_t>(k)].dim();
  return d;
}

namespace {

JetSystem system_from_symbol(std::string name, const OperatorMatrix& D, int q) {
  JetSystem s;
  s.name = std::move(name);
  s.n = D.n();
  s.m = D.cols();
  s.q = q;
  s.symbols.push_back(SymbolSpace::full(s.n, s.m, 0));
  SymbolSpace g = symbol_of(D);
  if (g.q() != 1) throw std::logic_error("first-order system expected");
  s.symbols.push_back(g);
  while (static_cast<int>(s.symbols.size()) < q + 2) s.symbols.push_back(prolong(s.symbols.back()));
  return s;
}

}  // namespace

JetSystem killing_system(int n, const ConstantMetric& metric) { return system_from_symbol("killing", killing(n, metric), 2); }

JetSystem conformal_system(int n, const ConstantMetric& metric) {
  return system_from_symbol("conformal-killing", conformal_killing(n, metric), 3);
}

JetSystem trivial_jet_system(int n, int m, int q) {
  JetSystem s;
  s.name = "jet";
  s.n = n;
  s.m = m;
  s.q = q;
  for (int k = 0; k <= q + 1; ++k) s.symbols.push_back(zero_symbol(n, m, k));
  return s;
}

JetSystem jet_system_named(const std::string& name, int n, const ConstantMetric& metric) {
  if (name == "killing") return killing_system(n, metric);
  if (name == "conformal-killing" || name == "conformal_killing") return conformal_system(n, metric);
  throw std::invalid_argument("no involutive jet system for '" + name + "'");
}

JanetSpencerDims janet_spencer_bundle_dims(const JetSystem& sys, int r) {
  if (r < 0 || r > sys.n) throw std::out_of_range("form degree out of range");
  long jq = 0;
  for (int k = 0; k <= sys.q; ++k) jq += static_cast<long>(count_monomials(sys.n, k));
  jq *= sys.m;
  const long wedge = static_cast<long>(binomial(sys.n, r));
  JanetSpencerDims d;
  d.spencer_ambient = wedge * jq;
  d.spencer = wedge * sys.dim_R();
  if (r >= 1) {
    d.spencer_ambient -= delta_map(r - 1, SymbolSpace::full(sys.n, sys.m, sys.q + 1)).rank();
    d.spencer -= delta_map(r - 1, sys.symbols[static_cast<std::size_t>(sys.q + 1)]).rank();
  }
  d.janet = d.spencer_ambient - d.spencer;
  return d;
}

std::vector<long> SpencerDiagram::row_sums() const {
  std::vector<long> out;
  for (const auto& row : rows) {
    long s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) s += (j % 2 == 0 ? 1 : -1) * row[j];
    out.push_back(s);
  }
  return out;
}

bool SpencerDiagram::rows_balanced() const {
  for (long s : row_sums())
    if (s != 0) return false;
  return true;
}

SpencerDiagram spencer_diagram(int n, const std::vector<int>& symbol_dims, const std::vector<int>& bundle_dims,
                               const std::vector<int>& orders) {
  if (bundle_dims.size() != orders.size() + 1) throw std::invalid_argument("need one more bundle than operators");
  SpencerDiagram d;
  d.n = n;
  for (int o : orders) d.top += o;
  std::vector<int> sj;
  int s = d.top;
  for (std::size_t j = 0; j < bundle_dims.size(); ++j) {
    sj.push_back(s);
    if (j < orders.size()) s -= orders[j];
  }
  d.column_labels.push_back("g");
  d.column_labels.push_back("E");
  for (std::size_t j = 1; j < bundle_dims.size(); ++j) d.column_labels.push_back("F" + std::to_string(j - 1));
  for (int r = 0; r <= std::min(n, d.top); ++r) {
    const long w = static_cast<long>(binomial(n, r));
    std::vector<long> row;
    const int gk = d.top - r;
    row.push_back(gk < static_cast<int>(symbol_dims.size()) ? w * symbol_dims[static_cast<std::size_t>(gk)] : 0);
    for (std::size_t j = 0; j < bundle_dims.size(); ++j) {
      const int deg = sj[j] - r;
      row.push_back(deg < 0 ? 0 : w * static_cast<long>(count_monomials(n, deg)) * bundle_dims[j]);
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

namespace {

int jet_count(int n, int q) {
  int c = 0;
  for (int d = 0; d <= q; ++d) c += static_cast<int>(count_monomials(n, d));
  return c;
}

int jet_position(const MultiIndex& mu) {
  int off = 0;
  for (int d = 0; d < mu.degree(); ++d) off += static_cast<int>(count_monomials(mu.size(), d));
  return off + position_of(mu);
}

}  // namespace

JetForm JetForm::zero(int n, int m, int r, int q) {
  JetForm f;
  f.n = n;
  f.m = m;
  f.r = r;
  f.q = q;
  f.comps.assign(binomial(n, r) * static_cast<std::size_t>(m * jet_count(n, q)), RationalPoly(n));
  return f;
}

int JetForm::index(int I, int k, const MultiIndex& mu) const { return (I * m + k) * jet_count(n, q) + jet_position(mu); }

bool JetForm::is_zero() const {
  for (const auto& c : comps)
    if (!c.is_zero()) return false;
  return true;
}

JetForm spencer_operator(const JetForm& f) {
  if (f.q < 1) throw std::invalid_argument("Spencer operator needs jets of order >= 1");
  JetForm out = JetForm::zero(f.n, f.m, f.r + 1, f.q - 1);
  const auto& src = increasing_tuples(f.n, f.r);
  for (std::size_t I = 0; I < src.size(); ++I)
    for (int i = 0; i < f.n; ++i) {
      if (has(src[I], i)) continue;
      const int J = tuple_index(f.n, with_inserted(src[I], i));
      const Rational sign = wedge_sign(i, src[I]);
      const MultiIndex di = MultiIndex::unit(f.n, i);
      for (int k = 0; k < f.m; ++k)
        for (int d = 0; d <= out.q; ++d)
          for (const auto& mu : monomials_of_degree(f.n, d)) {
            RationalPoly v = f.comps[static_cast<std::size_t>(f.index(static_cast<int>(I), k, mu))].derivative(di);
            v -= f.comps[static_cast<std::size_t>(f.index(static_cast<int>(I), k, mu.raised(i)))];
            out.comps[static_cast<std::size_t>(out.index(J, k, mu))] += v * sign;
          }
    }
  return out;
}

JetForm jet_prolongation(const std::vector<RationalPoly>& section, int q) {
  if (section.empty()) throw std::invalid_argument("empty section");
  const int n = section.front().n();
  JetForm f = JetForm::zero(n, static_cast<int>(section.size()), 0, q);
  for (int k = 0; k < f.m; ++k)
    for (int d = 0; d <= q; ++d)
      for (const auto& mu : monomials_of_degree(n, d))
        f.comps[static_cast<std::size_t>(f.index(0, k, mu))] = section[static_cast<std::size_t>(k)].derivative(mu);
  return f;
}

}  // namespace diffseq
