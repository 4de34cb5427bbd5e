#include "diffseq/kernels/echelon.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diffseq::kernels {

namespace {

std::atomic<Exec> g_default_exec{
#ifdef _OPENMP
    Exec::Parallel
#else
    Exec::Serial
#endif
};

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace

Exec default_exec() { return g_default_exec.load(); }
void set_default_exec(Exec exec) { g_default_exec.store(exec); }

Accumulator::Accumulator(int ncols) : val_(static_cast<std::size_t>(ncols)) {}

PivotSet::PivotSet(int ncols) : ncols_(ncols), pivot_of_col_(static_cast<std::size_t>(ncols), -1) {}

SparseRow PivotSet::reduce(const SparseRow& v, ReduceMode mode, Accumulator& acc) const {
  if (v.empty()) return {};
  auto& val = acc.val_;
  mpq_ptr tmp = acc.tmp_.get_mpq_t();
  int lo = v.front().col;
  int hi = v.back().col;
  for (const auto& e : v) val[static_cast<std::size_t>(e.col)] = e.val;
  int c = lo;
  for (; c <= hi; ++c) {
    mpq_ptr x = val[static_cast<std::size_t>(c)].get_mpq_t();
    if (mpq_sgn(x) == 0) continue;
    const int p = pivot_of_col_[static_cast<std::size_t>(c)];
    if (p < 0) {
      if (mode == ReduceMode::Leading) break;
      continue;
    }
    const SparseRow& pr = rows_[static_cast<std::size_t>(p)];
    for (std::size_t k = 1; k < pr.size(); ++k) {
      const int col = pr[k].col;
      mpq_mul(tmp, x, pr[k].val.get_mpq_t());
      mpq_ptr y = val[static_cast<std::size_t>(col)].get_mpq_t();
      mpq_sub(y, y, tmp);
      if (col > hi) hi = col;
    }
    mpq_set_ui(x, 0, 1);
  }
  SparseRow out;
  for (int j = (mode == ReduceMode::Leading ? c : lo); j <= hi; ++j) {
    Rational& y = val[static_cast<std::size_t>(j)];
    if (sgn(y) == 0) continue;
    out.push_back({j, Rational()});
    mpq_swap(out.back().val.get_mpq_t(), y.get_mpq_t());
  }
  return out;
}

SparseRow PivotSet::reduce(const SparseRow& v, ReduceMode mode) const {
  Accumulator acc(ncols_);
  return reduce(v, mode, acc);
}

bool PivotSet::add_reduced(SparseRow r) {
  if (r.empty()) return false;
  const int lead = r.front().col;
  if (pivot_of_col_[static_cast<std::size_t>(lead)] >= 0) throw std::logic_error("row is not reduced");
  if (r.front().val != 1) {
    const Rational inv = 1 / r.front().val;
    for (auto& e : r) e.val *= inv;
  }
  pivot_of_col_[static_cast<std::size_t>(lead)] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(r));
  return true;
}

bool PivotSet::insert(const SparseRow& v) { return add_reduced(reduce(v, ReduceMode::Leading)); }

std::vector<int> PivotSet::pivot_columns() const {
  std::vector<int> cols;
  cols.reserve(rows_.size());
  for (const auto& r : rows_) cols.push_back(r.front().col);
  std::sort(cols.begin(), cols.end());
  return cols;
}

PivotSet echelonize(const std::vector<SparseRow>& rows, int ncols, Exec exec) {
  PivotSet ps(ncols);
  Accumulator acc(ncols);
  if (exec == Exec::Serial || rows.size() < 2) {
    for (const auto& v : rows) ps.add_reduced(ps.reduce(v, ReduceMode::Leading, acc));
    return ps;
  }
  // Rows of a batch are reduced in parallel against the pivots known at the
  // start of the batch, then finished and inserted in input order.  Leading
  // reduction resumes exactly where the serial loop would be, so the pivot
  // rows coincide with the serial ones.
  const int threads = max_threads();
  std::vector<Accumulator> accs;
  accs.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) accs.emplace_back(ncols);
  const std::size_t batch = static_cast<std::size_t>(std::max(16, 8 * threads));
  std::vector<SparseRow> partial(batch);
  for (std::size_t start = 0; start < rows.size(); start += batch) {
    const std::size_t count = std::min(batch, rows.size() - start);
    const long long cnt = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < cnt; ++i) {
      partial[static_cast<std::size_t>(i)] =
          ps.reduce(rows[start + static_cast<std::size_t>(i)], ReduceMode::Leading,
                    accs[static_cast<std::size_t>(thread_id())]);
    }
    for (std::size_t i = 0; i < count; ++i) ps.add_reduced(ps.reduce(partial[i], ReduceMode::Leading, acc));
  }
  return ps;
}

PivotSet echelonize(const std::vector<SparseRow>& rows, int ncols) { return echelonize(rows, ncols, default_exec()); }

RowEchelon reduced_echelon(const PivotSet& ps, Exec exec) {
  const auto& src = ps.rows();
  std::vector<std::size_t> order(src.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return src[a].front().col < src[b].front().col; });
  RowEchelon out;
  out.ncols = ps.ncols();
  out.rows.resize(src.size());
  out.pivots.resize(src.size());
  auto finish = [&](std::size_t i, Accumulator& acc) {
    const SparseRow& r = src[order[i]];
    SparseRow tail(r.begin() + 1, r.end());
    SparseRow red = ps.reduce(tail, ReduceMode::Full, acc);
    SparseRow row;
    row.reserve(red.size() + 1);
    row.push_back({r.front().col, 1});
    for (auto& e : red) row.push_back(std::move(e));
    out.pivots[i] = r.front().col;
    out.rows[i] = std::move(row);
  };
  const long long cnt = static_cast<long long>(src.size());
  if (exec == Exec::Serial || cnt < 2) {
    Accumulator acc(ps.ncols());
    for (long long i = 0; i < cnt; ++i) finish(static_cast<std::size_t>(i), acc);
    return out;
  }
  const int threads = max_threads();
  std::vector<Accumulator> accs;
  accs.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) accs.emplace_back(ps.ncols());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < cnt; ++i) finish(static_cast<std::size_t>(i), accs[static_cast<std::size_t>(thread_id())]);
  return out;
}

RowEchelon reduced_echelon(const std::vector<SparseRow>& rows, int ncols, Exec exec) {
  return reduced_echelon(echelonize(rows, ncols, exec), exec);
}

RowEchelon reduced_echelon(const std::vector<SparseRow>& rows, int ncols) {
  return reduced_echelon(rows, ncols, default_exec());
}

int rank_of(const std::vector<SparseRow>& rows, int ncols) { return echelonize(rows, ncols).rank(); }

std::vector<SparseRow> nullspace(const RowEchelon& e) {
  std::vector<char> is_pivot(static_cast<std::size_t>(e.ncols), 0);
  for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
  std::map<int, SparseRow> by_free;
  for (int c = 0; c < e.ncols; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) by_free[c];
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    for (std::size_t k = 1; k < e.rows[r].size(); ++k) {
      const auto& ent = e.rows[r][k];
      by_free[ent.col].push_back({e.pivots[r], -ent.val});
    }
  }
  std::vector<SparseRow> out;
  out.reserve(by_free.size());
  for (auto& [f, v] : by_free) {
    v.push_back({f, 1});
    std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    out.push_back(std::move(v));
  }
  return out;
}

SparseRow make_row(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
  SparseRow out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().col == e.col) {
      out.back().val += e.val;
      if (out.back().val == 0) out.pop_back();
    } else if (e.val != 0) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

SparseRow scale_row(const SparseRow& r, const Rational& c) {
  if (c == 0) return {};
  SparseRow out = r;
  for (auto& e : out) e.val *= c;
  return out;
}

SparseRow add_rows(const SparseRow& a, const SparseRow& b, const Rational& scale_b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].col < a[i].col) {
      Rational v = b[j].val * scale_b;
      if (v != 0) out.push_back({b[j].col, std::move(v)});
      ++j;
    } else {
      Rational v = a[i].val + b[j].val * scale_b;
      if (v != 0) out.push_back({a[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

Rational dot(const SparseRow& a, const SparseRow& b) {
  Rational s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].col < b[j].col) {
      ++i;
    } else if (b[j].col < a[i].col) {
      ++j;
    } else {
      s += a[i].val * b[j].val;
      ++i;
      ++j;
    }
  }
  return s;
}

}  // namespace diffseq::kernels
