#include "diffseq/groebner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <random>
#include <unordered_map>

namespace diffseq {

using kernels::Exec;
using kernels::PivotSet;
using kernels::ReduceMode;
using kernels::SparseEntry;
using kernels::SparseRow;

namespace {

int initial_degree_cap() {
  if (const char* env = std::getenv("DIFFSEQ_DEGREE_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 64) return static_cast<int>(v);
  }
  return 12;
}

std::atomic<int>& cap_storage() {
  static std::atomic<int> cap{initial_degree_cap()};
  return cap;
}

}  // namespace

int degree_cap() { return cap_storage().load(); }

void set_degree_cap(int cap) {
  if (cap < 1 || cap > 64) throw std::invalid_argument("degree cap must lie in [1, 64]");
  cap_storage().store(cap);
}

// ---------------------------------------------------------------- vectors

bool ModuleVector::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const RationalPoly& p) { return p.is_zero(); });
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o) {
  if (o.rank() != rank()) throw DimensionMismatch("module vectors of different rank");
  for (std::size_t k = 0; k < comps.size(); ++k) comps[k] += o.comps[k];
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& o) {
  if (o.rank() != rank()) throw DimensionMismatch("module vectors of different rank");
  for (std::size_t k = 0; k < comps.size(); ++k) comps[k] -= o.comps[k];
  return *this;
}

ModuleVector ModuleVector::scaled(const Rational& c) const {
  ModuleVector out = *this;
  for (auto& p : out.comps) p *= c;
  return out;
}

ModuleVector ModuleVector::times(const RationalPoly& p) const {
  ModuleVector out = *this;
  for (auto& q : out.comps) q = q * p;
  return out;
}

ModuleVector ModuleVector::times_monomial(const MultiIndex& m, const Rational& c) const {
  ModuleVector out;
  out.comps.reserve(comps.size());
  for (const auto& q : comps) out.comps.push_back(q.times_monomial(m, c));
  return out;
}

std::string ModuleVector::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (k) s += ", ";
    s += comps[k].to_string("chi");
  }
  return s + ")";
}

std::vector<int> infer_shifts(int rank, const std::vector<ModuleVector>& vectors) {
  std::vector<int> shift(static_cast<std::size_t>(rank), 0);
  std::vector<char> known(static_cast<std::size_t>(rank), 0);
  // each vector links its nonzero components; propagate until stable
  std::vector<std::vector<std::pair<int, int>>> links;  // per vector: (comp, degree)
  for (const auto& v : vectors) {
    if (v.rank() != rank) throw DimensionMismatch("vector rank differs from ambient rank");
    std::vector<std::pair<int, int>> l;
    for (int k = 0; k < rank; ++k) {
      const auto& p = v[k];
      if (p.is_zero()) continue;
      if (!p.is_homogeneous()) throw NotHomogeneous("component " + std::to_string(k) + " is not homogeneous");
      l.emplace_back(k, p.degree());
    }
    links.push_back(std::move(l));
  }
  std::vector<int> group(static_cast<std::size_t>(rank), -1);
  int groups = 0;
  for (int start = 0; start < rank; ++start) {
    if (known[static_cast<std::size_t>(start)]) continue;
    known[static_cast<std::size_t>(start)] = 1;
    group[static_cast<std::size_t>(start)] = groups;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& l : links) {
        // find an anchor already assigned in this group
        int anchor = -1;
        for (const auto& [k, deg] : l)
          if (group[static_cast<std::size_t>(k)] == groups) {
            anchor = k;
            break;
          }
        if (anchor < 0) continue;
        int total = 0;
        for (const auto& [k, deg] : l)
          if (k == anchor) total = deg + shift[static_cast<std::size_t>(k)];
        for (const auto& [k, deg] : l) {
          const int want = total - deg;
          if (group[static_cast<std::size_t>(k)] == groups) {
            if (shift[static_cast<std::size_t>(k)] != want) throw NotHomogeneous("no consistent component shifts");
          } else {
            group[static_cast<std::size_t>(k)] = groups;
            known[static_cast<std::size_t>(k)] = 1;
            shift[static_cast<std::size_t>(k)] = want;
            changed = true;
          }
        }
      }
    }
    ++groups;
  }
  for (int g = 0; g < groups; ++g) {
    int lo = 0;
    bool first = true;
    for (int k = 0; k < rank; ++k)
      if (group[static_cast<std::size_t>(k)] == g && (first || shift[static_cast<std::size_t>(k)] < lo)) {
        lo = shift[static_cast<std::size_t>(k)];
        first = false;
      }
    for (int k = 0; k < rank; ++k)
      if (group[static_cast<std::size_t>(k)] == g) shift[static_cast<std::size_t>(k)] -= lo;
  }
  return shift;
}

// ---------------------------------------------------------- presentation

GradedPresentation::GradedPresentation(int n, int ambient_rank, std::vector<ModuleVector> gens,
                                       std::vector<int> shifts, std::vector<int> zero_degrees)
    : n_(n), rank_(ambient_rank), shifts_(std::move(shifts)), gens_(std::move(gens)) {
  if (ambient_rank < 0) throw std::invalid_argument("negative ambient rank");
  if (shifts_.empty()) shifts_.assign(static_cast<std::size_t>(ambient_rank), 0);
  if (static_cast<int>(shifts_.size()) != ambient_rank) throw DimensionMismatch("shift vector has wrong length");
  if (!zero_degrees.empty() && zero_degrees.size() != gens_.size())
    throw DimensionMismatch("zero-degree list has wrong length");
  degrees_.reserve(gens_.size());
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    const auto& v = gens_[g];
    if (v.rank() != ambient_rank) throw DimensionMismatch("generator rank differs from ambient rank");
    int deg = -1;
    for (int k = 0; k < ambient_rank; ++k) {
      const auto& p = v[k];
      if (p.n() != n && !(p.is_zero() && p.n() == 0)) throw DimensionMismatch("generator has wrong variable count");
      for (const auto& t : p.terms()) {
        const int td = t.mono.degree() + shifts_[static_cast<std::size_t>(k)];
        if (deg < 0) deg = td;
        if (td != deg) throw NotHomogeneous("generator " + std::to_string(g) + " is not homogeneous");
      }
    }
    if (deg < 0) deg = zero_degrees.empty() ? 0 : zero_degrees[g];
    degrees_.push_back(deg);
  }
}

GradedPresentation GradedPresentation::with_inferred_shifts(int n, int ambient_rank, std::vector<ModuleVector> gens) {
  auto shifts = infer_shifts(ambient_rank, gens);
  return GradedPresentation(n, ambient_rank, std::move(gens), std::move(shifts));
}

std::map<int, int> GradedPresentation::degree_histogram() const {
  std::map<int, int> h;
  for (std::size_t g = 0; g < gens_.size(); ++g)
    if (!gens_[g].is_zero()) ++h[degrees_[g]];
  return h;
}

// ------------------------------------------------------------ term order

int compare_module_terms(const MultiIndex& am, int ac, const MultiIndex& bm, int bc, const std::vector<int>& shifts) {
  const int ta = am.degree() + shifts[static_cast<std::size_t>(ac)];
  const int tb = bm.degree() + shifts[static_cast<std::size_t>(bc)];
  if (ta != tb) return ta > tb ? 1 : -1;
  const auto c = compare_monomials(am, bm);
  if (c != std::strong_ordering::equal) return c == std::strong_ordering::greater ? 1 : -1;
  if (ac != bc) return ac < bc ? 1 : -1;
  return 0;
}

ModuleTerm leading_term(const ModuleVector& v, const std::vector<int>& shifts) {
  int best = -1;
  for (int k = 0; k < v.rank(); ++k) {
    if (v[k].is_zero()) continue;
    if (best < 0 || compare_module_terms(v[k].leading().mono, k, v[best].leading().mono, best, shifts) > 0) best = k;
  }
  if (best < 0) throw std::invalid_argument("leading term of zero vector");
  return {v[best].leading().mono, best, v[best].leading().coef};
}

namespace {

/// Column layout of the degree-d part of a shifted free module, largest term first.
class SliceIndex {
 public:
  SliceIndex() = default;
  SliceIndex(int n, const std::vector<int>& shifts, int d) : n_(n) {
    const int rank = static_cast<int>(shifts.size());
    maps_.resize(static_cast<std::size_t>(rank));
    for (int k = 0; k < rank; ++k) {
      const int e = d - shifts[static_cast<std::size_t>(k)];
      if (e < 0) continue;
      for (const auto& m : monomials_of_degree(n, e)) keys_.emplace_back(m, k);
    }
    std::stable_sort(keys_.begin(), keys_.end(), [&](const auto& a, const auto& b) {
      return compare_module_terms(a.first, a.second, b.first, b.second, shifts) > 0;
    });
    for (std::size_t c = 0; c < keys_.size(); ++c)
      maps_[static_cast<std::size_t>(keys_[c].second)].emplace(keys_[c].first, static_cast<int>(c));
  }

  int size() const { return static_cast<int>(keys_.size()); }
  int column(const MultiIndex& m, int comp) const {
    const auto& mp = maps_[static_cast<std::size_t>(comp)];
    auto it = mp.find(m);
    return it == mp.end() ? -1 : it->second;
  }
  const std::pair<MultiIndex, int>& key(int col) const { return keys_[static_cast<std::size_t>(col)]; }

 private:
  int n_ = 0;
  std::vector<std::pair<MultiIndex, int>> keys_;
  std::vector<std::unordered_map<MultiIndex, int, MultiIndexHash>> maps_;
};

SparseRow vector_to_row(const ModuleVector& v, const MultiIndex& u, const SliceIndex& idx) {
  std::vector<SparseEntry> e;
  for (int k = 0; k < v.rank(); ++k)
    for (const auto& t : v[k].terms()) {
      const int c = idx.column(u * t.mono, k);
      if (c < 0) throw std::logic_error("term outside slice");
      e.push_back({c, t.coef});
    }
  return kernels::make_row(std::move(e));
}

ModuleVector row_to_vector(const SparseRow& r, const SliceIndex& idx, int n, int rank, int offset = 0) {
  std::vector<std::vector<Term>> terms(static_cast<std::size_t>(rank));
  for (const auto& e : r) {
    const auto& [m, k] = idx.key(e.col - offset);
    terms[static_cast<std::size_t>(k)].push_back({m, e.val});
  }
  ModuleVector v;
  v.comps.reserve(static_cast<std::size_t>(rank));
  for (auto& t : terms) v.comps.push_back(RationalPoly::from_terms(n, std::move(t)));
  return v;
}

struct EngineResult {
  std::vector<ModuleVector> gb;
  std::vector<ModuleTerm> leading;
  std::vector<ModuleVector> syz;
  std::vector<int> syz_degrees;
};

int pair_bound(const std::vector<ModuleTerm>& lts, const std::vector<int>& shifts, int done, int bound) {
  std::map<int, std::vector<const MultiIndex*>> by_comp;
  for (const auto& t : lts) by_comp[t.comp].push_back(&t.mono);
  for (const auto& [comp, ms] : by_comp) {
    const int sh = shifts[static_cast<std::size_t>(comp)];
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i + 1; j < ms.size(); ++j) {
        const MultiIndex l = ms[i]->lcm(*ms[j]);
        const int td = l.degree() + sh;
        if (td <= done || td <= bound) continue;
        bool redundant = false;
        for (std::size_t k = 0; k < ms.size() && !redundant; ++k) {
          if (k == i || k == j || !ms[k]->divides(l)) continue;
          if (ms[i]->lcm(*ms[k]) != l && ms[j]->lcm(*ms[k]) != l) redundant = true;
        }
        if (!redundant) bound = td;
      }
  }
  return bound;
}

EngineResult run_engine(const GradedPresentation& P, bool track, Exec exec) {
  EngineResult out;
  const int n = P.n();
  const int rank = P.ambient_rank();
  const auto& gens = P.generators();
  if (gens.empty()) return out;
  const auto& degs = P.degrees();
  const int dmin = *std::min_element(degs.begin(), degs.end());
  const int dmax = *std::max_element(degs.begin(), degs.end());
  int bound = dmax;
  const int cap = degree_cap();

  SliceIndex prev_tags;
  std::vector<SparseRow> prev_syz;
  bool have_prev = false;

  for (int d = dmin; d <= bound; ++d) {
    if (d > cap)
      throw DegreeCapExceeded("slice degree " + std::to_string(d) + " exceeds degree cap " + std::to_string(cap));
    const SliceIndex S(n, P.shifts(), d);
    const int ms = S.size();
    SliceIndex T;
    if (track) T = SliceIndex(n, degs, d);
    const int ts = track ? T.size() : 0;

    std::vector<SparseRow> rows;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (degs[g] > d) continue;
      for (const auto& u : monomials_of_degree(n, d - degs[g])) {
        SparseRow r = vector_to_row(gens[g], u, S);
        if (track) r.push_back({ms + T.column(u, static_cast<int>(g)), 1});
        if (!r.empty()) rows.push_back(std::move(r));
      }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SparseRow& a, const SparseRow& b) {
      if (a.front().col != b.front().col) return a.front().col < b.front().col;
      return a.size() < b.size();
    });
    const PivotSet ps = kernels::echelonize(rows, ms + ts, exec);

    PivotSet main_ps(ms);
    std::vector<SparseRow> syz_rows;
    for (const auto& r : ps.rows()) {
      if (r.front().col < ms) {
        SparseRow t;
        for (const auto& e : r)
          if (e.col < ms) t.push_back(e);
        main_ps.add_reduced(std::move(t));
      } else {
        SparseRow t;
        t.reserve(r.size());
        for (const auto& e : r) t.push_back({e.col - ms, e.val});
        syz_rows.push_back(std::move(t));
      }
    }

    const auto main_rref = kernels::reduced_echelon(main_ps, exec);
    const std::size_t before = out.leading.size();
    for (std::size_t i = 0; i < main_rref.rows.size(); ++i) {
      const auto& [m, k] = S.key(main_rref.pivots[i]);
      bool divisible = false;
      for (std::size_t j = 0; j < before && !divisible; ++j)
        divisible = out.leading[j].comp == k && out.leading[j].mono.divides(m);
      if (divisible) continue;
      out.gb.push_back(row_to_vector(main_rref.rows[i], S, n, rank));
      out.leading.push_back({m, k, 1});
    }

    if (track) {
      const auto syz_rref = kernels::reduced_echelon(syz_rows, ts, exec);
      PivotSet lower(ts);
      if (have_prev) {
        std::vector<SparseRow> lifted;
        for (const auto& s : prev_syz)
          for (int v = 0; v < n; ++v) {
            std::vector<SparseEntry> e;
            e.reserve(s.size());
            for (const auto& ent : s) {
              const auto& [u, g] = prev_tags.key(ent.col);
              e.push_back({T.column(u.raised(v), g), ent.val});
            }
            lifted.push_back(kernels::make_row(std::move(e)));
          }
        lower = kernels::echelonize(lifted, ts, exec);
      }
      kernels::Accumulator acc(ts);
      for (const auto& s : syz_rref.rows) {
        SparseRow r = lower.reduce(s, ReduceMode::Full, acc);
        if (r.empty()) continue;
        SparseRow copy = r;
        lower.add_reduced(std::move(r));
        const Rational inv = 1 / copy.front().val;
        for (auto& e : copy) e.val *= inv;
        out.syz.push_back(row_to_vector(copy, T, n, static_cast<int>(gens.size())));
        out.syz_degrees.push_back(d);
      }
      prev_syz = syz_rref.rows;
      prev_tags = std::move(T);
      have_prev = true;
    }

    bound = std::max(dmax, pair_bound(out.leading, P.shifts(), d, bound));
  }
  return out;
}

}  // namespace

GroebnerBasis reduced_groebner(const GradedPresentation& gens, Exec exec) {
  if (gens.ambient_rank() < 1) throw std::invalid_argument("ambient rank must be positive");
  auto res = run_engine(gens, false, exec);
  std::vector<std::size_t> order(res.gb.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_module_terms(res.leading[a].mono, res.leading[a].comp, res.leading[b].mono, res.leading[b].comp,
                                gens.shifts()) < 0;
  });
  GroebnerBasis gb;
  gb.n = gens.n();
  gb.ambient_rank = gens.ambient_rank();
  gb.shifts = gens.shifts();
  for (auto i : order) {
    gb.elements.push_back(std::move(res.gb[i]));
    gb.leading.push_back(res.leading[i]);
  }
  return gb;
}

GroebnerBasis reduced_groebner(const GradedPresentation& gens) { return reduced_groebner(gens, kernels::default_exec()); }

ModuleVector normal_form(const ModuleVector& v, const GroebnerBasis& gb) {
  if (v.rank() != gb.ambient_rank) throw DimensionMismatch("vector rank differs from basis rank");
  ModuleVector p = v;
  ModuleVector rem(gb.n, gb.ambient_rank);
  while (!p.is_zero()) {
    const ModuleTerm lt = leading_term(p, gb.shifts);
    std::size_t j = 0;
    for (; j < gb.elements.size(); ++j)
      if (gb.leading[j].comp == lt.comp && gb.leading[j].mono.divides(lt.mono)) break;
    if (j < gb.elements.size()) {
      p -= gb.elements[j].times_monomial(lt.mono.quotient(gb.leading[j].mono), lt.coef / gb.leading[j].coef);
    } else {
      const auto t = RationalPoly::monomial(lt.mono, lt.coef);
      rem[lt.comp] += t;
      p[lt.comp] -= t;
    }
  }
  return rem;
}

GradedPresentation syzygies(const GradedPresentation& gens, Exec exec) {
  auto res = run_engine(gens, true, exec);
  return GradedPresentation(gens.n(), gens.size(), std::move(res.syz), gens.degrees());
}

GradedPresentation syzygies(const GradedPresentation& gens) { return syzygies(gens, kernels::default_exec()); }

GradedPresentation minimal_graded_generators(const GradedPresentation& P) {
  const int n = P.n();
  std::vector<std::size_t> order;
  for (std::size_t g = 0; g < P.generators().size(); ++g)
    if (!P.generators()[g].is_zero()) order.push_back(g);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return P.degree(static_cast<int>(a)) < P.degree(static_cast<int>(b)); });
  std::vector<ModuleVector> kept;
  std::size_t i = 0;
  while (i < order.size()) {
    const int d = P.degree(static_cast<int>(order[i]));
    if (d > degree_cap())
      throw DegreeCapExceeded("generator degree " + std::to_string(d) + " exceeds degree cap");
    const SliceIndex S(n, P.shifts(), d);
    PivotSet ps(S.size());
    for (std::size_t j = 0; j < i; ++j) {
      const int e = P.degree(static_cast<int>(order[j]));
      for (const auto& u : monomials_of_degree(n, d - e)) ps.insert(vector_to_row(P.generators()[order[j]], u, S));
    }
    for (; i < order.size() && P.degree(static_cast<int>(order[i])) == d; ++i) {
      const auto& g = P.generators()[order[i]];
      if (ps.insert(vector_to_row(g, MultiIndex(n), S))) kept.push_back(g);
    }
  }
  return GradedPresentation(n, P.ambient_rank(), std::move(kept), P.shifts());
}

bool module_contains(const GroebnerBasis& gb, const GradedPresentation& sub) {
  for (const auto& g : sub.generators())
    if (!normal_form(g, gb).is_zero()) return false;
  return true;
}

bool module_equality(const GradedPresentation& a, const GradedPresentation& b) {
  if (a.ambient_rank() != b.ambient_rank() || a.n() != b.n()) return false;
  if (a.ambient_rank() == 0) return true;
  return module_contains(reduced_groebner(b), a) && module_contains(reduced_groebner(a), b);
}

// ------------------------------------------------------------------ rank

int rank_at_point(const PolyMatrix& m, std::span<const Rational> point) {
  if (m.empty()) return 0;
  const int cols = static_cast<int>(m.front().size());
  std::vector<SparseRow> rows;
  for (const auto& r : m) {
    std::vector<SparseEntry> e;
    for (int c = 0; c < cols; ++c) {
      Rational v = r[static_cast<std::size_t>(c)].evaluate(point);
      if (v != 0) e.push_back({c, std::move(v)});
    }
    rows.push_back(std::move(e));
  }
  return kernels::rank_of(rows, cols);
}

int bareiss_rank(const PolyMatrix& m0, int n) {
  if (m0.empty() || m0.front().empty()) return 0;
  const std::size_t R = m0.size();
  const std::size_t C = m0.front().size();
  const std::size_t full = std::min(R, C);
  // Bareiss elimination with full pivoting, sparsest pivot first.
  PolyMatrix m = m0;
  RationalPoly prev = RationalPoly::constant(n, 1);
  std::vector<std::size_t> rowp(R), colp(C);
  for (std::size_t i = 0; i < R; ++i) rowp[i] = i;
  for (std::size_t j = 0; j < C; ++j) colp[j] = j;
  std::size_t k = 0;
  for (; k < full; ++k) {
    std::size_t bi = R, bj = C, best = 0;
    for (std::size_t i = k; i < R; ++i)
      for (std::size_t j = k; j < C; ++j) {
        const auto& p = m[rowp[i]][colp[j]];
        if (p.is_zero()) continue;
        const std::size_t cost = p.terms().size() * 64 + static_cast<std::size_t>(p.degree());
        if (bi == R || cost < best) {
          bi = i;
          bj = j;
          best = cost;
        }
      }
    if (bi == R) break;
    std::swap(rowp[k], rowp[bi]);
    std::swap(colp[k], colp[bj]);
    const RationalPoly piv = m[rowp[k]][colp[k]];
    for (std::size_t i = k + 1; i < R; ++i) {
      auto& row = m[rowp[i]];
      const RationalPoly f = row[colp[k]];
      for (std::size_t j = k + 1; j < C; ++j) {
        RationalPoly v = piv * row[colp[j]];
        if (!f.is_zero()) v -= f * m[rowp[k]][colp[j]];
        row[colp[j]] = v.exact_divide(prev);
      }
      row[colp[k]] = RationalPoly(n);
    }
    prev = piv;
  }
  return static_cast<int>(k);
}

int generic_rank(const PolyMatrix& m0, int n) {
  if (m0.empty()) return 0;
  const std::size_t R = m0.size();
  const std::size_t C = m0.front().size();
  if (C == 0) return 0;
  const std::size_t full = std::min(R, C);
  // A point evaluation certifies a lower bound; if it is already maximal we are done.
  std::mt19937_64 rng(0x5eed1234ULL);
  std::uniform_int_distribution<int> dist(2, 97);
  std::vector<Rational> pt(static_cast<std::size_t>(n));
  for (auto& x : pt) x = dist(rng);
  const int lower = rank_at_point(m0, pt);
  if (static_cast<std::size_t>(lower) == full) return lower;

  // Column relations are exact kernel vectors, so their rank at pt bounds the
  // kernel dimension from below; matching bounds certify the rank.
  try {
    std::vector<ModuleVector> cols;
    for (std::size_t c = 0; c < C; ++c) {
      ModuleVector v(n, static_cast<int>(R));
      for (std::size_t r = 0; r < R; ++r) v[static_cast<int>(r)] = m0[r][c];
      cols.push_back(std::move(v));
    }
    const auto ker = syzygies(GradedPresentation::with_inferred_shifts(n, static_cast<int>(R), std::move(cols)));
    PolyMatrix km;
    for (const auto& g : ker.generators()) km.push_back(g.comps);
    if (lower + rank_at_point(km, pt) == static_cast<int>(C)) return lower;
  } catch (const NotHomogeneous&) {
  } catch (const DegreeCapExceeded&) {
  }

  return bareiss_rank(m0, n);
}

}  // namespace diffseq
