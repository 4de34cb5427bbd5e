#include "diffseq/operator.hpp"

#include <algorithm>

namespace diffseq {

OperatorMatrix::OperatorMatrix(int n, BundleBasis source, BundleBasis target, PolyMatrix entries, std::string name)
    : n_(n), source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)), name_(std::move(name)) {
  if (static_cast<int>(entries_.size()) != target_.dim()) throw DimensionMismatch("entry rows differ from target dim");
  for (auto& r : entries_) {
    if (static_cast<int>(r.size()) != source_.dim()) throw DimensionMismatch("entry columns differ from source dim");
    for (auto& p : r) {
      if (p.is_zero() && p.n() != n) p = RationalPoly(n);
      if (p.n() != n) throw DimensionMismatch("entry has wrong variable count");
    }
  }
}

OperatorMatrix OperatorMatrix::zero(int n, BundleBasis source, BundleBasis target, std::string name) {
  PolyMatrix e(static_cast<std::size_t>(target.dim()),
               std::vector<RationalPoly>(static_cast<std::size_t>(source.dim()), RationalPoly(n)));
  return OperatorMatrix(n, std::move(source), std::move(target), std::move(e), std::move(name));
}

OperatorMatrix OperatorMatrix::constant(int n, BundleBasis source, BundleBasis target, const QMatrix& m,
                                        std::string name) {
  if (static_cast<int>(m.size()) != target.dim()) throw DimensionMismatch("constant matrix rows");
  PolyMatrix e;
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != source.dim()) throw DimensionMismatch("constant matrix columns");
    std::vector<RationalPoly> r;
    for (const auto& v : row) r.push_back(RationalPoly::constant(n, v));
    e.push_back(std::move(r));
  }
  return OperatorMatrix(n, std::move(source), std::move(target), std::move(e), std::move(name));
}

int OperatorMatrix::order() const {
  int d = 0;
  for (const auto& r : entries_)
    for (const auto& p : r) d = std::max(d, p.degree());
  return d;
}

bool OperatorMatrix::is_zero() const {
  for (const auto& r : entries_)
    for (const auto& p : r)
      if (!p.is_zero()) return false;
  return true;
}

OperatorMatrix OperatorMatrix::with_bases(BundleBasis source, BundleBasis target) const {
  if (source.dim() != source_.dim() || target.dim() != target_.dim()) throw BasisMismatch("relabelled basis has wrong dim");
  OperatorMatrix out = *this;
  out.source_ = std::move(source);
  out.target_ = std::move(target);
  return out;
}

ModuleVector OperatorMatrix::row(int r) const { return ModuleVector(entries_[static_cast<std::size_t>(r)]); }

std::vector<ModuleVector> OperatorMatrix::row_vectors() const {
  std::vector<ModuleVector> v;
  v.reserve(entries_.size());
  for (int r = 0; r < rows(); ++r) v.push_back(row(r));
  return v;
}

GradedPresentation OperatorMatrix::row_presentation() const {
  return GradedPresentation::with_inferred_shifts(n_, cols(), row_vectors());
}

GradedPresentation OperatorMatrix::column_presentation() const {
  std::vector<ModuleVector> v;
  for (int c = 0; c < cols(); ++c) {
    ModuleVector col(n_, rows());
    for (int r = 0; r < rows(); ++r) col[r] = at(r, c);
    v.push_back(std::move(col));
  }
  return GradedPresentation::with_inferred_shifts(n_, rows(), std::move(v));
}

std::string adjoint_label(const std::string& label) {
  if (label.size() > 4 && label.rfind("ad(", 0) == 0 && label.back() == ')') {
    int depth = 0;
    bool outer = true;
    for (std::size_t i = 2; i + 1 < label.size(); ++i) {
      if (label[i] == '(') ++depth;
      if (label[i] == ')') --depth;
      if (depth == 0 && i > 2) {
        outer = false;
        break;
      }
    }
    if (outer) return label.substr(3, label.size() - 4);
  }
  return "ad(" + label + ")";
}

BundleBasis adjoint_basis(const BundleBasis& b) {
  BundleBasis a = b;
  a.label = adjoint_label(b.label);
  return a;
}

OperatorMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first, kernels::Exec exec) {
  if (!(second.source() == first.target()))
    throw BasisMismatch("cannot compose: source '" + second.source().label + "' differs from target '" +
                        first.target().label + "'");
  if (second.n() != first.n()) throw DimensionMismatch("composing operators of different dimension");
  const int n = first.n();
  const int R = second.rows(), M = second.cols(), C = first.cols();
  PolyMatrix e(static_cast<std::size_t>(R), std::vector<RationalPoly>(static_cast<std::size_t>(C), RationalPoly(n)));
  auto body = [&](int a) {
    for (int b = 0; b < M; ++b) {
      const auto& p = second.at(a, b);
      if (p.is_zero()) continue;
      for (int c = 0; c < C; ++c) {
        const auto& q = first.at(b, c);
        if (!q.is_zero()) e[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] += p * q;
      }
    }
  };
  if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int a = 0; a < R; ++a) body(a);
  } else {
    for (int a = 0; a < R; ++a) body(a);
  }
  std::string name;
  if (!second.name().empty() && !first.name().empty()) name = second.name() + "*" + first.name();
  return OperatorMatrix(n, first.source(), second.target(), std::move(e), std::move(name));
}

OperatorMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first) {
  return compose(second, first, kernels::default_exec());
}

OperatorMatrix adjoint(const OperatorMatrix& D) {
  const int n = D.n();
  PolyMatrix e(static_cast<std::size_t>(D.cols()),
               std::vector<RationalPoly>(static_cast<std::size_t>(D.rows()), RationalPoly(n)));
  for (int r = 0; r < D.rows(); ++r)
    for (int c = 0; c < D.cols(); ++c) e[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = D.at(r, c).negate_vars();
  OperatorMatrix out(n, adjoint_basis(D.target()), adjoint_basis(D.source()), std::move(e),
                     D.name().empty() ? std::string() : adjoint_label(D.name()));
  out.notes() = D.notes();
  return out;
}

OperatorMatrix operator_sum(const OperatorMatrix& a, const OperatorMatrix& b, const Rational& scale_b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) throw BasisMismatch("sum of operators on different bases");
  PolyMatrix e = a.entries();
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      e[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] += b.at(r, c) * scale_b;
  return OperatorMatrix(a.n(), a.source(), a.target(), std::move(e));
}

OperatorMatrix compatibility_conditions(const OperatorMatrix& D, kernels::Exec exec) {
  const int n = D.n();
  BundleBasis target;
  target.label = "CC(" + D.target().label + ")";
  PolyMatrix e;
  std::string degrees;
  if (D.rows() > 0) {
    const auto syz = syzygies(D.row_presentation(), exec);
    for (const auto& g : syz.generators()) {
      int deg = 0;
      for (const auto& p : g.comps) deg = std::max(deg, p.degree());
      target.elements.push_back("cc" + std::to_string(deg) + "_" + std::to_string(target.elements.size() + 1));
      if (!degrees.empty()) degrees += ",";
      degrees += std::to_string(deg);
      e.push_back(g.comps);
    }
  }
  OperatorMatrix out(n, D.target(), std::move(target), std::move(e),
                     D.name().empty() ? std::string() : "CC(" + D.name() + ")");
  out.notes()["generator_degrees"] = degrees;
  return out;
}

OperatorMatrix compatibility_conditions(const OperatorMatrix& D) {
  return compatibility_conditions(D, kernels::default_exec());
}

int differential_rank(const OperatorMatrix& D) { return generic_rank(D.entries(), D.n()); }

bool JetSection::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const RationalPoly& p) { return p.is_zero(); });
}

JetSection apply(const OperatorMatrix& D, const JetSection& s, kernels::Exec exec) {
  if (static_cast<int>(s.comps.size()) != D.cols()) throw BasisMismatch("section does not match operator source");
  const int n = D.n();
  JetSection out;
  out.comps.assign(static_cast<std::size_t>(D.rows()), RationalPoly(n));
  auto body = [&](int a) {
    RationalPoly acc(n);
    for (int k = 0; k < D.cols(); ++k) {
      const auto& sk = s.comps[static_cast<std::size_t>(k)];
      if (sk.is_zero()) continue;
      for (const auto& t : D.at(a, k).terms()) acc += sk.derivative(t.mono) * t.coef;
    }
    out.comps[static_cast<std::size_t>(a)] = std::move(acc);
  };
  if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int a = 0; a < D.rows(); ++a) body(a);
  } else {
    for (int a = 0; a < D.rows(); ++a) body(a);
  }
  return out;
}

JetSection apply(const OperatorMatrix& D, const JetSection& s) { return apply(D, s, kernels::default_exec()); }

}  // namespace diffseq
