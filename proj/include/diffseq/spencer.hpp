#pragma once

#include <string>
#include <vector>

#include "diffseq/operator.hpp"

namespace diffseq {

/// Increasing r-subsets of {0..n-1} in lexicographic order.
const std::vector<std::vector<int>>& increasing_tuples(int n, int r);

/// Coordinates of S_q T* (x) E: column k * count_monomials(n, q) + position of mu
/// in monomials_of_degree(n, q). Values are jet coordinates v^k_mu.
class SymbolSpace {
 public:
  SymbolSpace() = default;
  // Subspace cut out by the annihilator rows (any spanning set).
  SymbolSpace(int n, int m, int q, std::vector<kernels::SparseRow> annihilator);
  static SymbolSpace full(int n, int m, int q);

  int n() const { return n_; }
  int fibre() const { return m_; }
  int q() const { return q_; }
  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const kernels::RowEchelon& annihilator() const { return ann_; }
  const std::vector<kernels::SparseRow>& basis() const { return basis_; }
  bool contains(const kernels::SparseRow& v) const;

  int column(const MultiIndex& mu, int k) const;
  const MultiIndex& monomial_of(int col) const;
  int component_of(int col) const { return col / per_; }

 private:
  int n_ = 0, m_ = 0, q_ = 0, ambient_ = 0, per_ = 1;
  kernels::RowEchelon ann_;
  std::vector<kernels::SparseRow> basis_;
};

/// Kernel of the top-degree part of D acting on S_q T* (x) E.
SymbolSpace symbol_of(const OperatorMatrix& D);
/// g_{q+1} = (T* (x) g_q) cap (S_{q+1} T* (x) E).
SymbolSpace prolong(const SymbolSpace& g);
/// g_q, g_{q+1}, ... until the space vanishes or `max_order` is reached.
std::vector<SymbolSpace> prolongation_chain(const SymbolSpace& g, int max_order);

/// delta : Lambda^r T* (x) g_q -> Lambda^{r+1} T* (x) S_{q-1} T* (x) E,
/// delta(a (x) v) = sum_i dx^i ^ a (x) (i-contraction of v).
struct DeltaComplexSlice {
  int r = 0;
  int q = 0;
  int domain_dim = 0;
  int codomain_dim = 0;
  // codomain rows, domain columns
  std::vector<kernels::SparseRow> matrix;
  int rank() const;
};

DeltaComplexSlice delta_map(int r, const SymbolSpace& g);
/// Product of consecutive slices, expressed in ambient coordinates; zero iff delta o delta = 0.
bool delta_squares_to_zero(int r, const SymbolSpace& g);

/// dim H^r(g_q) for r = 0..r_max. With q < 0 the top nonzero order of the
/// symbol's prolongation chain is used (finite type), else D's order.
std::vector<int> delta_cohomology_dims(const OperatorMatrix& D, int r_max, int q = -1);
int delta_cohomology(const SymbolSpace& g_q, const SymbolSpace& g_q1, int r);

/// Exactness of 0 -> S_s(x)E -> T*(x)S_{s-1}(x)E -> ... at every interior node.
bool full_delta_exact(int n, int m, int s);

/// Involutive system R_q with its symbols g_0..g_{q+1} (g_0 is the E part of R_q).
struct JetSystem {
  std::string name;
  int n = 0;
  int m = 0;
  int q = 0;
  std::vector<SymbolSpace> symbols;
  int dim_R() const;
};

/// Killing prolonged to order 2, conformal Killing to order 3, or R_q = 0 inside J_q(E).
JetSystem killing_system(int n, const ConstantMetric& metric);
JetSystem conformal_system(int n, const ConstantMetric& metric);
JetSystem trivial_jet_system(int n, int m, int q);
JetSystem jet_system_named(const std::string& name, int n, const ConstantMetric& metric);

struct JanetSpencerDims {
  long janet = 0;    // F_r
  long spencer = 0;  // C_r
  long spencer_ambient = 0;  // C_r(E)
};
/// From 0 -> C_r -> C_r(E) -> F_r -> 0 with C_r = Lambda^r (x) R_q / delta(Lambda^{r-1} (x) g_{q+1}).
JanetSpencerDims janet_spencer_bundle_dims(const JetSystem& system, int r);

/// Fibre dimensions of the commutative diagram defining F_k from the chain
/// E -> F_0 -> ... -> F_k with the given orders. Row r holds
/// Lambda^r (x) g_{s-r}, then Lambda^r (x) S_{s_j - r} (x) F_j for each column.
struct SpencerDiagram {
  int n = 0;
  int top = 0;  // s
  std::vector<std::vector<long>> rows;
  std::vector<std::string> column_labels;
  // Alternating sum along every row.
  std::vector<long> row_sums() const;
  bool rows_balanced() const;
};

SpencerDiagram spencer_diagram(int n, const std::vector<int>& symbol_dims, const std::vector<int>& bundle_dims,
                               const std::vector<int>& orders);

/// Forms with values in J_q(E): component (I, k, mu) for increasing I, |mu| <= q.
struct JetForm {
  int n = 0, m = 0, r = 0, q = 0;
  std::vector<RationalPoly> comps;
  static JetForm zero(int n, int m, int r, int q);
  int index(int I, int k, const MultiIndex& mu) const;
  bool is_zero() const;
};

/// Spencer operator D = sum_i dx^i ^ (d_i - shift_i): Lambda^r (x) J_{q+1}(E) -> Lambda^{r+1} (x) J_q(E).
JetForm spencer_operator(const JetForm& f);
/// j_q of a section of E as a 0-form with values in J_q(E).
JetForm jet_prolongation(const std::vector<RationalPoly>& section, int q);

}  // namespace diffseq
