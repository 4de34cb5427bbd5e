#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffseq/kernels/echelon.hpp"
#include "diffseq/metric.hpp"

namespace diffseq {

using kernels::SparseRow;
using QMatrix = std::vector<std::vector<Rational>>;

enum class FactorKind { Full, Sym, Alt };

struct TensorFactor {
  FactorKind kind;
  int slots;
};

/// Subspace of a product of symmetric/exterior/plain tensor factors, cut out
/// by linear constraints. Ambient coordinates enumerate canonical index tuples
/// (i<=j for Sym, strictly increasing for Alt) factor by factor,
/// lexicographically.
class TensorSpace {
 public:
  TensorSpace(std::string label, int n, std::vector<TensorFactor> factors);

  const std::string& label() const { return label_; }
  int n() const { return n_; }
  int slots() const { return slots_; }
  const std::vector<TensorFactor>& factors() const { return factors_; }
  int ambient_dim() const { return static_cast<int>(tuples_.size()); }

  /// Ambient coordinate and sign of a full index tuple (0-based indices);
  /// nullopt when the component vanishes identically (repeated Alt index).
  std::optional<std::pair<int, int>> locate(const std::vector<int>& idx) const;
  const std::vector<int>& tuple(int coord) const { return tuples_[static_cast<std::size_t>(coord)]; }
  std::string tuple_label(int coord) const;

  // terms: (full index tuple, coefficient). Terms on vanishing components are dropped.
  void add_constraint(const std::vector<std::pair<std::vector<int>, Rational>>& terms);
  void add_constraint_row(SparseRow row);
  void finalize();

  int dim() const { return static_cast<int>(free_.size()); }
  int constraint_rank() const { return static_cast<int>(constraints_.size()); }
  const std::vector<SparseRow>& constraints() const { return constraints_; }
  /// Ambient coordinates kept as independent components, increasing.
  const std::vector<int>& free_components() const { return free_; }
  /// Position of an ambient coordinate among the free ones, or -1.
  int free_position(int coord) const { return free_pos_[static_cast<std::size_t>(coord)]; }
  /// One row per ambient coordinate: its value as a combination of free coordinates.
  const std::vector<SparseRow>& expansion() const { return expansion_; }

  std::vector<Rational> expand(const std::vector<Rational>& free_coords) const;
  std::vector<Rational> restrict_to_free(const std::vector<Rational>& ambient) const;
  bool satisfies_constraints(const std::vector<Rational>& ambient) const;

 private:
  std::string label_;
  int n_;
  int slots_ = 0;
  std::vector<TensorFactor> factors_;
  std::vector<std::vector<int>> tuples_;
  std::vector<std::vector<int>> factor_offsets_;
  std::vector<int> strides_;
  std::vector<SparseRow> pending_;
  std::vector<SparseRow> constraints_;
  std::vector<int> free_;
  std::vector<int> free_pos_;
  std::vector<SparseRow> expansion_;
  bool finalized_ = false;
};

using TensorSpacePtr = std::shared_ptr<const TensorSpace>;

/// Ordered labelled basis of a fibre; optionally backed by a tensor space whose
/// free components are the basis elements.
struct BundleBasis {
  std::string label;
  std::vector<std::string> elements;
  TensorSpacePtr space;

  int dim() const { return static_cast<int>(elements.size()); }
  bool operator==(const BundleBasis& o) const { return label == o.label && elements == o.elements; }
  static BundleBasis of(TensorSpacePtr space);
  static BundleBasis generic(std::string label, int dim, const std::string& prefix = "e");
};

// Standard fibres.
TensorSpacePtr tangent_space(int n);
TensorSpacePtr exterior_space(int n, int r);
TensorSpacePtr sym2_space(int n);
TensorSpacePtr trace_free_sym2_space(int n, const ConstantMetric& metric);
TensorSpacePtr riemann_candidate_space(int n);
TensorSpacePtr weyl_candidate_space(int n, const ConstantMetric& metric);
// Values of the Bianchi operator inside Alt2 (x) Alt3.
TensorSpacePtr bianchi_target_space(int n);
TensorSpacePtr lanczos_constraint_space(int n);

// Dense rational matrices.
QMatrix qzero(int rows, int cols);
QMatrix qidentity(int n);
QMatrix qmul(const QMatrix& a, const QMatrix& b);
QMatrix qsub(const QMatrix& a, const QMatrix& b);
bool qis_zero(const QMatrix& a);
int qrank(const QMatrix& a);
int qcols(const QMatrix& a, int fallback = 0);

struct SplittingMaps {
  TensorSpacePtr riemann;
  TensorSpacePtr ricci;
  TensorSpacePtr weyl;
  QMatrix inject_ricci;   // dim F1 x dim S2
  QMatrix project_ricci;  // dim S2 x dim F1
  QMatrix inject_weyl;    // dim F1 x dim W
  QMatrix project_weyl;   // dim W x dim F1
};

/// Ricci (+) Weyl decomposition of the Riemann candidate fibre.
SplittingMaps split_riemann(int n, const ConstantMetric& metric);

/// Contraction R_{lj} = omega^{ki} R_{kl,ij} on an ambient Alt2(x)Alt2 vector; S2 ambient output.
std::vector<Rational> ricci_contraction(const TensorSpace& riemann_like, const std::vector<Rational>& ambient,
                                        const ConstantMetric& metric);

/// Sign of the permutation sorting idx, 0 if an index repeats.
int permutation_sign(std::vector<int> idx);

/// Hodge star on Alt^k of R^n with epsilon_{1..n} = +1, raising with the metric:
/// (*a)_J = sum over increasing I of a^I eps_{J I}. Matrix of size C(n,n-k) x C(n,k).
QMatrix hodge_star(int n, int k, const ConstantMetric& metric);

/// Relabelling of an (Alt^k (x) W) fibre by the Hodge star on its Alt^k
/// factor (4-dimensional case: Alt^3 -> Alt^1). Returns matrix mapping
/// ambient coordinates of `source` to ambient coordinates of `target`.
QMatrix hodge_relabel(const TensorSpace& source, int factor, const TensorSpace& target, const ConstantMetric& metric);

}  // namespace diffseq
