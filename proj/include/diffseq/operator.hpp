#pragma once

#include <map>
#include <string>
#include <vector>

#include "diffseq/bundle.hpp"
#include "diffseq/groebner.hpp"

namespace diffseq {

class BasisMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constant-coefficient linear differential operator between trivial bundles.
/// Entry (a, k) holding chi^mu means eta_a picks up coeff * d_mu xi^k.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(int n, BundleBasis source, BundleBasis target, PolyMatrix entries, std::string name = {});
  static OperatorMatrix zero(int n, BundleBasis source, BundleBasis target, std::string name = {});
  // Order-0 operator from a constant matrix (target x source).
  static OperatorMatrix constant(int n, BundleBasis source, BundleBasis target, const QMatrix& m, std::string name = {});

  int n() const { return n_; }
  int rows() const { return target_.dim(); }
  int cols() const { return source_.dim(); }
  // max entry degree; 0 for the zero operator
  int order() const;
  bool is_zero() const;
  const BundleBasis& source() const { return source_; }
  const BundleBasis& target() const { return target_; }
  const PolyMatrix& entries() const { return entries_; }
  const RationalPoly& at(int r, int c) const {
    return entries_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  // Free-form conventions (factor normalisations, sign choices).
  std::map<std::string, std::string>& notes() { return notes_; }
  const std::map<std::string, std::string>& notes() const { return notes_; }

  OperatorMatrix with_bases(BundleBasis source, BundleBasis target) const;
  ModuleVector row(int r) const;
  std::vector<ModuleVector> row_vectors() const;
  /// Rows as a homogeneous presentation of a submodule of R^cols (shifts inferred).
  GradedPresentation row_presentation() const;
  /// Columns as vectors of R^rows; their relations form the right kernel.
  GradedPresentation column_presentation() const;

  bool same_entries(const OperatorMatrix& o) const { return entries_ == o.entries_; }
  bool operator==(const OperatorMatrix& o) const {
    return n_ == o.n_ && source_ == o.source_ && target_ == o.target_ && entries_ == o.entries_;
  }

 private:
  int n_ = 0;
  BundleBasis source_;
  BundleBasis target_;
  PolyMatrix entries_;
  std::string name_;
  std::map<std::string, std::string> notes_;
};

/// "ad(X)" labelling; ad(ad(X)) gives X back.
std::string adjoint_label(const std::string& label);
BundleBasis adjoint_basis(const BundleBasis& b);

OperatorMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first);
OperatorMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first, kernels::Exec exec);
OperatorMatrix adjoint(const OperatorMatrix& D);
OperatorMatrix operator_sum(const OperatorMatrix& a, const OperatorMatrix& b, const Rational& scale_b = 1);

/// Minimal generating compatibility conditions: rows are the minimal graded
/// generators of the row syzygies of D.
OperatorMatrix compatibility_conditions(const OperatorMatrix& D);
OperatorMatrix compatibility_conditions(const OperatorMatrix& D, kernels::Exec exec);

int differential_rank(const OperatorMatrix& D);

/// Polynomial section in x_1..x_n, one component per basis element.
struct JetSection {
  std::vector<RationalPoly> comps;
  bool is_zero() const;
  bool operator==(const JetSection&) const = default;
};

JetSection apply(const OperatorMatrix& D, const JetSection& s);
JetSection apply(const OperatorMatrix& D, const JetSection& s, kernels::Exec exec);

}  // namespace diffseq
