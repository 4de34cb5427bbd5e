#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diffseq/operator.hpp"

namespace diffseq {

/// Emits coefficient * (source component with the given full index tuple).
using Emit = std::function<void(const std::vector<int>& source_index, const RationalPoly& coef)>;
/// Writes the target component with the given full index tuple.
using Formula = std::function<void(const std::vector<int>& target_index, const Emit& emit)>;

/// Operator described componentwise on ambient tensor indices. Rows exist for
/// every ambient target coordinate; `restricted()` keeps the free ones.
struct FormulaImage {
  TensorSpacePtr source;
  TensorSpacePtr target;
  PolyMatrix ambient_rows;  // target ambient x source free
  // Number of constraint rows of the target whose combination of ambient rows is nonzero.
  int constraint_violations() const;
  OperatorMatrix restricted(int n, std::string name) const;
};

FormulaImage formula_image(int n, TensorSpacePtr source, TensorSpacePtr target, const Formula& f);

OperatorMatrix killing(int n, const ConstantMetric& metric);
OperatorMatrix conformal_killing(int n, const ConstantMetric& metric);
OperatorMatrix riemann_linearized(int n, const ConstantMetric& metric);
OperatorMatrix bianchi(int n);
OperatorMatrix ricci(int n, const ConstantMetric& metric);
OperatorMatrix einstein(int n, const ConstantMetric& metric);
OperatorMatrix exterior_derivative(int n, int r);
OperatorMatrix lanczos_candidate(int n);

FormulaImage riemann_image(int n, const ConstantMetric& metric);
FormulaImage lanczos_image(int n);
FormulaImage bianchi_image(int n);

/// Constant weight operator S2 -> ad(S2) of the metric pairing
/// <A, B> = omega^{ia} omega^{jb} A_ij B_ab written in i<=j coordinates.
OperatorMatrix sym2_pairing(int n, const ConstantMetric& metric);

/// Builder lookup by name: killing, conformal-killing, riemann, bianchi, ricci,
/// einstein, grad, curl, div, d<r>, lanczos.
OperatorMatrix build_named(const std::string& name, int n, const ConstantMetric& metric);
std::vector<std::string> builder_names();

}  // namespace diffseq
