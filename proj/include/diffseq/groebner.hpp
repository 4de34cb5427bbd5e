#pragma once

#include <map>
#include <string>
#include <vector>

#include "diffseq/kernels/echelon.hpp"
#include "diffseq/polynomial.hpp"

namespace diffseq {

class DegreeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHomogeneous : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Highest slice degree a Groebner/syzygy run may reach. Default 12, or the
// value of DIFFSEQ_DEGREE_CAP when set.
int degree_cap();
void set_degree_cap(int cap);

/// Element of the free module R^rank, R = Q[chi_1..chi_n].
struct ModuleVector {
  std::vector<RationalPoly> comps;

  ModuleVector() = default;
  ModuleVector(int n, int rank) : comps(static_cast<std::size_t>(rank), RationalPoly(n)) {}
  explicit ModuleVector(std::vector<RationalPoly> c) : comps(std::move(c)) {}

  int rank() const { return static_cast<int>(comps.size()); }
  bool is_zero() const;
  RationalPoly& operator[](int k) { return comps[static_cast<std::size_t>(k)]; }
  const RationalPoly& operator[](int k) const { return comps[static_cast<std::size_t>(k)]; }

  ModuleVector& operator+=(const ModuleVector& o);
  ModuleVector& operator-=(const ModuleVector& o);
  ModuleVector scaled(const Rational& c) const;
  ModuleVector times(const RationalPoly& p) const;
  ModuleVector times_monomial(const MultiIndex& m, const Rational& c = 1) const;
  bool operator==(const ModuleVector&) const = default;
  std::string to_string() const;
};

struct ModuleTerm {
  MultiIndex mono;
  int comp = 0;
  Rational coef;
};

// Per-component degree shifts that make every nonzero vector homogeneous,
// normalised so each connected group of components has minimum shift 0.
std::vector<int> infer_shifts(int rank, const std::vector<ModuleVector>& vectors);

/// Finite homogeneous generating set of a submodule of R^rank.
class GradedPresentation {
 public:
  GradedPresentation() = default;
  // Empty shifts means all zero. Zero generators take degree 0 unless stated.
  GradedPresentation(int n, int ambient_rank, std::vector<ModuleVector> gens, std::vector<int> shifts = {},
                     std::vector<int> zero_degrees = {});
  static GradedPresentation with_inferred_shifts(int n, int ambient_rank, std::vector<ModuleVector> gens);

  int n() const { return n_; }
  int ambient_rank() const { return rank_; }
  const std::vector<int>& shifts() const { return shifts_; }
  const std::vector<ModuleVector>& generators() const { return gens_; }
  int size() const { return static_cast<int>(gens_.size()); }
  int degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::map<int, int> degree_histogram() const;

 private:
  int n_ = 0;
  int rank_ = 0;
  std::vector<int> shifts_;
  std::vector<ModuleVector> gens_;
  std::vector<int> degrees_;
};

/// Reduced basis under the shifted term-over-position degrevlex order;
/// elements sorted by increasing leading term.
struct GroebnerBasis {
  int n = 0;
  int ambient_rank = 0;
  std::vector<int> shifts;
  std::vector<ModuleVector> elements;
  std::vector<ModuleTerm> leading;
  std::string order_tag = "top-degrevlex";
  bool operator==(const GroebnerBasis& o) const { return shifts == o.shifts && elements == o.elements; }
};

/// Leading term of v under the shifted module order; v must be nonzero.
ModuleTerm leading_term(const ModuleVector& v, const std::vector<int>& shifts);
/// Positive when (a_mono, a_comp) is the larger module term.
int compare_module_terms(const MultiIndex& am, int ac, const MultiIndex& bm, int bc, const std::vector<int>& shifts);

GroebnerBasis reduced_groebner(const GradedPresentation& gens);
GroebnerBasis reduced_groebner(const GradedPresentation& gens, kernels::Exec exec);

ModuleVector normal_form(const ModuleVector& v, const GroebnerBasis& gb);

/// Minimal homogeneous generators of the relation module {c : sum c_i gen_i = 0}.
/// The result lives in R^{#gens} with shifts equal to the generator degrees.
GradedPresentation syzygies(const GradedPresentation& gens);
GradedPresentation syzygies(const GradedPresentation& gens, kernels::Exec exec);

GradedPresentation minimal_graded_generators(const GradedPresentation& gens);

bool module_contains(const GroebnerBasis& gb, const GradedPresentation& sub);
bool module_equality(const GradedPresentation& a, const GradedPresentation& b);

using PolyMatrix = std::vector<std::vector<RationalPoly>>;

/// Rank over the fraction field Q(chi). Certified by a point evaluation
/// (lower bound) against exact column relations (upper bound); falls back to
/// fraction-free Bareiss elimination when the bounds do not meet.
int generic_rank(const PolyMatrix& m, int n);
/// Rank of m evaluated at a point; a lower bound for the generic rank.
int rank_at_point(const PolyMatrix& m, std::span<const Rational> point);
/// Bareiss elimination only; exponential in practice, kept as an oracle for small inputs.
int bareiss_rank(const PolyMatrix& m, int n);

}  // namespace diffseq
