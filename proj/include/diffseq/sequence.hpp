#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diffseq/builders.hpp"

namespace diffseq {

struct Verdict {
  bool pass = false;
  std::string witness;
};

struct ChainStep {
  std::string name;
  int order = 0;
  int source_dim = 0;
  int target_dim = 0;
  std::vector<int> generator_degrees;
};

struct SequenceReport {
  std::string title;
  int n = 0;
  std::string metric;
  std::vector<ChainStep> chain;
  std::vector<OperatorMatrix> operators;
  bool terminated = false;
  std::optional<long> euler_characteristic;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::vector<std::string> notes;

  // source dim of the first operator, then every target dim
  std::vector<int> dims() const;
  std::vector<int> orders() const;
  bool all_pass() const;
  const Verdict* verdict(const std::string& name) const;
};

/// Iterates compatibility conditions from D until they vanish or max_steps
/// CC computations have run (default n+1).
SequenceReport build_sequence(const OperatorMatrix& D, int max_steps = -1);

/// target o candidate = 0 and the rows of target generate every relation
/// among the rows of candidate: solutions of target are exactly the images of candidate.
Verdict check_parametrization(const OperatorMatrix& target, const OperatorMatrix& candidate);

/// Minimal generators of {v : D v = 0}, the column relations of D.
GradedPresentation kernel_generators(const OperatorMatrix& D);

/// verdict_i = check_parametrization(ad(D_{i-1}), ad(D_i)) for each i <= depth inside the chain.
SequenceReport double_duality_report(const OperatorMatrix& D, int depth = 2);

/// Cauchy (ad Killing, n=2) has a single degree-2 potential equal to ad(Riemann).
SequenceReport airy_report(const ConstantMetric& metric);
/// Beltrami (n=3): ad(Riemann) parametrizes ad(Killing).
SequenceReport beltrami_report(const ConstantMetric& metric);
/// Lanczos (n=4): ad(Bianchi) parametrizes ad(Riemann).
SequenceReport lanczos_parametrization_report(const ConstantMetric& metric);

/// Bianchi o Lanczos candidate is nonzero while Bianchi o Riemann vanishes (n=4).
SequenceReport lanczos_contradiction_report(const ConstantMetric& metric);

struct Lemma41Data {
  Rational contraction_constant;  // C o bianchi = c (2 div Ric - grad scal)
  Rational trace_constant;        // C = c' trace o relabel on the Bianchi target
  int trace_kernel_dim = 0;
  std::vector<Rational> sample_trace;  // trace of the element with only L_{12,2} = 1
};
/// Contracted Bianchi identity and the relabelled 20 -> 4 trace arrow (n=4).
SequenceReport lemma41_check(const ConstantMetric& metric, Lemma41Data* data = nullptr);

struct WeylRelations {
  int raw_rows = 0;
  int relations = 0;
  int cc = 0;
  int differential_rank = 0;
  OperatorMatrix op;
};
/// bianchi(4) o inject_weyl reduced to a minimal row set.
WeylRelations weyl_relations(const ConstantMetric& metric);

/// xi -> d_ij xi^k into S2T* (x) T.
OperatorMatrix second_derivative_operator(int n);

/// Ricci (+) Weyl projector identities and trace-freeness of the Weyl part.
SequenceReport splitting_report(int n, const ConstantMetric& metric);

}  // namespace diffseq
