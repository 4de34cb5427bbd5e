#pragma once

#include <string>
#include <vector>

#include "diffseq/polynomial.hpp"

namespace diffseq {

class DegenerateMetric : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constant symmetric non-degenerate metric omega_{ij} with cached inverse.
class ConstantMetric {
 public:
  ConstantMetric() = default;
  // Throws DegenerateMetric if the matrix is singular, DimensionMismatch if not
  // square, std::invalid_argument if not symmetric.
  explicit ConstantMetric(std::vector<std::vector<Rational>> entries, std::string name = "custom");

  static ConstantMetric euclidean(int n);
  // diag(1, ..., 1, -1)
  static ConstantMetric minkowski(int n);
  static ConstantMetric by_name(const std::string& name, int n);

  int n() const { return static_cast<int>(g_.size()); }
  const Rational& lower(int i, int j) const { return g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const Rational& upper(int i, int j) const {
    return ginv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const Rational& det() const { return det_; }
  const std::string& name() const { return name_; }
  const std::vector<std::vector<Rational>>& entries() const { return g_; }

  bool operator==(const ConstantMetric& other) const { return g_ == other.g_; }

 private:
  std::vector<std::vector<Rational>> g_;
  std::vector<std::vector<Rational>> ginv_;
  Rational det_;
  std::string name_;
};

}  // namespace diffseq
