#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "diffseq/multi_index.hpp"

namespace diffseq {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
/// Canonical "p/q" text, denominator always present.
std::string rational_to_string(const Rational& q);

struct Term {
  MultiIndex mono;
  Rational coef;
  bool operator==(const Term&) const = default;
};

/// Multivariate polynomial over Q in n commuting symbols.
///
/// Terms are kept sorted by descending degrevlex order with no zero
/// coefficients, so equality is structural.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(int n) : n_(n) {}

  static RationalPoly constant(int n, const Rational& c);
  static RationalPoly variable(int n, int i, const Rational& c = 1);
  static RationalPoly monomial(const MultiIndex& m, const Rational& c = 1);
  // Terms may arrive unsorted and with repeats; they are combined.
  static RationalPoly from_terms(int n, std::vector<Term> terms);

  int n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial
  int degree() const;
  bool is_homogeneous() const;
  const Term& leading() const { return terms_.front(); }
  Rational coefficient(const MultiIndex& m) const;

  RationalPoly operator-() const;
  RationalPoly& operator+=(const RationalPoly& other);
  RationalPoly& operator-=(const RationalPoly& other);
  RationalPoly& operator*=(const Rational& c);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
  friend RationalPoly operator*(const Rational& c, RationalPoly a) { return a *= c; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  RationalPoly times_monomial(const MultiIndex& m, const Rational& c = 1) const;

  /// p(chi) -> p(-chi); each term picks up (-1)^degree.
  RationalPoly negate_vars() const;

  /// Literal partial derivative d^mu of this polynomial, read as a function of x.
  RationalPoly derivative(const MultiIndex& mu) const;
  Rational evaluate(std::span<const Rational> point) const;

  /// Exact quotient; throws if divisor does not divide.
  RationalPoly exact_divide(const RationalPoly& divisor) const;

  bool operator==(const RationalPoly& other) const = default;
  std::string to_string(const char* var = "x") const;

 private:
  void add_scaled(const RationalPoly& other, const Rational& scale);
  int n_ = 0;
  std::vector<Term> terms_;
};

RationalPoly poly_mul(const RationalPoly& p, const RationalPoly& q);
RationalPoly negate_vars(const RationalPoly& p);

}  // namespace diffseq
