#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffseq {

inline constexpr int kMaxVars = 8;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExponentCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Process-wide bound on any single exponent; default 32.
int exponent_cap();
void set_exponent_cap(int cap);

/// Exponent vector of a monomial chi^mu in n commuting symbols.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n);
  MultiIndex(std::initializer_list<int> exps);
  static MultiIndex from(std::span<const int> exps);
  static MultiIndex unit(int n, int i);

  int size() const { return n_; }
  int degree() const { return degree_; }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  std::vector<int> exponents() const;

  MultiIndex operator*(const MultiIndex& other) const;
  bool divides(const MultiIndex& other) const;
  // this / divisor; requires divisor.divides(*this)
  MultiIndex quotient(const MultiIndex& divisor) const;
  MultiIndex lcm(const MultiIndex& other) const;
  MultiIndex raised(int var, int by = 1) const;
  MultiIndex lowered(int var) const;

  bool operator==(const MultiIndex& other) const = default;
  std::size_t hash() const;
  std::string to_string() const;

 private:
  std::array<std::uint8_t, kMaxVars> e_{};
  std::uint8_t n_ = 0;
  std::uint16_t degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const { return m.hash(); }
};

/// Degree-reverse-lexicographic comparison with chi_1 > chi_2 > ... > chi_n.
std::strong_ordering compare_monomials(const MultiIndex& a, const MultiIndex& b);

struct MonomialGreater {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return compare_monomials(a, b) == std::strong_ordering::greater;
  }
};

/// All monomials of total degree d in n variables, largest first.
const std::vector<MultiIndex>& monomials_of_degree(int n, int d);

/// Number of monomials of degree d in n variables.
std::size_t count_monomials(int n, int d);

std::size_t binomial(int n, int k);

}  // namespace diffseq
