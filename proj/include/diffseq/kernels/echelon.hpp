#pragma once

#include <vector>

#include "diffseq/polynomial.hpp"

namespace diffseq::kernels {

struct SparseEntry {
  int col;
  Rational val;
  bool operator==(const SparseEntry&) const = default;
};

// Strictly increasing columns, no zero values.
using SparseRow = std::vector<SparseEntry>;

enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec exec);

enum class ReduceMode {
  Leading,  // stop at the first column without a pivot
  Full      // clear every pivot column
};

/// Dense scratch row used while reducing one sparse row.
class Accumulator {
 public:
  explicit Accumulator(int ncols);
  int ncols() const { return static_cast<int>(val_.size()); }

 private:
  friend class PivotSet;
  std::vector<Rational> val_;
  Rational tmp_;
};

/// Growing set of pivot rows, at most one per column, each with leading coefficient 1.
class PivotSet {
 public:
  explicit PivotSet(int ncols);

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  bool has_pivot(int col) const { return pivot_of_col_[static_cast<std::size_t>(col)] >= 0; }

  SparseRow reduce(const SparseRow& v, ReduceMode mode, Accumulator& acc) const;
  SparseRow reduce(const SparseRow& v, ReduceMode mode) const;

  // Inserts an already reduced row (its leading column must be free). False for the empty row.
  bool add_reduced(SparseRow r);
  // Reduce then insert; returns whether the rank grew.
  bool insert(const SparseRow& v);

  // Insertion order.
  const std::vector<SparseRow>& rows() const { return rows_; }
  std::vector<int> pivot_columns() const;

 private:
  int ncols_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_of_col_;
};

/// Reduced row echelon form: rows sorted by pivot column, leading 1, pivot columns cleared.
struct RowEchelon {
  int ncols = 0;
  std::vector<SparseRow> rows;
  std::vector<int> pivots;
  int rank() const { return static_cast<int>(rows.size()); }
  bool operator==(const RowEchelon&) const = default;
};

PivotSet echelonize(const std::vector<SparseRow>& rows, int ncols, Exec exec);
PivotSet echelonize(const std::vector<SparseRow>& rows, int ncols);

RowEchelon reduced_echelon(const PivotSet& pivots, Exec exec);
RowEchelon reduced_echelon(const std::vector<SparseRow>& rows, int ncols, Exec exec);
RowEchelon reduced_echelon(const std::vector<SparseRow>& rows, int ncols);

int rank_of(const std::vector<SparseRow>& rows, int ncols);

/// Basis of {x : row . x = 0 for all rows}, one vector per free column.
std::vector<SparseRow> nullspace(const RowEchelon& e);

SparseRow make_row(std::vector<SparseEntry> entries);
SparseRow scale_row(const SparseRow& r, const Rational& c);
SparseRow add_rows(const SparseRow& a, const SparseRow& b, const Rational& scale_b);
Rational dot(const SparseRow& a, const SparseRow& b);

}  // namespace diffseq::kernels
