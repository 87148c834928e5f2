#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gradcoh/rational.hpp"

namespace gradcoh {

using Index = std::uint32_t;

// Sorted (index, value) pairs without stored zeros.
using SparseEntries = std::vector<std::pair<Index, Rational>>;

class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t length) : length_(length) {}

  std::size_t length() const { return length_; }
  const SparseEntries& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Rational at(Index i) const;
  // Adds `value` to coordinate i, dropping the entry if it cancels.
  void add(Index i, const Rational& value);
  void set(Index i, const Rational& value);

  static SparseVector from_entries(std::size_t length, SparseEntries entries);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t length_ = 0;
  SparseEntries entries_;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;

  const SparseEntries& row(std::size_t r) const { return rows_[r]; }
  Rational at(std::size_t r, Index c) const;

  void add(std::size_t r, Index c, const Rational& value);
  void set_row(std::size_t r, SparseEntries entries);
  std::size_t append_row(SparseEntries entries = {});

  SparseMatrix transposed() const;
  // Keeps the listed rows, in the given order.
  SparseMatrix select_rows(const std::vector<std::size_t>& keep) const;
  SparseVector column(Index c) const;

  SparseVector multiply(const SparseVector& x) const;
  SparseMatrix multiply(const SparseMatrix& other) const;

  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense);

 private:
  std::vector<SparseEntries> rows_;
  std::size_t cols_ = 0;
};

// Sparse Gaussian elimination over Q. Columns carry a priority class: pivots
// are taken from class 0 until no active row touches a class-0 column, then
// from class 1, and so on. Columns in `kNeverPivot` are carried along but
// never used as pivots (right-hand sides).
class Eliminator {
 public:
  static constexpr std::uint8_t kNeverPivot = 0xff;

  explicit Eliminator(const SparseMatrix& m);
  Eliminator(const SparseMatrix& m, std::vector<std::uint8_t> column_class);

  // Forward elimination. Idempotent.
  void run();

  std::size_t rank() const { return pivot_rows_.size(); }
  // Number of pivots whose column belongs to class `cls`.
  std::size_t pivots_in_class(std::uint8_t cls) const;
  const std::vector<Index>& pivot_columns() const { return pivot_cols_; }

  // Rows left after elimination (all pivot-eligible entries are zero).
  const std::vector<SparseEntries>& residual_rows() const { return residual_; }

  // Reduces the pivot rows to reduced row echelon form (pivot entries 1,
  // pivot columns cleared from every other pivot row).
  void back_substitute();
  const std::vector<SparseEntries>& pivot_rows() const { return pivot_rows_; }

 private:
  std::size_t cols_;
  std::vector<SparseEntries> rows_;
  std::vector<std::uint8_t> class_;
  std::vector<SparseEntries> pivot_rows_;
  std::vector<Index> pivot_cols_;
  std::vector<SparseEntries> residual_;
  bool done_ = false;
  bool reduced_ = false;
};

std::size_t rank(const SparseMatrix& m);
std::vector<SparseVector> kernel_basis(const SparseMatrix& m);
// Some x with m x = b, or nullopt when the system is inconsistent.
std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b);

}  // namespace gradcoh
