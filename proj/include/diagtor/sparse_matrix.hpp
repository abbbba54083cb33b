#pragma once

#include "diagtor/integer.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace diagtor {

class CoefficientRing;

struct Entry {
  std::uint32_t index;
  Integer value;
};

/// Sorted by index, no zero values.
using SparseVector = std::vector<Entry>;

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  Integer value;
};

/// Machine-word column used by the bulk generators (bar and MV differentials).
struct SmallEntry {
  std::uint32_t index;
  std::int64_t value;
};
using SmallColumn = std::vector<SmallEntry>;

/// Row-major dense integer matrix; used for small presentations and SNF.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  DenseMatrix operator*(const DenseMatrix& other) const;
  bool operator==(const DenseMatrix& other) const = default;
  bool is_zero() const;
  DenseMatrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Column-major sparse matrix with exact integer entries.
///
/// Entries are integer representatives; ring-specific reduction is explicit
/// via reduced(). Immutable once built.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::uint32_t rows, std::uint32_t cols) : rows_(rows), columns_(cols) {}

  /// Duplicate positions are summed; zero sums are dropped.
  static SparseMatrix from_triplets(std::uint32_t rows, std::uint32_t cols, std::vector<Triplet> triplets);
  static SparseMatrix from_columns(std::uint32_t rows, std::vector<SparseVector> columns);
  static SparseMatrix from_small_columns(std::uint32_t rows, const std::vector<SmallColumn>& columns);
  static SparseMatrix from_dense(const DenseMatrix& m);
  static SparseMatrix identity(std::uint32_t n);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return static_cast<std::uint32_t>(columns_.size()); }
  std::size_t nnz() const;
  const SparseVector& column(std::uint32_t j) const { return columns_[j]; }
  const std::vector<SparseVector>& columns() const { return columns_; }
  Integer at(std::uint32_t i, std::uint32_t j) const;

  SparseMatrix transpose() const;
  SparseMatrix operator*(const SparseMatrix& other) const;
  bool operator==(const SparseMatrix& other) const;
  bool is_zero() const { return nnz() == 0; }

  /// Entries reduced into the ring's canonical representatives (mod p or m); zeros dropped.
  SparseMatrix reduced(const CoefficientRing& ring) const;
  DenseMatrix to_dense() const;
  std::vector<Triplet> triplets() const;

 private:
  std::uint32_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

/// a + c * b on sorted sparse vectors.
SparseVector axpy(const SparseVector& a, const Integer& c, const SparseVector& b);
/// Apply matrix to a sparse vector.
SparseVector multiply(const SparseMatrix& m, const SparseVector& v);

bool operator==(const Entry& a, const Entry& b);

/// Text triplet format: a `rows cols nnz` header, then `row col value` per
/// entry, 0-based, in column-major order.
void write_triplets(std::ostream& out, const SparseMatrix& m);
/// Throws InvalidArgument on malformed input or out-of-range indices.
SparseMatrix read_triplets(std::istream& in);

}  // namespace diagtor
