#pragma once

#include "diagtor/smith.hpp"
#include "diagtor/sparse_matrix.hpp"

#include <memory>
#include <optional>

namespace diagtor {

/// Z-basis of {x : m x = 0}, with entries bounded by minors of m.
std::vector<std::vector<Integer>> dense_integer_kernel(const DenseMatrix& m);

/// Sublattice of Z^dim given by generators, each carrying a tag.
///
/// Generators are reduced by unit pivots in creation order, which keeps
/// entries bounded by minors. Whatever has no unit entry left is kept aside
/// and handled densely on demand. Tags are combined alongside
/// the vectors, so solve() and relations() are expressed in tag coordinates.
class IntLattice {
 public:
  explicit IntLattice(std::uint32_t dim);

  void insert(const SparseVector& v, const SparseVector& tag);

  /// A tag t whose lattice element equals v, if v lies in the lattice.
  std::optional<SparseVector> solve(const SparseVector& v) const;
  bool contains(const SparseVector& v) const { return solve(v).has_value(); }

  /// Z-basis of the relation module among inserted generators, in tag coordinates.
  std::vector<SparseVector> relations() const;
  /// Z-basis of the lattice, with matching tags.
  std::vector<SparseVector> basis() const;
  std::vector<SparseVector> basis_tags() const;
  std::size_t rank() const;
  std::uint32_t dim() const { return dim_; }

  /// v reduced by the unit pivots; the result vanishes on every pivot row.
  SparseVector reduced(const SparseVector& v) const;
  bool is_pivot_row(std::uint32_t row) const { return row_pivot_[row] != ~0u; }
  /// Generators left without a unit entry; they vanish on every pivot row.
  std::vector<SparseVector> residual() const;

 private:
  struct Item {
    SparseVector vec;
    SparseVector tag;
  };
  struct Residue {
    std::vector<std::uint32_t> rows;
    DenseMatrix matrix;
    std::vector<std::vector<Integer>> kernel;
  };

  void reduce(SparseVector& v, SparseVector& tag) const;
  void add_pivot(Item item);
  const Residue& residue() const;
  std::vector<SparseVector> deferred_tags() const;

  std::uint32_t dim_;
  std::vector<Item> pivots_;
  std::vector<std::uint32_t> pivot_row_;
  /// pivot id per row, or npos.
  std::vector<std::uint32_t> row_pivot_;
  std::vector<Item> deferred_;
  std::vector<SparseVector> zero_tags_;
  mutable std::shared_ptr<const Residue> residue_;
};

}  // namespace diagtor
