#pragma once

#include "diagtor/sparse_matrix.hpp"

#include <vector>

namespace diagtor {

/// left * input * right = diag(diagonal, 0...), with diagonal[i] | diagonal[i+1].
struct SmithNormalForm {
  /// Nonzero invariant factors, positive, in divisibility order.
  std::vector<Integer> diagonal;
  DenseMatrix left;
  DenseMatrix right;
  DenseMatrix left_inverse;
};

SmithNormalForm smith_normal_form(const DenseMatrix& m);
SmithNormalForm smith_normal_form(const SparseMatrix& m);

/// Invariant factors without transforms, dense.
std::vector<Integer> dense_invariant_factors(DenseMatrix m);

struct InvariantFactors {
  std::size_t rank = 0;
  /// Factors greater than one, ascending in divisibility order.
  std::vector<Integer> nontrivial;
};

/// Sparse elimination with unit pivots first; any non-unit remainder is
/// finished densely. Machine integers are used until an overflow is detected.
InvariantFactors invariant_factors(const SparseMatrix& m);
InvariantFactors invariant_factors(std::uint32_t rows, std::vector<SmallColumn> columns);

}  // namespace diagtor
