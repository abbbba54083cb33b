#pragma once

#include "diagtor/modp.hpp"
#include "diagtor/ring.hpp"
#include "diagtor/sparse_matrix.hpp"

#include <optional>

namespace diagtor {

struct RankKernel {
  std::size_t rank = 0;
  /// Columns spanning the kernel; over Q these are primitive integer vectors.
  std::vector<SparseVector> kernel_basis;
};

/// Rank and kernel over a field (Q or F_p).
RankKernel rank_kernel(const SparseMatrix& m, const CoefficientRing& ring);

/// Rank over F_p, or over Q for Z and Q.
std::size_t rank(const SparseMatrix& m, const CoefficientRing& ring);

/// Z-basis of the integer kernel.
std::vector<SparseVector> integer_kernel(const SparseMatrix& m);

/// Some x with m x = b over Z or F_p; nullopt if none exists.
std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b, const CoefficientRing& ring);

ModpVector to_modp(const SparseVector& v, std::uint32_t p);
SparseVector from_modp(const ModpVector& v);

/// Rank of a dense matrix by plain Gaussian elimination over F_p or Q.
std::size_t dense_rank(const DenseMatrix& m, const CoefficientRing& ring);

}  // namespace diagtor
