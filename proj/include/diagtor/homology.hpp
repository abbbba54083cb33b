#pragma once

#include "diagtor/ring.hpp"
#include "diagtor/sparse_matrix.hpp"

#include <memory>
#include <string>
#include <vector>

namespace diagtor {

/// Free rank plus invariant factors d_1 | d_2 | ... (each >= 2).
/// Over a field torsion is empty and free_rank is the dimension. Over Z/m
/// the group is reported by its abelian invariants, all in torsion.
struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  /// Generator count in the presentation used by induced maps.
  std::size_t generators() const { return torsion.size() + free_rank; }
  std::string to_string(const CoefficientRing& ring) const;
  bool operator==(const HomologyGroup& other) const = default;
};

/// ker(d_q) / im(d_q_plus_1), where d_q : C_q -> C_{q-1} and
/// d_q_plus_1 : C_{q+1} -> C_q are integer matrices read in the ring.
HomologyGroup chain_homology(const SparseMatrix& d_q, const SparseMatrix& d_q_plus_1, const CoefficientRing& ring);
/// Homology over Z/m from integer lifts that compose to zero only mod m:
/// {x : d_q x in mZ} / (im d_{q+1} + mZ). Every summand is listed as torsion.
HomologyGroup lattice_homology_mod(const SparseMatrix& d_q, const SparseMatrix& d_q_plus_1, std::uint32_t m);

/// Throws NotAComplex unless a * b vanishes in the ring.
void require_composes_to_zero(const SparseMatrix& a, const SparseMatrix& b, const CoefficientRing& ring);

struct ComplexWindow {
  SparseMatrix d_q;
  SparseMatrix d_q_plus_1;
};

/// Components of a chain map at degrees q-1, q, q+1.
struct ChainMapWindow {
  SparseMatrix below;
  SparseMatrix at;
  SparseMatrix above;
};

enum class MapClass { Isomorphism, SurjectiveNotInjective, Neither };

std::string to_string(MapClass c);

struct InducedMap {
  HomologyGroup source;
  HomologyGroup target;
  /// target.generators() x source.generators(). Over Z the coordinates are
  /// SNF-adapted: torsion summands first (entries reduced mod d_i), then free.
  DenseMatrix matrix;
  MapClass classification = MapClass::Neither;
};

/// Generators and coordinates for one homology group.
class HomologyBasis {
 public:
  HomologyBasis(const SparseMatrix& d_q, const SparseMatrix& d_q_plus_1, const CoefficientRing& ring);

  const HomologyGroup& group() const { return group_; }
  /// Cycles in C_q representing the generators, in coordinate order.
  const std::vector<SparseVector>& generators() const { return generators_; }
  /// Coordinates of a cycle; throws VerificationFailure if z is not a cycle.
  std::vector<Integer> coordinates(const SparseVector& z) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  HomologyGroup group_;
  std::vector<SparseVector> generators_;
};

InducedMap homology_induced_map(const ComplexWindow& source, const ComplexWindow& target, const ChainMapWindow& map,
                                const CoefficientRing& ring);

/// Induced map from precomputed bases and the degree-q chain map component.
InducedMap induced_map_from_bases(const HomologyBasis& source, const HomologyBasis& target, const SparseMatrix& f_q,
                                  const CoefficientRing& ring);

MapClass classify_map(const HomologyGroup& source, const HomologyGroup& target, const DenseMatrix& matrix,
                      const CoefficientRing& ring);

}  // namespace diagtor
