#pragma once

#include "diagtor/covers.hpp"
#include "diagtor/homology.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace diagtor {

/// |{i in S : i < j}|. Throws InvalidArgument unless j is in S.
unsigned sign_count(const std::vector<unsigned>& S, unsigned j);

/// One summand of C_p: the intersection over `subset` (1-based cover positions).
struct MVSummand {
  std::vector<unsigned> subset;
  /// Sorted algebra basis indices spanning the intersection.
  std::vector<std::uint32_t> basis;
  std::uint32_t offset = 0;
};

struct MVDegree {
  int p = 0;
  /// Nonzero summands only, lexicographic in the subset.
  std::vector<MVSummand> summands;
  std::uint32_t rank = 0;
};

/// Augmented complex C_{-1} = A/I <- C_0 = A <- C_1 <- ... <- C_max.
///
/// C_{-1} has the diagrams outside the cover's target as basis. All
/// differentials have entries 0 or +-1 and are ring independent.
struct MVComplex {
  CoverDescriptor cover;
  int max_degree = 0;
  /// Index p + 1.
  std::vector<MVDegree> degrees;
  /// Index p for d_p : C_p -> C_{p-1}, p = 0..max_degree.
  std::vector<SparseMatrix> differentials;

  const MVDegree& degree(int p) const { return degrees.at(static_cast<std::size_t>(p + 1)); }
  std::uint32_t rank(int p) const;
  /// d_p for p = -1..max_degree+1; the ends are zero maps.
  SparseMatrix d(int p) const;
  bool full() const { return max_degree == static_cast<int>(cover.width()); }
};

/// Builds degrees -1..degree_limit (clamped to the width). Throws
/// BudgetExceeded when the total rank passes the budget.
MVComplex build_mv(const Algebra& algebra, const CoverDescriptor& cover, unsigned degree_limit, unsigned threads = 1,
                   std::size_t budget = 50'000'000);

/// d_{p-1} d_p = 0 over Z for every p.
bool composes_to_zero(const MVComplex& c);

struct MVHomologyReport {
  /// Degree -> homology at C_p.
  std::map<int, HomologyGroup> homology;
  /// All reported degrees vanish (the top degree is skipped for truncations).
  bool acyclic = false;
};

MVHomologyReport check_acyclic(const MVComplex& c, const CoefficientRing& ring);

/// For every basis diagram v, the copies of v form the augmented chain
/// complex of the simplex on S(v) = {i : v in ideal i}, with v in C_0 as the empty face.
bool simplex_decomposition_check(const MVComplex& c);

nlohmann::json manifest(const MVComplex& c);
/// Writes manifest.json and d_<p>.tri for p = 0..max_degree into dir.
void export_mv(const MVComplex& c, const std::string& dir);

}  // namespace diagtor
