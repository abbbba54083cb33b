#pragma once

#include "diagtor/algebra.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace diagtor {

/// Names a left ideal: K(i), L(i,j), J(i), I(<=n-1), the whole algebra, or an intersection.
struct IdealTag {
  enum class Kind { Whole, K, L, J, BelowTop, Intersection };
  Kind kind = Kind::Whole;
  unsigned i = 0;
  unsigned j = 0;
  std::vector<IdealTag> parts;

  static IdealTag whole() { return {}; }
  static IdealTag K(unsigned i) { return {Kind::K, i, 0, {}}; }
  static IdealTag L(unsigned i, unsigned j) { return {Kind::L, i, j, {}}; }
  static IdealTag J(unsigned i) { return {Kind::J, i, 0, {}}; }
  static IdealTag below_top() { return {Kind::BelowTop, 0, 0, {}}; }
  /// Flattens nested intersections; a single part is returned as is.
  static IdealTag intersection(const std::vector<IdealTag>& parts);

  std::string to_string() const;
  bool operator==(const IdealTag&) const = default;
};

/// A left ideal spanned by a subset of the diagram basis.
struct LeftIdealSpan {
  AlgebraId algebra;
  /// Sorted basis indices.
  std::vector<std::uint32_t> basis;
  IdealTag tag;
  /// Set exactly when basis is empty, so zero ideals are explicit in reports.
  bool zero = true;

  bool contains(std::uint32_t i) const;
  std::size_t size() const { return basis.size(); }
};

/// Whether rho satisfies the defining condition of the tag.
bool satisfies(const SetPartition& rho, const IdealTag& tag);

/// Span of the basis diagrams satisfying the tag.
LeftIdealSpan ideal_from_tag(const Algebra& algebra, const IdealTag& tag);
/// i' is a singleton. Partition family only.
LeftIdealSpan ideal_K(const Algebra& partition, unsigned i);
/// i' and j' share a block, i < j. Partition family only.
LeftIdealSpan ideal_L(const Algebra& partition, unsigned i, unsigned j);
/// Edge between i' and (i+1)', cyclically. Jones family only, n >= 2.
LeftIdealSpan ideal_J(const Algebra& jones, unsigned i);
/// Diagrams with fewer than n propagating blocks.
LeftIdealSpan ideal_below_top(const Algebra& algebra);

/// Set intersection, cross-checked against the closed-form conditions:
/// a diagram-by-diagram evaluation of the combined tag, and the zero criteria
/// (a pair meeting a singleton for the partition ideals, innermost for J).
/// Throws VerificationFailure on disagreement.
LeftIdealSpan intersect(const Algebra& algebra, const std::vector<LeftIdealSpan>& ideals);

/// Closed-form zero test for an intersection of K, L or J ideals.
bool predicted_zero(const IdealTag& tag, unsigned n);

/// x * rho stays in the span for every basis x and every member rho.
bool is_left_closed(const Algebra& algebra, const LeftIdealSpan& ideal);

// Cyclic combinatorics on C_n with labels 1..n.
bool is_innermost(const std::set<unsigned>& T, unsigned n);
std::set<unsigned> moral_support(const std::set<unsigned>& T, unsigned n);
/// Least a such that a+2 is locally minimal in C_n \ MS(T), if MS(T) is proper.
std::optional<unsigned> pick_a(const std::set<unsigned>& T, unsigned n);

using PairSet = std::set<std::pair<unsigned, unsigned>>;

/// {a'}, {a, b, b'} and {i, i'} otherwise. Throws InvalidArgument on a bad (S, a, b).
SetPartition build_mu(const std::set<unsigned>& S, const PairSet& T, unsigned a, unsigned b, unsigned n);
/// {a, b, a', b'} and {i, i'} otherwise; requires a < b.
SetPartition build_nu(unsigned a, unsigned b, unsigned n);
/// a+2 -- a+1, a -- (a+2)', (a+1)' -- a', and i -- i' for i in (a+2, a). Requires n >= 3.
SetPartition build_omega(unsigned a, unsigned n);

struct RetractionStep {
  enum class Kind { Mu, Nu, Omega, ScaledProjection };
  Kind kind;
  unsigned a = 0;
  unsigned b = 0;
  SetPartition diagram;
  /// Loop count k of diagram * diagram; only for ScaledProjection (coefficient delta^-k).
  unsigned loops = 0;
};

std::string to_string(RetractionStep::Kind k);

struct IdempotentCertificate {
  LeftIdealSpan ideal;
  AlgebraElement generator;
  /// Factors in multiplication order.
  std::vector<RetractionStep> chain;
};

/// Checks e*e = e, rho*e = rho for every basis rho in the ideal, and
/// x*e in the span for every basis x. Throws VerificationFailure.
void verify_certificate(const Algebra& algebra, const IdempotentCertificate& cert, const CoefficientRing& ring);

enum class SynthesisStatus { Zero, Certified, Impossible };
std::string to_string(SynthesisStatus s);

struct SynthesisOutcome {
  SynthesisStatus status = SynthesisStatus::Zero;
  LeftIdealSpan ideal;
  std::optional<IdempotentCertificate> certificate;
  std::string reason;
};

/// Intersection of K_i (i in S) and L_{i,j} ((i,j) in T) in P_n. L-steps come
/// first, then K-steps with b the least valid label. Impossible when S = n.
SynthesisOutcome synthesize_partition(const Algebra& partition, const std::set<unsigned>& S, const PairSet& T,
                                      const CoefficientRing& ring);
/// Intersection of J_i (i in T) in J_n. Elements are peeled from T with
/// pick_a, so the chain read left to right adds one ideal at a time. When
/// MS(T) = C_n the generator is delta^-k times the projection onto the
/// fixed link state, which needs delta to be a unit.
SynthesisOutcome synthesize_jones(const Algebra& jones, const std::set<unsigned>& T, const CoefficientRing& ring);
/// Dispatches on an intersection tag of K/L or J ideals.
SynthesisOutcome synthesize(const Algebra& algebra, const IdealTag& tag, const CoefficientRing& ring);

struct CoverDescriptor {
  AlgebraId algebra;
  std::vector<LeftIdealSpan> ideals;
  LeftIdealSpan target;
  unsigned height = 1;
  std::size_t width() const { return ideals.size(); }
};

/// K_1..K_n then L_{i,j} in lex order for P_n; J_1..J_n for J_n. Target I(<=n-1).
CoverDescriptor standard_cover(const Algebra& algebra, unsigned height);

/// p-element subsets of {1..w}, lexicographic.
std::vector<std::vector<unsigned>> subsets_of_size(unsigned w, unsigned p);

struct SubsetReport {
  /// 1-based positions in the cover's ideal list.
  std::vector<unsigned> members;
  IdealTag tag;
  std::size_t intersection_size = 0;
  SynthesisOutcome outcome;
  /// Certificate verified, or zero intersection.
  bool passed = false;
  std::string message;
};

struct CoverReport {
  bool height_valid = false;
  bool union_matches = false;
  std::vector<SubsetReport> subsets;
  bool ok() const;
};

/// Union check plus every subfamily of size <= height, in (size, lex) order.
CoverReport verify_cover(const Algebra& algebra, const CoverDescriptor& cover, const CoefficientRing& ring,
                         unsigned threads = 1);

nlohmann::json to_json(const Algebra& algebra, const RetractionStep& step);
nlohmann::json to_json(const Algebra& algebra, const IdempotentCertificate& cert, const CoefficientRing& ring);
nlohmann::json to_json(const Algebra& algebra, const SynthesisOutcome& outcome, const CoefficientRing& ring);
nlohmann::json to_json(const Algebra& algebra, const CoverReport& report, const CoefficientRing& ring);
/// Coefficients as strings keyed by diagram text.
nlohmann::json element_to_json(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring);

}  // namespace diagtor
