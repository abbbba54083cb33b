#pragma once

#include "diagtor/algebra.hpp"
#include "diagtor/homology.hpp"
#include "diagtor/int_lattice.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace diagtor {

constexpr std::size_t kDefaultBarBudget = 5'000'000;

/// delta as an integer; throws UnsupportedRing for a non-integral delta over Q.
Integer integral_delta(const CoefficientRing& ring);

/// Basis of ker(augmentation): non-full-propagation diagrams d, then g - 1
/// for full-propagation g other than the identity, each group in basis order.
///
/// Products are expanded in this basis with machine coefficients: reduced
/// mod p over F_p, exact integers otherwise (delta read as an integer).
class AugmentationIdeal {
 public:
  AugmentationIdeal(const Algebra& algebra, const CoefficientRing& ring);

  const Algebra& algebra() const { return algebra_; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(base_.size()); }
  /// Algebra basis index behind element k.
  std::uint32_t base(std::uint32_t k) const { return base_[k]; }
  /// Element k is g - 1 rather than a diagram.
  bool shifted(std::uint32_t k) const { return k >= first_shifted_; }
  /// Element whose base is algebra index i, if any.
  std::optional<std::uint32_t> element_of(std::uint32_t i) const;
  /// a_i * a_j expanded in this basis.
  const SmallColumn& product(std::uint32_t i, std::uint32_t j) const { return products_[std::size_t(i) * dim() + j]; }
  /// 0 for Z, Q and Z/m (kept exact), p for F_p.
  std::uint32_t reduction() const { return reduction_; }

 private:
  Algebra algebra_;
  std::vector<std::uint32_t> base_;
  std::vector<std::int64_t> index_of_;
  std::uint32_t first_shifted_ = 0;
  std::uint32_t reduction_ = 0;
  std::vector<SmallColumn> products_;
};

/// Normalized bar complex B_q = I^{(x)q} with
/// d(a_1|...|a_q) = sum_{i=1}^{q-1} (-1)^i a_1|...|a_i a_{i+1}|...|a_q.
/// Tuples are indexed in base dim() with a_1 most significant.
class BarComplex {
 public:
  BarComplex(const Algebra& algebra, const CoefficientRing& ring, std::size_t budget = kDefaultBarBudget,
             unsigned threads = 1);

  const AugmentationIdeal& ideal() const { return *ideal_; }
  const CoefficientRing& ring() const { return ring_; }
  std::size_t rank(unsigned q) const;
  /// Throws BudgetExceeded when rank(q) passes the budget.
  void require_budget(unsigned q) const;
  /// Column of d_q for tuple index t.
  SmallColumn column(unsigned q, std::uint64_t t) const;
  /// d_q : B_q -> B_{q-1}, columns assembled in parallel.
  std::vector<SmallColumn> columns(unsigned q) const;
  SparseMatrix differential(unsigned q) const;
  /// Rank of d_q over the ring's field (F_p or Q), streaming the columns.
  std::size_t differential_rank(unsigned q) const;

 private:
  std::shared_ptr<const AugmentationIdeal> ideal_;
  CoefficientRing ring_;
  std::size_t budget_;
  unsigned threads_;
};

struct TorReport {
  AlgebraId algebra;
  std::string ring;
  std::string method;
  std::vector<HomologyGroup> groups;
};

/// Tor_q^A(1,1) for q <= q_max from the bar complex.
TorReport tor_bar(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max,
                  std::size_t budget = kDefaultBarBudget, unsigned threads = 1);

/// Free resolution F_* -> 1 over A_Z(delta) with A-module generators chosen
/// greedily from a Z-basis of each kernel.
///
/// The complex is split exact over Z, so 1 (x)_A F_* computes Tor over every
/// coefficient ring by base change.
class FreeResolution {
 public:
  FreeResolution(const Algebra& algebra, const Integer& delta, unsigned top, std::size_t budget = 50'000'000);

  const Algebra& algebra() const { return algebra_; }
  unsigned top() const { return top_; }
  /// Generator count of F_q, q <= top.
  std::uint32_t generators(unsigned q) const { return static_cast<std::uint32_t>(gens_[q].size()); }
  /// Image of generator k of F_q inside F_{q-1}; coordinates j * dim + b.
  const SparseVector& generator(unsigned q, std::uint32_t k) const { return gens_[q][k]; }
  /// (1 (x)_A d_q) : Z^{g_q} -> Z^{g_{q-1}}; d_0 maps to the zero module.
  SparseMatrix reduced_differential(unsigned q) const;
  /// x in F_q with d_q x = v, or nullopt; q in 1..top.
  std::optional<SparseVector> lift(unsigned q, const SparseVector& v) const;
  /// a * v for a basis diagram a and v in F_q.
  SparseVector act(std::uint32_t a, const SparseVector& v) const;

 private:
  Algebra algebra_;
  Integer delta_;
  unsigned top_;
  std::vector<std::vector<SparseVector>> gens_;
  std::vector<std::shared_ptr<IntLattice>> images_;
};

/// Tor via the free resolution; exact over Z, Q, F_p and Z/m.
TorReport tor_resolution(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max);

/// dim Tor_q over a field via the free resolution. The resolution need not
/// be minimal (A is not local), so these are Tor dimensions rather than
/// generator counts.
std::vector<std::size_t> minimal_resolution_betti(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max);

/// Period-two resolution: 1 (x) P is Z <-0- Z <-n- Z <-0- Z <-n- ...
std::vector<HomologyGroup> group_homology_cyclic(unsigned n, const CoefficientRing& ring, unsigned q_max);
/// Bar complex over R Sigma_n.
std::vector<HomologyGroup> group_homology_symmetric(unsigned n, const CoefficientRing& ring, unsigned q_max,
                                                    std::size_t budget = kDefaultBarBudget);

enum class TorMethod { Auto, Bar, Resolution };
TorMethod parse_tor_method(const std::string& s);
std::string to_string(TorMethod m);

/// What the relevant theorem claims at degree q, if anything.
enum class Claim { None, Isomorphism, Surjection };
std::string to_string(Claim c);
Claim theorem_claim(const AlgebraId& id, const CoefficientRing& ring, unsigned q);

struct InducedDegree {
  unsigned q;
  InducedMap map;
  Claim claim = Claim::None;
  bool satisfied = true;
};

struct InducedMapReport {
  AlgebraId source;
  AlgebraId target;
  std::string ring;
  std::string method;
  std::vector<InducedDegree> degrees;
  bool pass() const;
};

struct TorOptions {
  TorMethod method = TorMethod::Auto;
  std::size_t budget = kDefaultBarBudget;
  unsigned threads = 1;
  /// Auto uses the bar complex while its largest degree stays under this.
  std::size_t auto_bar_limit = 200'000;
};

/// Map Tor^A(1,1) -> Tor^G(1,1) induced by the quotient onto the group algebra.
InducedMapReport induced_tor_map(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max,
                                 const TorOptions& options = {});

/// Bar chain map of the quotient at degree q: tuples go to tuples or to zero.
SparseMatrix bar_quotient_map(const AugmentationIdeal& source, const AugmentationIdeal& target, unsigned q);

/// partition, jones, jones-global, main-partition, main-jones.
enum class Theorem { Partition, Jones, JonesGlobal, MainPartition, MainJones };
Theorem parse_theorem(const std::string& s);
std::string to_string(Theorem t);

struct Verdict {
  nlohmann::json json;
  bool pass() const { return json.value("overall", "fail") == "pass"; }
};

/// Runs the cover audit, MV checks and Tor comparison relevant to a theorem.
/// The main-* audits skip Tor; height 0 means the standard height.
Verdict verify_theorem(Theorem theorem, unsigned n, const CoefficientRing& ring, unsigned q_max,
                       const TorOptions& options = {}, unsigned height = 0);

nlohmann::json to_json(const HomologyGroup& h, const CoefficientRing& ring);
nlohmann::json to_json(const TorReport& r, const CoefficientRing& ring);
nlohmann::json to_json(const InducedMapReport& r, const CoefficientRing& ring);

}  // namespace diagtor
