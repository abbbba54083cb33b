#pragma once

#include "diagtor/diagrams.hpp"
#include "diagtor/ring.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace diagtor {

struct AlgebraId {
  Family family;
  unsigned n;
  std::string to_string() const;
  bool operator==(const AlgebraId&) const = default;
};

/// mu * nu as a basis index together with the loop exponent.
struct Product {
  std::uint32_t index;
  std::uint8_t loops;
  bool operator==(const Product&) const = default;
};

/// Ring-independent table: entry (i, j) is (index of mu_i * mu_j, loops).
class MultiplicationTable {
 public:
  MultiplicationTable(AlgebraId id, std::uint32_t size, std::vector<Product> entries);

  const AlgebraId& id() const { return id_; }
  std::uint32_t size() const { return size_; }
  const Product& operator()(std::uint32_t i, std::uint32_t j) const {
    return entries_[static_cast<std::size_t>(i) * size_ + j];
  }
  const std::vector<Product>& entries() const { return entries_; }

 private:
  AlgebraId id_;
  std::uint32_t size_;
  std::vector<Product> entries_;
};

/// A diagram algebra or group algebra with its canonical basis.
///
/// Cheap to copy; the basis and table are shared and immutable.
class Algebra {
 public:
  explicit Algebra(AlgebraId id);
  Algebra(Family family, unsigned n) : Algebra(AlgebraId{family, n}) {}

  const AlgebraId& id() const { return basis_->id; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(basis_->diagrams.size()); }
  const SetPartition& diagram(std::uint32_t i) const { return basis_->diagrams[i]; }
  const std::vector<SetPartition>& basis() const { return basis_->diagrams; }
  std::optional<std::uint32_t> index_of(const SetPartition& d) const;
  std::uint32_t identity_index() const { return basis_->identity; }
  bool is_full_propagation(std::uint32_t i) const { return basis_->full[i] != 0; }
  const std::vector<std::uint32_t>& full_propagation_indices() const { return basis_->full_indices; }
  unsigned max_loops() const { return basis_->id.n; }

  /// From the table when attached, else by composition.
  Product product(std::uint32_t i, std::uint32_t j) const;

  bool has_table() const { return table_ != nullptr; }
  const MultiplicationTable* table() const { return table_.get(); }
  Algebra with_table(std::shared_ptr<const MultiplicationTable> table) const;

  /// SHA-256 of the family, n and the canonical basis serialization.
  const std::string& digest() const { return basis_->digest; }

 private:
  struct Basis {
    AlgebraId id;
    std::vector<SetPartition> diagrams;
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<char> full;
    std::vector<std::uint32_t> full_indices;
    std::uint32_t identity = 0;
    std::string digest;
  };
  std::shared_ptr<const Basis> basis_;
  std::shared_ptr<const MultiplicationTable> table_;
};

std::string sha256_hex(const std::string& data);

/// Finitely supported combination of basis diagrams; zero coefficients are never stored.
struct AlgebraElement {
  AlgebraId algebra;
  std::map<std::uint32_t, Scalar> coeffs;

  static AlgebraElement zero(const AlgebraId& id) { return {id, {}}; }
  static AlgebraElement basis(const AlgebraId& id, std::uint32_t i, const Scalar& c = 1);
  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const AlgebraElement& other) const {
    return algebra == other.algebra && coeffs == other.coeffs;
  }
};

void add_term(AlgebraElement& x, std::uint32_t i, const Scalar& c, const CoefficientRing& ring);
AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y, const CoefficientRing& ring);
AlgebraElement scale(const AlgebraElement& x, const Scalar& c, const CoefficientRing& ring);

AlgebraElement multiply(const Algebra& algebra, const AlgebraElement& x, const AlgebraElement& y,
                        const CoefficientRing& ring);

/// Sum of coefficients on full-propagation diagrams.
Scalar augmentation(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring);

/// Target group algebra of the quotient by I_{<= n-1}.
AlgebraId quotient_target(const AlgebraId& source);
/// Basis-level quotient: the group element of a full-propagation diagram, else none.
std::optional<std::uint32_t> quotient_index(const Algebra& source, const Algebra& target, std::uint32_t i);
AlgebraElement quotient_map(const Algebra& source, const Algebra& target, const AlgebraElement& x,
                            const CoefficientRing& ring);

/// Complete table; rows are split across threads. Throws BudgetExceeded if
/// dim^2 exceeds the budget.
std::shared_ptr<const MultiplicationTable> build_table(const Algebra& algebra, unsigned threads = 1,
                                                       std::size_t budget = 50'000'000);

/// Serialization of an element: coefficients as strings keyed by diagram text.
std::string element_to_string(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring);

// Table cache. Binary file `<family>-<n>.table` with a JSON sidecar `.json`.
constexpr std::uint32_t kTableFormatVersion = 1;

void save_table(const Algebra& algebra, const MultiplicationTable& table, const std::string& path);
/// Throws VerificationFailure on a header or digest mismatch.
std::shared_ptr<const MultiplicationTable> load_table(const Algebra& algebra, const std::string& path);
/// DIAGTOR_CACHE_DIR, or empty when unset.
std::string default_cache_dir();
std::string table_cache_path(const AlgebraId& id, const std::string& dir);
/// Loads from dir when present and valid, else builds (and saves when dir is non-empty).
Algebra with_cached_table(const Algebra& algebra, const std::string& dir, unsigned threads = 1,
                          std::size_t budget = 50'000'000);

}  // namespace diagtor
