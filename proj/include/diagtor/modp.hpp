#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace diagtor {

/// Sparse vector over F_p: sorted (index, value) with values in [1, p).
using ModpVector = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

std::uint32_t modp_inverse(std::uint32_t a, std::uint32_t p);

/// Incremental semi-echelon basis over F_p with leading-index pivots.
///
/// Optional tags ride along with every vector, so dependencies found during
/// insertion come back as explicit combinations (used for kernels and solves).
/// Not thread-safe: reduction uses internal scratch buffers.
class ModpEchelon {
 public:
  ModpEchelon(std::uint32_t p, std::uint32_t dim, std::uint32_t tag_dim = 0);

  struct Insertion {
    bool independent;
    /// When dependent: tag combination that reduces the input to zero
    /// (input_tag minus the pivot tags used).
    ModpVector tag;
  };

  bool insert(const ModpVector& v);
  Insertion insert_tagged(const ModpVector& v, const ModpVector& tag);

  ModpVector reduce(const ModpVector& v) const;
  /// Residual of v; tag is updated in step with v.
  ModpVector reduce_tagged(const ModpVector& v, ModpVector& tag) const;
  bool contains(const ModpVector& v) const;

  std::size_t rank() const { return rank_; }
  std::uint32_t dim() const { return dim_; }
  std::uint32_t prime() const { return p_; }
  bool has_pivot(std::uint32_t i) const { return !pivots_[i].empty(); }
  const ModpVector& pivot(std::uint32_t i) const { return pivots_[i]; }
  const ModpVector& pivot_tag(std::uint32_t i) const { return tags_[i]; }

 private:
  ModpVector run(const ModpVector& v, ModpVector* tag, bool stop_at_free) const;

  std::uint32_t p_;
  std::uint32_t dim_;
  std::uint32_t tag_dim_;
  std::size_t rank_ = 0;
  std::vector<ModpVector> pivots_;
  std::vector<ModpVector> tags_;

  mutable std::vector<std::uint64_t> acc_;
  mutable std::vector<char> queued_;
  mutable std::vector<std::uint32_t> heap_;
  mutable std::vector<std::uint64_t> tag_acc_;
  mutable std::vector<char> tag_mark_;
  mutable std::vector<std::uint32_t> tag_touched_;
};

}  // namespace diagtor
