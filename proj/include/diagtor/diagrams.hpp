#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace diagtor {

/// Largest strand count for diagram values (composition, serialization).
constexpr unsigned kMaxStrands = 16;
/// Largest strand count for which bases are enumerated and keyed.
constexpr unsigned kMaxBasisStrands = 8;

/// 1-based label; primed labels sit on the top row.
struct VertexLabel {
  unsigned index;
  bool primed;
  bool operator==(const VertexLabel&) const = default;
};

/// Partition of {1..n, 1'..n'}.
///
/// Vertex ids 0..n-1 are 1..n and n..2n-1 are 1'..n'. The canonical form is
/// the restricted growth string of block labels in vertex order, so equality
/// is structural.
class SetPartition {
 public:
  SetPartition() = default;

  /// Any labelling; canonicalized on construction.
  static SetPartition from_labels(unsigned n, const std::vector<unsigned>& labels);
  static SetPartition from_blocks(unsigned n, const std::vector<std::vector<VertexLabel>>& blocks);
  /// Text form such as `{1,2}{1',2'}`. n == 0 infers n from the largest label.
  static SetPartition parse(std::string_view text, unsigned n = 0);
  static SetPartition identity(unsigned n);

  unsigned n() const { return n_; }
  unsigned vertex_count() const { return 2 * n_; }
  unsigned block_of(unsigned vertex) const { return labels_[vertex]; }
  unsigned block_count() const;
  bool same_block(unsigned u, unsigned v) const { return labels_[u] == labels_[v]; }
  /// Blocks as sorted vertex ids, ordered by least element.
  std::vector<std::vector<unsigned>> blocks() const;
  bool is_pairing() const;

  std::string to_string() const;
  /// Injective for n <= kMaxBasisStrands.
  std::uint64_t key() const;

  bool operator==(const SetPartition& other) const { return n_ == other.n_ && labels_ == other.labels_; }
  bool operator<(const SetPartition& other) const {
    return n_ != other.n_ ? n_ < other.n_ : labels_ < other.labels_;
  }

 private:
  unsigned n_ = 0;
  std::array<std::uint8_t, 2 * kMaxStrands> labels_{};
};

std::string vertex_name(unsigned n, unsigned vertex);

struct Composition {
  SetPartition underlying;
  unsigned loops;
};

/// mu's top row is glued to nu's bottom row; loops are middle-only components.
Composition compose(const SetPartition& mu, const SetPartition& nu);

unsigned propagating_number(const SetPartition& rho);

enum class Family { Partition, Brauer, TemperleyLieb, JonesAnnular, GroupAlgebraSymmetric, GroupAlgebraCyclic };

std::string to_string(Family f);
/// Accepts partition, brauer, tl / temperley-lieb, jones, symmetric, cyclic.
Family parse_family(std::string_view name);
bool is_group_algebra(Family f);

/// Canonically ordered basis. Group algebras are ordered by group element:
/// rotations by k for the cyclic group, permutations lexicographically.
std::vector<SetPartition> enumerate_basis(Family family, unsigned n);

bool is_temperley_lieb(const SetPartition& rho);
bool in_family(Family family, const SetPartition& rho);

/// Arcs and defects on C_n, labels 1..n. Defects ascend.
struct AnnularLinkState {
  unsigned n = 0;
  std::vector<std::pair<unsigned, unsigned>> arcs;
  std::vector<unsigned> defects;

  static std::optional<AnnularLinkState> from_arcs(unsigned n, std::vector<std::pair<unsigned, unsigned>> arcs);
  unsigned defect_count() const { return static_cast<unsigned>(defects.size()); }
  bool valid() const;
  std::string to_string() const;
  bool operator==(const AnnularLinkState&) const = default;
};

struct AnnularDiagram {
  AnnularLinkState bottom;
  AnnularLinkState top;
  /// sigma(i) = i + rotation (mod t); zero when t = 0.
  unsigned rotation = 0;
  bool operator==(const AnnularDiagram&) const = default;
};

/// M(t), sorted by arc list.
std::vector<AnnularLinkState> link_states(unsigned n, unsigned t);

/// The i-th defect of q (top) joins the sigma(i)-th defect of p (bottom).
SetPartition build_annular(const AnnularLinkState& p, const AnnularLinkState& q, unsigned rotation);

std::optional<AnnularDiagram> decompose_annular(const SetPartition& rho);

}  // namespace diagtor
