#include "diagtor/diagrams.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace diagtor {

namespace {

void check_n(unsigned n) {
  if (n < 1 || n > kMaxStrands)
    throw InvalidArgument("strand count must be in 1.." + std::to_string(kMaxStrands) + ", got " + std::to_string(n));
}

/// Union-find over at most 3 * kMaxStrands nodes.
struct UnionFind {
  std::array<std::uint8_t, 3 * kMaxStrands> parent{};
  explicit UnionFind(unsigned size) {
    for (unsigned i = 0; i < size; ++i) parent[i] = static_cast<std::uint8_t>(i);
  }
  unsigned find(unsigned x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = static_cast<std::uint8_t>(std::min(a, b));
  }
};

/// Is x in the open cyclic interval (a, b) of C_n (labels 1..n)?
bool in_open_interval(unsigned x, unsigned a, unsigned b, unsigned n) {
  unsigned dx = (x + n - a) % n;
  unsigned db = (b + n - a) % n;
  return dx > 0 && dx < db;
}

}  // namespace

SetPartition SetPartition::from_labels(unsigned n, const std::vector<unsigned>& labels) {
  check_n(n);
  if (labels.size() != 2 * n) throw InvalidArgument("label vector must have 2n entries");
  SetPartition p;
  p.n_ = n;
  std::vector<int> remap;
  int next = 0;
  for (unsigned v = 0; v < 2 * n; ++v) {
    unsigned l = labels[v];
    if (l >= remap.size()) remap.resize(l + 1, -1);
    if (remap[l] < 0) remap[l] = next++;
    p.labels_[v] = static_cast<std::uint8_t>(remap[l]);
  }
  return p;
}

SetPartition SetPartition::from_blocks(unsigned n, const std::vector<std::vector<VertexLabel>>& blocks) {
  check_n(n);
  std::vector<unsigned> labels(2 * n, ~0u);
  for (unsigned b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw InvalidArgument("empty block");
    for (const auto& v : blocks[b]) {
      if (v.index < 1 || v.index > n) throw InvalidArgument("vertex label out of range");
      unsigned id = v.index - 1 + (v.primed ? n : 0);
      if (labels[id] != ~0u) throw InvalidArgument("vertex appears in two blocks");
      labels[id] = b;
    }
  }
  for (auto l : labels)
    if (l == ~0u) throw InvalidArgument("blocks do not cover every vertex");
  return from_labels(n, labels);
}

SetPartition SetPartition::parse(std::string_view text, unsigned n) {
  std::vector<std::vector<VertexLabel>> blocks;
  unsigned max_label = 0;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  while (pos < text.size()) {
    if (text[pos] != '{') throw InvalidArgument("expected '{' in partition text");
    ++pos;
    std::vector<VertexLabel> block;
    for (;;) {
      skip();
      unsigned value = 0;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        value = value * 10 + static_cast<unsigned>(text[pos++] - '0');
      if (pos == start) throw InvalidArgument("expected a vertex label in partition text");
      bool primed = pos < text.size() && text[pos] == '\'';
      if (primed) ++pos;
      block.push_back({value, primed});
      max_label = std::max(max_label, value);
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        break;
      }
      throw InvalidArgument("expected ',' or '}' in partition text");
    }
    blocks.push_back(std::move(block));
    skip();
  }
  return from_blocks(n == 0 ? max_label : n, blocks);
}

SetPartition SetPartition::identity(unsigned n) {
  std::vector<unsigned> labels(2 * n);
  for (unsigned i = 0; i < n; ++i) labels[i] = labels[n + i] = i;
  return from_labels(n, labels);
}

unsigned SetPartition::block_count() const {
  unsigned m = 0;
  for (unsigned v = 0; v < 2 * n_; ++v) m = std::max<unsigned>(m, labels_[v] + 1u);
  return m;
}

std::vector<std::vector<unsigned>> SetPartition::blocks() const {
  std::vector<std::vector<unsigned>> out(block_count());
  for (unsigned v = 0; v < 2 * n_; ++v) out[labels_[v]].push_back(v);
  return out;
}

bool SetPartition::is_pairing() const {
  for (const auto& b : blocks())
    if (b.size() != 2) return false;
  return true;
}

std::string vertex_name(unsigned n, unsigned vertex) {
  return vertex < n ? std::to_string(vertex + 1) : std::to_string(vertex - n + 1) + "'";
}

std::string SetPartition::to_string() const {
  std::string out;
  for (const auto& b : blocks()) {
    out += '{';
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k) out += ',';
      out += vertex_name(n_, b[k]);
    }
    out += '}';
  }
  return out;
}

std::uint64_t SetPartition::key() const {
  std::uint64_t k = 0;
  for (unsigned v = 0; v < 2 * n_; ++v) k = (k << 4) | labels_[v];
  return k;
}

Composition compose(const SetPartition& mu, const SetPartition& nu) {
  const unsigned n = mu.n();
  if (nu.n() != n) throw DimensionMismatch("cannot compose diagrams on different strand counts");
  UnionFind uf(3 * n);
  std::array<int, 2 * kMaxStrands> first;
  first.fill(-1);
  for (unsigned v = 0; v < 2 * n; ++v) {
    unsigned node = v;
    unsigned b = mu.block_of(v);
    if (first[b] < 0)
      first[b] = static_cast<int>(node);
    else
      uf.unite(node, static_cast<unsigned>(first[b]));
  }
  first.fill(-1);
  for (unsigned v = 0; v < 2 * n; ++v) {
    unsigned node = v + n;
    unsigned b = nu.block_of(v);
    if (first[b] < 0)
      first[b] = static_cast<int>(node);
    else
      uf.unite(node, static_cast<unsigned>(first[b]));
  }
  std::array<std::uint8_t, 3 * kMaxStrands> outer{};
  for (unsigned i = 0; i < n; ++i) {
    outer[uf.find(i)] = 1;
    outer[uf.find(2 * n + i)] = 1;
  }
  std::array<std::uint8_t, 3 * kMaxStrands> counted{};
  unsigned loops = 0;
  for (unsigned i = n; i < 2 * n; ++i) {
    unsigned r = uf.find(i);
    if (!outer[r] && !counted[r]) {
      counted[r] = 1;
      ++loops;
    }
  }
  std::vector<unsigned> labels(2 * n);
  for (unsigned i = 0; i < n; ++i) {
    labels[i] = uf.find(i);
    labels[n + i] = uf.find(2 * n + i);
  }
  return {SetPartition::from_labels(n, labels), loops};
}

unsigned propagating_number(const SetPartition& rho) {
  const unsigned n = rho.n();
  std::array<std::uint8_t, 2 * kMaxStrands> bottom{}, top{};
  for (unsigned i = 0; i < n; ++i) {
    bottom[rho.block_of(i)] = 1;
    top[rho.block_of(n + i)] = 1;
  }
  unsigned count = 0;
  for (unsigned b = 0; b < 2 * n; ++b)
    if (bottom[b] && top[b]) ++count;
  return count;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Partition: return "partition";
    case Family::Brauer: return "brauer";
    case Family::TemperleyLieb: return "tl";
    case Family::JonesAnnular: return "jones";
    case Family::GroupAlgebraSymmetric: return "symmetric";
    case Family::GroupAlgebraCyclic: return "cyclic";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "partition" || name == "P") return Family::Partition;
  if (name == "brauer" || name == "Br") return Family::Brauer;
  if (name == "tl" || name == "temperley-lieb" || name == "TL") return Family::TemperleyLieb;
  if (name == "jones" || name == "J") return Family::JonesAnnular;
  if (name == "symmetric" || name == "S") return Family::GroupAlgebraSymmetric;
  if (name == "cyclic" || name == "C") return Family::GroupAlgebraCyclic;
  throw InvalidArgument("unknown family '" + std::string(name) +
                        "' (expected partition, brauer, tl, jones, symmetric or cyclic)");
}

bool is_group_algebra(Family f) { return f == Family::GroupAlgebraSymmetric || f == Family::GroupAlgebraCyclic; }

namespace {

void enumerate_partitions(unsigned n, std::vector<SetPartition>& out) {
  const unsigned m = 2 * n;
  std::vector<unsigned> rgs(m, 0), maxima(m, 0);
  for (;;) {
    out.push_back(SetPartition::from_labels(n, rgs));
    int i = static_cast<int>(m) - 1;
    while (i > 0 && rgs[i] == maxima[i - 1] + 1) --i;
    if (i <= 0) break;
    ++rgs[i];
    maxima[i] = std::max(maxima[i - 1], rgs[i]);
    for (unsigned k = i + 1; k < m; ++k) {
      rgs[k] = 0;
      maxima[k] = maxima[i];
    }
  }
}

void enumerate_matchings(std::vector<unsigned>& labels, std::vector<char>& used, unsigned next_label, unsigned n,
                         std::vector<SetPartition>& out) {
  unsigned first = 0;
  while (first < 2 * n && used[first]) ++first;
  if (first == 2 * n) {
    out.push_back(SetPartition::from_labels(n, labels));
    return;
  }
  used[first] = 1;
  labels[first] = next_label;
  for (unsigned other = first + 1; other < 2 * n; ++other) {
    if (used[other]) continue;
    used[other] = 1;
    labels[other] = next_label;
    enumerate_matchings(labels, used, next_label + 1, n, out);
    used[other] = 0;
  }
  used[first] = 0;
}

/// Non-crossing perfect matchings of positions [lo, hi) on a line.
void noncrossing(unsigned lo, unsigned hi, std::vector<std::vector<std::pair<unsigned, unsigned>>>& out) {
  if (lo >= hi) {
    out.push_back({});
    return;
  }
  for (unsigned k = lo + 1; k < hi; k += 2) {
    std::vector<std::vector<std::pair<unsigned, unsigned>>> inner, rest;
    noncrossing(lo + 1, k, inner);
    noncrossing(k + 1, hi, rest);
    for (const auto& a : inner)
      for (const auto& b : rest) {
        auto m = a;
        m.emplace_back(lo, k);
        m.insert(m.end(), b.begin(), b.end());
        out.push_back(std::move(m));
      }
  }
}

/// Boundary position of vertex id, reading 1..n then n'..1'.
unsigned boundary_position(unsigned n, unsigned vertex) { return vertex < n ? vertex : 3 * n - 1 - vertex; }
unsigned vertex_at_position(unsigned n, unsigned pos) { return pos < n ? pos : 3 * n - 1 - pos; }

}  // namespace

bool is_temperley_lieb(const SetPartition& rho) {
  if (!rho.is_pairing()) return false;
  const unsigned n = rho.n();
  std::vector<std::pair<unsigned, unsigned>> chords;
  for (const auto& b : rho.blocks()) {
    unsigned a = boundary_position(n, b[0]), c = boundary_position(n, b[1]);
    chords.emplace_back(std::min(a, c), std::max(a, c));
  }
  for (const auto& [a, b] : chords)
    for (const auto& [c, d] : chords)
      if (a < c && c < b && b < d) return false;
  return true;
}

std::vector<SetPartition> enumerate_basis(Family family, unsigned n) {
  if (n < 1 || n > kMaxBasisStrands)
    throw InvalidArgument("basis enumeration supports n in 1.." + std::to_string(kMaxBasisStrands));
  std::vector<SetPartition> out;
  switch (family) {
    case Family::Partition: enumerate_partitions(n, out); break;
    case Family::Brauer: {
      std::vector<unsigned> labels(2 * n, 0);
      std::vector<char> used(2 * n, 0);
      enumerate_matchings(labels, used, 0, n, out);
      break;
    }
    case Family::TemperleyLieb: {
      std::vector<std::vector<std::pair<unsigned, unsigned>>> matchings;
      noncrossing(0, 2 * n, matchings);
      for (const auto& m : matchings) {
        std::vector<unsigned> labels(2 * n);
        for (unsigned k = 0; k < m.size(); ++k) {
          labels[vertex_at_position(n, m[k].first)] = k;
          labels[vertex_at_position(n, m[k].second)] = k;
        }
        out.push_back(SetPartition::from_labels(n, labels));
      }
      break;
    }
    case Family::JonesAnnular:
      for (unsigned t = 0; t <= n; ++t) {
        auto states = link_states(n, t);
        for (const auto& p : states)
          for (const auto& q : states)
            for (unsigned s = 0; s < std::max(t, 1u); ++s) out.push_back(build_annular(p, q, s));
      }
      break;
    case Family::GroupAlgebraSymmetric: {
      std::vector<unsigned> perm(n);
      std::iota(perm.begin(), perm.end(), 0u);
      do {
        std::vector<unsigned> labels(2 * n);
        for (unsigned i = 0; i < n; ++i) {
          labels[i] = i;
          labels[n + perm[i]] = i;
        }
        out.push_back(SetPartition::from_labels(n, labels));
      } while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }
    case Family::GroupAlgebraCyclic:
      for (unsigned k = 0; k < n; ++k) {
        std::vector<unsigned> labels(2 * n);
        for (unsigned i = 0; i < n; ++i) {
          labels[i] = i;
          labels[n + (i + k) % n] = i;
        }
        out.push_back(SetPartition::from_labels(n, labels));
      }
      return out;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool in_family(Family family, const SetPartition& rho) {
  switch (family) {
    case Family::Partition: return true;
    case Family::Brauer: return rho.is_pairing();
    case Family::TemperleyLieb: return is_temperley_lieb(rho);
    case Family::JonesAnnular: return decompose_annular(rho).has_value();
    case Family::GroupAlgebraSymmetric: return rho.is_pairing() && propagating_number(rho) == rho.n();
    case Family::GroupAlgebraCyclic: {
      if (!rho.is_pairing() || propagating_number(rho) != rho.n()) return false;
      auto d = decompose_annular(rho);
      return d.has_value();
    }
  }
  return false;
}

std::optional<AnnularLinkState> AnnularLinkState::from_arcs(unsigned n, std::vector<std::pair<unsigned, unsigned>> arcs) {
  AnnularLinkState s;
  s.n = n;
  std::vector<char> used(n + 1, 0);
  for (auto& [a, b] : arcs) {
    if (a > b) std::swap(a, b);
    if (a < 1 || b > n || a == b || used[a] || used[b]) return std::nullopt;
    used[a] = used[b] = 1;
  }
  std::sort(arcs.begin(), arcs.end());
  s.arcs = std::move(arcs);
  for (unsigned i = 1; i <= n; ++i)
    if (!used[i]) s.defects.push_back(i);
  if (!s.valid()) return std::nullopt;
  return s;
}

bool AnnularLinkState::valid() const {
  for (const auto& [i, j] : arcs) {
    for (const auto& [a, b] : arcs) {
      if (a == i && b == j) continue;
      if (in_open_interval(a, i, j, n) != in_open_interval(b, i, j, n)) return false;
    }
    if (!defects.empty()) {
      bool first = in_open_interval(defects.front(), i, j, n);
      for (auto d : defects)
        if (in_open_interval(d, i, j, n) != first) return false;
    }
  }
  return true;
}

std::string AnnularLinkState::to_string() const {
  std::string out;
  for (const auto& [a, b] : arcs) out += "{" + std::to_string(a) + "," + std::to_string(b) + "}";
  for (auto d : defects) out += "{" + std::to_string(d) + "}";
  return out;
}

namespace {

void partial_matchings(unsigned n, unsigned pos, unsigned arcs_left, std::vector<char>& used,
                       std::vector<std::pair<unsigned, unsigned>>& arcs, std::vector<AnnularLinkState>& out) {
  if (arcs_left == 0) {
    if (auto s = AnnularLinkState::from_arcs(n, arcs)) out.push_back(std::move(*s));
    return;
  }
  while (pos <= n && used[pos]) ++pos;
  if (pos > n) return;
  // pos is either a defect or the left end of an arc.
  partial_matchings(n, pos + 1, arcs_left, used, arcs, out);
  used[pos] = 1;
  for (unsigned other = pos + 1; other <= n; ++other) {
    if (used[other]) continue;
    used[other] = 1;
    arcs.emplace_back(pos, other);
    partial_matchings(n, pos + 1, arcs_left - 1, used, arcs, out);
    arcs.pop_back();
    used[other] = 0;
  }
  used[pos] = 0;
}

}  // namespace

std::vector<AnnularLinkState> link_states(unsigned n, unsigned t) {
  check_n(n);
  if (t > n) throw InvalidArgument("defect count exceeds strand count");
  std::vector<AnnularLinkState> out;
  if ((n - t) % 2 != 0) return out;
  std::vector<char> used(n + 2, 0);
  std::vector<std::pair<unsigned, unsigned>> arcs;
  partial_matchings(n, 1, (n - t) / 2, used, arcs, out);
  std::sort(out.begin(), out.end(), [](const AnnularLinkState& a, const AnnularLinkState& b) { return a.arcs < b.arcs; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SetPartition build_annular(const AnnularLinkState& p, const AnnularLinkState& q, unsigned rotation) {
  if (p.n != q.n) throw DimensionMismatch("link states on different strand counts");
  const unsigned n = p.n, t = p.defect_count();
  if (q.defect_count() != t) throw InvalidArgument("link states have different defect counts");
  if (t == 0 ? rotation != 0 : rotation >= t) throw InvalidArgument("rotation out of range");
  std::vector<unsigned> labels(2 * n);
  unsigned next = 0;
  for (const auto& [a, b] : p.arcs) labels[a - 1] = labels[b - 1] = next++;
  for (const auto& [a, b] : q.arcs) labels[n + a - 1] = labels[n + b - 1] = next++;
  for (unsigned i = 0; i < t; ++i) {
    labels[n + q.defects[i] - 1] = next;
    labels[p.defects[(i + rotation) % t] - 1] = next;
    ++next;
  }
  return SetPartition::from_labels(n, labels);
}

std::optional<AnnularDiagram> decompose_annular(const SetPartition& rho) {
  if (!rho.is_pairing()) return std::nullopt;
  const unsigned n = rho.n();
  std::vector<std::pair<unsigned, unsigned>> bottom_arcs, top_arcs;
  std::vector<std::pair<unsigned, unsigned>> through;  // (top label, bottom label)
  for (const auto& b : rho.blocks()) {
    unsigned u = b[0], v = b[1];
    if (v < n)
      bottom_arcs.emplace_back(u + 1, v + 1);
    else if (u >= n)
      top_arcs.emplace_back(u - n + 1, v - n + 1);
    else
      through.emplace_back(v - n + 1, u + 1);
  }
  auto p = AnnularLinkState::from_arcs(n, bottom_arcs);
  auto q = AnnularLinkState::from_arcs(n, top_arcs);
  if (!p || !q || p->defect_count() != q->defect_count()) return std::nullopt;
  const unsigned t = p->defect_count();
  unsigned rotation = 0;
  if (t > 0) {
    std::sort(through.begin(), through.end());
    auto rank_in = [](const std::vector<unsigned>& defects, unsigned label) {
      return static_cast<unsigned>(std::lower_bound(defects.begin(), defects.end(), label) - defects.begin());
    };
    rotation = rank_in(p->defects, through[0].second);
    for (unsigned i = 0; i < t; ++i) {
      unsigned top_rank = rank_in(q->defects, through[i].first);
      unsigned bottom_rank = rank_in(p->defects, through[i].second);
      if (top_rank != i || bottom_rank != (i + rotation) % t) return std::nullopt;
    }
  }
  AnnularDiagram d{std::move(*p), std::move(*q), rotation};
  if (!(build_annular(d.bottom, d.top, d.rotation) == rho)) return std::nullopt;
  return d;
}

}  // namespace diagtor
