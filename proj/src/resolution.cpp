#include "diagtor/errors.hpp"
#include "diagtor/linalg.hpp"
#include "diagtor/torlab.hpp"

#include <algorithm>
#include <numeric>

namespace diagtor {

namespace {

void sort_merge(SparseVector& v) {
  std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size();) {
    Integer x = 0;
    const std::uint32_t idx = v[i].index;
    for (; i < v.size() && v[i].index == idx; ++i) x += v[i].value;
    if (x != 0) v[out++] = {idx, std::move(x)};
  }
  v.resize(out);
}

}  // namespace

FreeResolution::FreeResolution(const Algebra& algebra, const Integer& delta, unsigned top, std::size_t budget)
    : algebra_(algebra.has_table() ? algebra : algebra.with_table(build_table(algebra))), delta_(delta), top_(top) {
  const std::uint32_t dim = algebra_.dim();
  const std::uint32_t id = algebra_.identity_index();
  gens_.resize(top + 1);
  images_.resize(top + 1);
  gens_[0].push_back({{0, Integer(1)}});

  // Z-basis of ker(F_0 -> 1).
  std::vector<SparseVector> kernel;
  for (std::uint32_t b = 0; b < dim; ++b) {
    if (!algebra_.is_full_propagation(b))
      kernel.push_back({{b, Integer(1)}});
    else if (b != id)
      kernel.push_back(b < id ? SparseVector{{b, Integer(1)}, {id, Integer(-1)}}
                              : SparseVector{{id, Integer(-1)}, {b, Integer(1)}});
  }

  for (unsigned q = 1; q <= top; ++q) {
    const std::size_t rows = static_cast<std::size_t>(gens_[q - 1].size()) * dim;
    if (rows > budget) throw BudgetExceeded("free resolution degree " + std::to_string(q - 1), rows, budget);
    auto lattice = std::make_shared<IntLattice>(static_cast<std::uint32_t>(rows));
    std::vector<std::size_t> order(kernel.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return kernel[a].size() < kernel[b].size(); });
    for (auto k : order) {
      const SparseVector& y = kernel[k];
      if (lattice->contains(y)) continue;
      const auto g = static_cast<std::uint32_t>(gens_[q].size());
      if (static_cast<std::size_t>(g + 1) * dim > budget)
        throw BudgetExceeded("free resolution degree " + std::to_string(q), static_cast<std::size_t>(g + 1) * dim,
                             budget);
      gens_[q].push_back(y);
      for (std::uint32_t a = 0; a < dim; ++a) lattice->insert(act(a, y), {{g * dim + a, Integer(1)}});
    }
    images_[q] = lattice;
    if (q < top) kernel = lattice->relations();
  }
}

SparseVector FreeResolution::act(std::uint32_t a, const SparseVector& v) const {
  const std::uint32_t dim = algebra_.dim();
  SparseVector out;
  out.reserve(v.size());
  for (const auto& e : v) {
    const std::uint32_t j = e.index / dim, b = e.index % dim;
    Product p = algebra_.product(a, b);
    if (p.loops == 0) {
      out.push_back({j * dim + p.index, e.value});
    } else {
      Integer c = e.value * boost::multiprecision::pow(delta_, p.loops);
      if (c != 0) out.push_back({j * dim + p.index, std::move(c)});
    }
  }
  sort_merge(out);
  return out;
}

SparseMatrix FreeResolution::reduced_differential(unsigned q) const {
  if (q > top_) throw InvalidArgument("resolution computed up to degree " + std::to_string(top_));
  if (q == 0) return SparseMatrix(0, generators(0));
  const std::uint32_t dim = algebra_.dim();
  std::vector<SparseVector> cols;
  for (const auto& y : gens_[q]) {
    SparseVector c;
    for (const auto& e : y)
      if (algebra_.is_full_propagation(e.index % dim)) c.push_back({e.index / dim, e.value});
    sort_merge(c);
    cols.push_back(std::move(c));
  }
  return SparseMatrix::from_columns(generators(q - 1), std::move(cols));
}

std::optional<SparseVector> FreeResolution::lift(unsigned q, const SparseVector& v) const {
  if (q == 0 || q > top_) throw InvalidArgument("lift degree out of range");
  return images_[q]->solve(v);
}

TorReport tor_resolution(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max) {
  FreeResolution f(algebra, integral_delta(ring), q_max + 1);
  TorReport r{algebra.id(), ring.spec(), "resolution", {}};
  SparseMatrix below = f.reduced_differential(0);
  for (unsigned q = 0; q <= q_max; ++q) {
    SparseMatrix above = f.reduced_differential(q + 1);
    r.groups.push_back(chain_homology(below, above, ring));
    below = std::move(above);
  }
  return r;
}

std::vector<std::size_t> minimal_resolution_betti(const Algebra& algebra, const CoefficientRing& ring,
                                                  unsigned q_max) {
  if (!ring.is_field()) throw UnsupportedRing("Betti numbers need a field, got " + ring.spec());
  std::vector<std::size_t> out;
  for (const auto& h : tor_resolution(algebra, ring, q_max).groups) out.push_back(h.free_rank);
  return out;
}

std::vector<HomologyGroup> group_homology_cyclic(unsigned n, const CoefficientRing& ring, unsigned q_max) {
  if (n == 0) throw InvalidArgument("cyclic group of order 0");
  auto d = [&](unsigned q) {
    if (q == 0) return SparseMatrix(0, 1);
    if (q % 2 == 1) return SparseMatrix(1, 1);
    return SparseMatrix::from_triplets(1, 1, {{0, 0, Integer(n)}});
  };
  std::vector<HomologyGroup> out;
  for (unsigned q = 0; q <= q_max; ++q) out.push_back(chain_homology(d(q), d(q + 1), ring));
  return out;
}

}  // namespace diagtor
