#include "diagtor/linalg.hpp"

#include "diagtor/errors.hpp"
#include "diagtor/int_lattice.hpp"
#include "diagtor/smith.hpp"

namespace diagtor {

ModpVector to_modp(const SparseVector& v, std::uint32_t p) {
  ModpVector out;
  out.reserve(v.size());
  const Integer m = p;
  for (const auto& e : v) {
    auto x = static_cast<std::uint32_t>(mod_floor(e.value, m));
    if (x != 0) out.emplace_back(e.index, x);
  }
  return out;
}

SparseVector from_modp(const ModpVector& v) {
  SparseVector out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) out.push_back({i, Integer(x)});
  return out;
}

namespace {

void require_field(const CoefficientRing& ring, const char* what) {
  if (!ring.is_field()) throw UnsupportedRing(std::string(what) + " requires a field, got " + ring.spec());
}

}  // namespace

RankKernel rank_kernel(const SparseMatrix& m, const CoefficientRing& ring) {
  require_field(ring, "rank_kernel");
  RankKernel out;
  if (ring.kind() == RingKind::PrimeField) {
    ModpEchelon ech(ring.modulus(), m.rows(), m.cols());
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      auto ins = ech.insert_tagged(to_modp(m.column(j), ring.modulus()), ModpVector{{j, 1u}});
      if (!ins.independent) out.kernel_basis.push_back(from_modp(ins.tag));
    }
    out.rank = ech.rank();
    return out;
  }
  out.kernel_basis = integer_kernel(m);
  out.rank = m.cols() - out.kernel_basis.size();
  return out;
}

std::size_t rank(const SparseMatrix& m, const CoefficientRing& ring) {
  switch (ring.kind()) {
    case RingKind::PrimeField: {
      ModpEchelon ech(ring.modulus(), m.rows());
      for (std::uint32_t j = 0; j < m.cols(); ++j) ech.insert(to_modp(m.column(j), ring.modulus()));
      return ech.rank();
    }
    case RingKind::Integers:
    case RingKind::Rationals: return invariant_factors(m).rank;
    case RingKind::ModularRing: break;
  }
  throw UnsupportedRing("rank is not defined over " + ring.spec());
}

std::vector<SparseVector> integer_kernel(const SparseMatrix& m) {
  IntLattice lattice(m.rows());
  for (std::uint32_t j = 0; j < m.cols(); ++j) lattice.insert(m.column(j), SparseVector{{j, Integer(1)}});
  return lattice.relations();
}

std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b, const CoefficientRing& ring) {
  if (ring.kind() == RingKind::PrimeField) {
    const std::uint32_t p = ring.modulus();
    ModpEchelon ech(p, m.rows(), m.cols());
    for (std::uint32_t j = 0; j < m.cols(); ++j) ech.insert_tagged(to_modp(m.column(j), p), ModpVector{{j, 1u}});
    ModpVector tag;
    if (!ech.reduce_tagged(to_modp(b, p), tag).empty()) return std::nullopt;
    // residual = b + m * tag = 0
    for (auto& e : tag) e.second = e.second == 0 ? 0 : p - e.second;
    return from_modp(tag);
  }
  if (ring.kind() != RingKind::Integers) throw UnsupportedRing("solve supports Z and F_p, got " + ring.spec());
  IntLattice lattice(m.rows());
  for (std::uint32_t j = 0; j < m.cols(); ++j) lattice.insert(m.column(j), SparseVector{{j, Integer(1)}});
  return lattice.solve(b);
}

std::size_t dense_rank(const DenseMatrix& m, const CoefficientRing& ring) {
  require_field(ring, "dense_rank");
  std::vector<std::vector<Scalar>> a(m.rows(), std::vector<Scalar>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = ring.normalize(Scalar(m(i, j)));
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[r]);
    Scalar inv = ring.inverse(a[r][c]);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (a[i][c] == 0) continue;
      Scalar f = ring.mul(a[i][c], inv);
      for (std::size_t k = c; k < m.cols(); ++k) a[i][k] = ring.sub(a[i][k], ring.mul(f, a[r][k]));
    }
    ++r;
  }
  return r;
}

}  // namespace diagtor
