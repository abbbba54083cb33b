#include "diagtor/homology.hpp"

#include "diagtor/errors.hpp"
#include "diagtor/int_lattice.hpp"
#include "diagtor/linalg.hpp"
#include "diagtor/modp.hpp"
#include "diagtor/smith.hpp"

#include <algorithm>

namespace diagtor {

std::string HomologyGroup::to_string(const CoefficientRing& ring) const {
  if (is_zero()) return "0";
  std::string base;
  switch (ring.kind()) {
    case RingKind::Integers: base = "Z"; break;
    case RingKind::Rationals: base = "Q"; break;
    case RingKind::PrimeField: base = "F" + std::to_string(ring.modulus()); break;
    case RingKind::ModularRing: base = "Z/" + std::to_string(ring.modulus()); break;
  }
  std::string out;
  for (const auto& t : torsion) {
    if (!out.empty()) out += " + ";
    out += "Z/" + t.str();
  }
  if (free_rank > 0) {
    if (!out.empty()) out += " + ";
    out += base;
    if (free_rank > 1) out += "^" + std::to_string(free_rank);
  }
  return out;
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::Isomorphism: return "isomorphism";
    case MapClass::SurjectiveNotInjective: return "surjective_not_injective";
    case MapClass::Neither: return "neither";
  }
  return "neither";
}

void require_composes_to_zero(const SparseMatrix& a, const SparseMatrix& b, const CoefficientRing& ring) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("differentials do not compose: " + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
  if (!(a * b).reduced(ring).is_zero()) throw NotAComplex("d_q * d_{q+1} is nonzero");
}

namespace {

bool is_cycle(const SparseMatrix& d, const SparseVector& z, const CoefficientRing& ring) {
  SparseVector image = multiply(d, z);
  for (const auto& e : image)
    if (ring.reduce(e.value) != 0) return false;
  return true;
}

}  // namespace

HomologyGroup lattice_homology_mod(const SparseMatrix& d_q, const SparseMatrix& d_q1, std::uint32_t m) {
  const std::uint32_t c = d_q.cols(), r = d_q.rows();
  std::vector<SparseVector> augmented = d_q.columns();
  for (std::uint32_t i = 0; i < r; ++i) augmented.push_back({{i, Integer(m)}});
  auto kernel = integer_kernel(SparseMatrix::from_columns(r, std::move(augmented)));
  IntLattice lattice(c);
  for (auto& v : kernel) {
    std::erase_if(v, [&](const Entry& e) { return e.index >= c; });
    lattice.insert(v, {});
  }
  auto basis = lattice.basis();
  IntLattice solver(c);
  for (std::uint32_t i = 0; i < basis.size(); ++i) solver.insert(basis[i], {{i, Integer(1)}});
  std::vector<SparseVector> relations = d_q1.columns();
  for (std::uint32_t i = 0; i < c; ++i) relations.push_back({{i, Integer(m)}});
  DenseMatrix rel(basis.size(), relations.size());
  for (std::size_t j = 0; j < relations.size(); ++j) {
    auto tag = solver.solve(relations[j]);
    if (!tag) throw VerificationFailure("relation outside cycle lattice");
    for (const auto& e : *tag) rel(e.index, j) = e.value;
  }
  HomologyGroup h;
  auto factors = dense_invariant_factors(rel);
  for (auto& f : factors)
    if (f != 1) h.torsion.push_back(f);
  return h;
}

namespace {

/// Integral complex tensored with Z/m: H_q(C) (x) Z/m + Tor(H_{q-1}(C), Z/m).
/// The torsion of H_{q-1} is the nontrivial invariant factors of d_q.
HomologyGroup universal_coefficients(const SparseMatrix& d_q, const SparseMatrix& d_q1, std::uint32_t m) {
  auto inv_q = invariant_factors(d_q);
  auto inv_q1 = invariant_factors(d_q1);
  const std::size_t beta = d_q.cols() - inv_q.rank - inv_q1.rank;
  const Integer mod(m);
  std::vector<Integer> orders(beta, mod);
  for (const auto* inv : {&inv_q1, &inv_q})
    for (const auto& t : inv->nontrivial) {
      Integer g = gcd(t, mod);
      if (g != 1) orders.push_back(g);
    }
  DenseMatrix diag(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) diag(i, i) = orders[i];
  HomologyGroup h;
  for (auto& f : dense_invariant_factors(diag))
    if (f != 1) h.torsion.push_back(f);
  return h;
}

}  // namespace

HomologyGroup chain_homology(const SparseMatrix& d_q, const SparseMatrix& d_q1, const CoefficientRing& ring) {
  require_composes_to_zero(d_q, d_q1, ring);
  HomologyGroup h;
  const std::size_t c = d_q.cols();
  switch (ring.kind()) {
    case RingKind::PrimeField:
    case RingKind::Rationals: h.free_rank = c - rank(d_q, ring) - rank(d_q1, ring); break;
    case RingKind::Integers: {
      auto inv = invariant_factors(d_q1);
      h.free_rank = c - rank(d_q, ring) - inv.rank;
      h.torsion = std::move(inv.nontrivial);
      break;
    }
    case RingKind::ModularRing:
      if ((d_q * d_q1).is_zero())
        h = universal_coefficients(d_q, d_q1, ring.modulus());
      else
        h = lattice_homology_mod(d_q, d_q1, ring.modulus());
      break;
  }
  return h;
}

struct HomologyBasis::Impl {
  CoefficientRing ring;
  SparseMatrix d_q;
  // Prime field data.
  std::unique_ptr<ModpEchelon> modp;
  // Integral data.
  std::unique_ptr<IntLattice> kernel_solver;
  std::unique_ptr<IntLattice> boundaries;
  std::vector<std::uint32_t> free_rows;
  std::vector<std::int64_t> row_index;
  DenseMatrix left;
  /// (SNF index, modulus or 0 for free) for each kept coordinate.
  std::vector<std::pair<std::size_t, Integer>> kept;

  explicit Impl(const CoefficientRing& r) : ring(r) {}
};

HomologyBasis::HomologyBasis(const SparseMatrix& d_q, const SparseMatrix& d_q1, const CoefficientRing& ring) {
  require_composes_to_zero(d_q, d_q1, ring);
  auto impl = std::make_shared<Impl>(ring);
  impl->d_q = d_q;
  const std::uint32_t c = d_q.cols();
  if (ring.kind() == RingKind::PrimeField) {
    const std::uint32_t p = ring.modulus();
    auto kernel = rank_kernel(d_q, ring).kernel_basis;
    impl->modp = std::make_unique<ModpEchelon>(p, c, static_cast<std::uint32_t>(std::max<std::size_t>(1, kernel.size())));
    for (std::uint32_t j = 0; j < d_q1.cols(); ++j) impl->modp->insert_tagged(to_modp(d_q1.column(j), p), {});
    for (auto& z : kernel) {
      auto idx = static_cast<std::uint32_t>(generators_.size());
      if (impl->modp->insert_tagged(to_modp(z, p), ModpVector{{idx, 1u}}).independent) generators_.push_back(z);
    }
    group_.free_rank = generators_.size();
  } else if (ring.kind() == RingKind::Integers || ring.kind() == RingKind::Rationals) {
    auto kernel = integer_kernel(d_q);
    const std::size_t k = kernel.size();
    impl->kernel_solver = std::make_unique<IntLattice>(c);
    for (std::uint32_t i = 0; i < k; ++i) impl->kernel_solver->insert(kernel[i], {{i, Integer(1)}});
    // Boundaries in cycle coordinates. Unit pivots are eliminated sparsely, so
    // the quotient lives on the non-pivot rows modulo the residual generators.
    impl->boundaries = std::make_unique<IntLattice>(static_cast<std::uint32_t>(k));
    for (std::uint32_t j = 0; j < d_q1.cols(); ++j) {
      auto tag = impl->kernel_solver->solve(d_q1.column(j));
      if (!tag) throw NotAComplex("boundary outside the cycle lattice");
      impl->boundaries->insert(*tag, {});
    }
    impl->row_index.assign(k, -1);
    for (std::uint32_t r = 0; r < k; ++r)
      if (!impl->boundaries->is_pivot_row(r)) {
        impl->row_index[r] = static_cast<std::int64_t>(impl->free_rows.size());
        impl->free_rows.push_back(r);
      }
    const std::size_t f = impl->free_rows.size();
    auto residual = impl->boundaries->residual();
    DenseMatrix rel(f, residual.size());
    for (std::size_t j = 0; j < residual.size(); ++j)
      for (const auto& e : residual[j]) rel(static_cast<std::size_t>(impl->row_index[e.index]), j) = e.value;
    auto snf = smith_normal_form(rel);
    impl->left = std::move(snf.left);
    const bool rational = ring.kind() == RingKind::Rationals;
    for (std::size_t i = 0; i < f; ++i) {
      Integer modulus = i < snf.diagonal.size() ? snf.diagonal[i] : Integer(0);
      if (modulus == 1 || (rational && modulus != 0)) continue;
      impl->kept.emplace_back(i, modulus);
      if (modulus == 0)
        ++group_.free_rank;
      else
        group_.torsion.push_back(modulus);
      SparseVector gen;
      for (std::size_t r = 0; r < f; ++r)
        if (snf.left_inverse(r, i) != 0) gen = axpy(gen, snf.left_inverse(r, i), kernel[impl->free_rows[r]]);
      generators_.push_back(std::move(gen));
    }
  } else {
    throw UnsupportedRing("homology bases are not available over " + ring.spec());
  }
  impl_ = std::move(impl);
}

std::vector<Integer> HomologyBasis::coordinates(const SparseVector& z) const {
  const Impl& im = *impl_;
  if (!is_cycle(im.d_q, z, im.ring)) throw VerificationFailure("coordinates requested for a non-cycle");
  std::vector<Integer> out(generators_.size());
  if (im.modp) {
    const std::uint32_t p = im.ring.modulus();
    ModpVector tag;
    if (!im.modp->reduce_tagged(to_modp(z, p), tag).empty())
      throw VerificationFailure("cycle not spanned by boundaries and generators");
    for (const auto& [i, x] : tag) out[i] = (p - x) % p;
    return out;
  }
  auto tag = im.kernel_solver->solve(z);
  if (!tag) throw VerificationFailure("cycle outside kernel lattice");
  std::vector<Integer> c(im.left.cols());
  for (const auto& e : im.boundaries->reduced(*tag)) c[static_cast<std::size_t>(im.row_index[e.index])] = e.value;
  for (std::size_t k = 0; k < im.kept.size(); ++k) {
    const auto& [row, modulus] = im.kept[k];
    Integer v = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0 && im.left(row, j) != 0) v += im.left(row, j) * c[j];
    out[k] = modulus == 0 ? v : mod_floor(v, modulus);
  }
  return out;
}

MapClass classify_map(const HomologyGroup& source, const HomologyGroup& target, const DenseMatrix& matrix,
                      const CoefficientRing& ring) {
  if (matrix.rows() != target.generators() || matrix.cols() != source.generators())
    throw DimensionMismatch("induced matrix shape does not match the groups");
  bool surjective;
  if (ring.is_field()) {
    surjective = dense_rank(matrix, ring) == target.generators();
  } else if (ring.kind() == RingKind::Integers) {
    const std::size_t a = target.torsion.size(), rows = target.generators();
    DenseMatrix m(rows, a + matrix.cols());
    for (std::size_t i = 0; i < a; ++i) m(i, i) = target.torsion[i];
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < matrix.cols(); ++j) m(i, a + j) = matrix(i, j);
    auto factors = dense_invariant_factors(m);
    surjective = factors.size() == rows;
    for (const auto& f : factors)
      if (f != 1) surjective = false;
  } else {
    throw UnsupportedRing("map classification is not available over " + ring.spec());
  }
  if (!surjective) return MapClass::Neither;
  return source == target ? MapClass::Isomorphism : MapClass::SurjectiveNotInjective;
}

InducedMap induced_map_from_bases(const HomologyBasis& source, const HomologyBasis& target, const SparseMatrix& f_q,
                                  const CoefficientRing& ring) {
  InducedMap out;
  out.source = source.group();
  out.target = target.group();
  out.matrix = DenseMatrix(target.generators().size(), source.generators().size());
  for (std::size_t j = 0; j < source.generators().size(); ++j) {
    auto coords = target.coordinates(multiply(f_q, source.generators()[j]));
    for (std::size_t i = 0; i < coords.size(); ++i) out.matrix(i, j) = coords[i];
  }
  out.classification = classify_map(out.source, out.target, out.matrix, ring);
  return out;
}

InducedMap homology_induced_map(const ComplexWindow& source, const ComplexWindow& target, const ChainMapWindow& map,
                                const CoefficientRing& ring) {
  auto check = [&](const SparseMatrix& lhs, const SparseMatrix& rhs, const char* where) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
      throw DimensionMismatch(std::string("chain map shape mismatch ") + where);
    if (!(lhs.reduced(ring) == rhs.reduced(ring)))
      throw NotAChainMap(std::string("chain map square does not commute ") + where);
  };
  check(target.d_q * map.at, map.below * source.d_q, "at degree q");
  check(target.d_q_plus_1 * map.above, map.at * source.d_q_plus_1, "at degree q+1");
  HomologyBasis src(source.d_q, source.d_q_plus_1, ring);
  HomologyBasis tgt(target.d_q, target.d_q_plus_1, ring);
  return induced_map_from_bases(src, tgt, map.at, ring);
}

}  // namespace diagtor
