#include "diagtor/errors.hpp"
#include "diagtor/linalg.hpp"
#include "diagtor/modp.hpp"
#include "diagtor/smith.hpp"
#include "diagtor/torlab.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>

namespace diagtor {

namespace {

constexpr std::int64_t kCoefficientLimit = std::int64_t(1) << 40;

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void sort_merge(SmallColumn& col, std::uint32_t p) {
  std::sort(col.begin(), col.end(), [](const SmallEntry& a, const SmallEntry& b) { return a.index < b.index; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < col.size();) {
    std::int64_t v = 0;
    const std::uint32_t idx = col[i].index;
    for (; i < col.size() && col[i].index == idx; ++i) v += col[i].value;
    if (p != 0) v %= p;
    if (v != 0) col[out++] = {idx, v};
  }
  col.resize(out);
}

ModpVector to_modp_small(const SmallColumn& col, std::uint32_t p) {
  ModpVector v;
  v.reserve(col.size());
  for (const auto& e : col) {
    std::int64_t x = e.value % p;
    if (x < 0) x += p;
    if (x != 0) v.emplace_back(e.index, static_cast<std::uint32_t>(x));
  }
  return v;
}

std::uint64_t power(std::uint64_t m, unsigned q) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < q; ++i) {
    if (m != 0 && r > std::numeric_limits<std::uint64_t>::max() / m) return std::numeric_limits<std::uint64_t>::max();
    r *= m;
  }
  return r;
}

}  // namespace

Integer integral_delta(const CoefficientRing& ring) {
  const Scalar& d = ring.delta();
  if (boost::multiprecision::denominator(d) != 1)
    throw UnsupportedRing("Tor needs an integral delta, got " + ring.to_string(d));
  return boost::multiprecision::numerator(d);
}

AugmentationIdeal::AugmentationIdeal(const Algebra& algebra, const CoefficientRing& ring)
    : algebra_(algebra.has_table() ? algebra : algebra.with_table(build_table(algebra))) {
  reduction_ = ring.kind() == RingKind::PrimeField ? ring.modulus() : 0;
  const Integer delta = integral_delta(ring);
  const std::uint32_t d = algebra_.dim();
  index_of_.assign(d, -1);
  for (std::uint32_t i = 0; i < d; ++i)
    if (!algebra_.is_full_propagation(i)) {
      index_of_[i] = static_cast<std::int64_t>(base_.size());
      base_.push_back(i);
    }
  first_shifted_ = static_cast<std::uint32_t>(base_.size());
  const std::uint32_t id = algebra_.identity_index();
  for (std::uint32_t i = 0; i < d; ++i)
    if (algebra_.is_full_propagation(i) && i != id) {
      index_of_[i] = static_cast<std::int64_t>(base_.size());
      base_.push_back(i);
    }

  std::vector<std::int64_t> powers(algebra_.max_loops() + 1);
  for (std::size_t e = 0; e < powers.size(); ++e) {
    Integer v = reduction_ ? mod_floor(boost::multiprecision::pow(delta, static_cast<unsigned>(e)), reduction_)
                           : Integer(boost::multiprecision::pow(delta, static_cast<unsigned>(e)));
    if (abs(v) > kCoefficientLimit) throw UnsupportedRing("delta too large for machine coefficients");
    powers[e] = static_cast<std::int64_t>(v);
  }

  const std::uint32_t m = dim();
  products_.resize(static_cast<std::size_t>(m) * m);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j) {
      // (x - [s]) (y - [t]) with s, t flags for the shifted elements.
      const std::uint32_t x = base_[i], y = base_[j];
      const bool si = shifted(i), sj = shifted(j);
      SmallColumn col;
      std::int64_t aug = 0;
      auto add = [&](std::uint32_t w, std::int64_t c) {
        if (c == 0) return;
        if (algebra_.is_full_propagation(w)) aug += c;
        if (w == id) return;
        col.push_back({static_cast<std::uint32_t>(index_of_[w]), c});
      };
      Product p = algebra_.product(x, y);
      add(p.index, powers[p.loops]);
      if (sj) add(x, -1);
      if (si) add(y, -1);
      if (si && sj) add(id, 1);
      if (reduction_ ? aug % reduction_ != 0 : aug != 0)
        throw VerificationFailure("product leaves the augmentation ideal");
      sort_merge(col, reduction_);
      products_[static_cast<std::size_t>(i) * m + j] = std::move(col);
    }
}

std::optional<std::uint32_t> AugmentationIdeal::element_of(std::uint32_t i) const {
  if (i >= index_of_.size() || index_of_[i] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(index_of_[i]);
}

BarComplex::BarComplex(const Algebra& algebra, const CoefficientRing& ring, std::size_t budget, unsigned threads)
    : ideal_(std::make_shared<AugmentationIdeal>(algebra, ring)), ring_(ring), budget_(budget), threads_(threads) {}

std::size_t BarComplex::rank(unsigned q) const {
  std::uint64_t r = power(ideal_->dim(), q);
  return static_cast<std::size_t>(r);
}

void BarComplex::require_budget(unsigned q) const {
  const std::size_t r = rank(q);
  if (r > budget_ || r > std::numeric_limits<std::uint32_t>::max())
    throw BudgetExceeded("bar complex degree " + std::to_string(q) + " of " + ideal_->algebra().id().to_string(), r,
                         budget_);
}

SmallColumn BarComplex::column(unsigned q, std::uint64_t t) const {
  SmallColumn col;
  if (q < 2) return col;
  const std::uint64_t m = ideal_->dim();
  std::vector<std::uint32_t> a(q);
  for (unsigned k = q; k-- > 0;) {
    a[k] = static_cast<std::uint32_t>(t % m);
    t /= m;
  }
  // prefix[i] encodes a_1..a_i; suffix value of a_{i+1}..a_q is rebuilt on the fly.
  std::vector<std::uint64_t> prefix(q + 1, 0), suffix(q + 1, 0), pw(q + 1, 1);
  for (unsigned k = 1; k <= q; ++k) pw[k] = pw[k - 1] * m;
  for (unsigned k = 0; k < q; ++k) prefix[k + 1] = prefix[k] * m + a[k];
  for (unsigned k = q; k-- > 0;) suffix[k] = suffix[k + 1] + a[k] * pw[q - 1 - k];
  // Merging positions i, i+1 (0-based) yields a tuple of length q - 1.
  for (unsigned i = 0; i + 1 < q; ++i) {
    const std::int64_t sign = (i + 1) % 2 == 0 ? 1 : -1;
    const unsigned tail = q - i - 2;  // entries after the merged pair
    const std::uint64_t head = prefix[i] * pw[tail + 1];
    const std::uint64_t rest = suffix[i + 2];
    for (const auto& e : ideal_->product(a[i], a[i + 1]))
      col.push_back({static_cast<std::uint32_t>(head + e.index * pw[tail] + rest), sign * e.value});
  }
  sort_merge(col, ideal_->reduction());
  return col;
}

std::vector<SmallColumn> BarComplex::columns(unsigned q) const {
  require_budget(q);
  if (q > 0) require_budget(q - 1);
  std::vector<SmallColumn> cols(rank(q));
  parallel_for(cols.size(), threads_, [&](std::size_t t) { cols[t] = column(q, t); });
  return cols;
}

SparseMatrix BarComplex::differential(unsigned q) const {
  const std::uint32_t rows = q == 0 ? 0 : static_cast<std::uint32_t>(rank(q - 1));
  return SparseMatrix::from_small_columns(rows, columns(q));
}

std::size_t BarComplex::differential_rank(unsigned q) const {
  if (q < 2) return 0;
  require_budget(q);
  const std::uint32_t rows = static_cast<std::uint32_t>(rank(q - 1));
  if (ring_.kind() == RingKind::PrimeField) {
    const std::uint32_t p = ring_.modulus();
    ModpEchelon ech(p, rows);
    const std::size_t n = rank(q);
    for (std::uint64_t t = 0; t < n; ++t) {
      ech.insert(to_modp_small(column(q, t), p));
      if (ech.rank() == rows) break;
    }
    return ech.rank();
  }
  return invariant_factors(rows, columns(q)).rank;
}

TorReport tor_bar(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max, std::size_t budget,
                  unsigned threads) {
  BarComplex bar(algebra, ring, budget, threads);
  bar.require_budget(q_max + 1);
  TorReport r{algebra.id(), ring.spec(), "bar", {}};
  switch (ring.kind()) {
    case RingKind::PrimeField:
    case RingKind::Rationals: {
      std::vector<std::size_t> ranks(q_max + 2, 0);
      for (unsigned q = 2; q <= q_max + 1; ++q) ranks[q] = bar.differential_rank(q);
      for (unsigned q = 0; q <= q_max; ++q) {
        HomologyGroup h;
        h.free_rank = bar.rank(q) - ranks[q] - ranks[q + 1];
        r.groups.push_back(h);
      }
      break;
    }
    case RingKind::Integers: {
      std::vector<InvariantFactors> inv(q_max + 2);
      for (unsigned q = 2; q <= q_max + 1; ++q)
        inv[q] = invariant_factors(static_cast<std::uint32_t>(bar.rank(q - 1)), bar.columns(q));
      for (unsigned q = 0; q <= q_max; ++q) {
        HomologyGroup h;
        h.free_rank = bar.rank(q) - inv[q].rank - inv[q + 1].rank;
        h.torsion = inv[q + 1].nontrivial;
        r.groups.push_back(h);
      }
      break;
    }
    case RingKind::ModularRing: {
      SparseMatrix below = bar.differential(0);
      for (unsigned q = 0; q <= q_max; ++q) {
        SparseMatrix above = bar.differential(q + 1);
        r.groups.push_back(chain_homology(below, above, ring));
        below = std::move(above);
      }
      break;
    }
  }
  return r;
}

SparseMatrix bar_quotient_map(const AugmentationIdeal& source, const AugmentationIdeal& target, unsigned q) {
  const std::uint64_t ms = source.dim(), mt = target.dim();
  const std::uint64_t cols = power(ms, q), rows = power(mt, q);
  if (cols > std::numeric_limits<std::uint32_t>::max() || rows > std::numeric_limits<std::uint32_t>::max())
    throw BudgetExceeded("bar quotient map", static_cast<std::size_t>(std::max(cols, rows)),
                         std::numeric_limits<std::uint32_t>::max());
  // Image of each ideal element: g - 1 goes to pi(g) - 1, diagrams with fewer
  // propagating lines go to zero.
  std::vector<std::int64_t> image(ms, -1);
  for (std::uint32_t k = 0; k < ms; ++k) {
    if (!source.shifted(k)) continue;
    auto g = quotient_index(source.algebra(), target.algebra(), source.base(k));
    if (!g) continue;
    if (auto e = target.element_of(*g)) image[k] = *e;
  }
  std::vector<SmallColumn> out(static_cast<std::size_t>(cols));
  for (std::uint64_t t = 0; t < cols; ++t) {
    std::uint64_t s = t, idx = 0, pw = 1;
    bool zero = false;
    for (unsigned k = 0; k < q; ++k) {
      const auto digit = image[s % ms];
      s /= ms;
      if (digit < 0) {
        zero = true;
        break;
      }
      idx += static_cast<std::uint64_t>(digit) * pw;
      pw *= mt;
    }
    if (!zero) out[t].push_back({static_cast<std::uint32_t>(idx), 1});
  }
  return SparseMatrix::from_small_columns(static_cast<std::uint32_t>(rows), out);
}

std::vector<HomologyGroup> group_homology_symmetric(unsigned n, const CoefficientRing& ring, unsigned q_max,
                                                    std::size_t budget) {
  return tor_bar(Algebra(Family::GroupAlgebraSymmetric, n), ring, q_max, budget).groups;
}

}  // namespace diagtor
