#include "diagtor/int_lattice.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace diagtor {

namespace {

constexpr std::uint32_t npos = ~0u;

using Accumulator = std::map<std::uint32_t, Integer>;

void add_scaled(Accumulator& acc, const Integer& f, const SparseVector& v) {
  for (const auto& e : v) {
    auto [it, fresh] = acc.try_emplace(e.index, 0);
    it->second += f * e.value;
    if (it->second == 0) acc.erase(it);
  }
}

SparseVector to_vector(const Accumulator& acc) {
  SparseVector out;
  out.reserve(acc.size());
  for (const auto& [i, x] : acc) out.push_back({i, x});
  return out;
}

Accumulator to_acc(const SparseVector& v) {
  Accumulator acc;
  for (const auto& e : v) acc.emplace(e.index, e.value);
  return acc;
}

SparseVector combination(const std::vector<SparseVector>& vs, const std::vector<Integer>& c) {
  if (vs.size() != c.size()) throw DimensionMismatch("combination length mismatch");
  Accumulator acc;
  for (std::size_t k = 0; k < vs.size(); ++k)
    if (c[k] != 0) add_scaled(acc, c[k], vs[k]);
  return to_vector(acc);
}

}  // namespace

IntLattice::IntLattice(std::uint32_t dim) : dim_(dim), row_pivot_(dim, npos) {}

void IntLattice::reduce(SparseVector& v, SparseVector& tag) const {
  Accumulator acc = to_acc(v), tacc = to_acc(tag);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
  for (const auto& e : v)
    if (row_pivot_[e.index] != npos) heap.push(row_pivot_[e.index]);
  while (!heap.empty()) {
    std::uint32_t pid = heap.top();
    heap.pop();
    while (!heap.empty() && heap.top() == pid) heap.pop();
    auto it = acc.find(pivot_row_[pid]);
    if (it == acc.end()) continue;
    const Item& piv = pivots_[pid];
    // pivot entry is +-1
    Integer lead = 0;
    for (const auto& e : piv.vec)
      if (e.index == pivot_row_[pid]) lead = e.value;
    Integer f = -(it->second * lead);
    for (const auto& e : piv.vec) {
      auto [jt, fresh] = acc.try_emplace(e.index, 0);
      jt->second += f * e.value;
      if (jt->second == 0) {
        acc.erase(jt);
      } else if (fresh && row_pivot_[e.index] != npos) {
        heap.push(row_pivot_[e.index]);
      }
    }
    add_scaled(tacc, f, piv.tag);
  }
  v = to_vector(acc);
  tag = to_vector(tacc);
}

void IntLattice::add_pivot(Item item) {
  std::vector<Item> queue{std::move(item)};
  while (!queue.empty()) {
    Item cur = std::move(queue.back());
    queue.pop_back();
    reduce(cur.vec, cur.tag);
    if (cur.vec.empty()) {
      zero_tags_.push_back(std::move(cur.tag));
      continue;
    }
    std::uint32_t row = npos;
    Integer lead;
    for (const auto& e : cur.vec)
      if (e.value == 1 || e.value == -1) {
        row = e.index;
        lead = e.value;
        break;
      }
    if (row == npos) {
      deferred_.push_back(std::move(cur));
      continue;
    }
    const auto pid = static_cast<std::uint32_t>(pivots_.size());
    pivots_.push_back(std::move(cur));
    pivot_row_.push_back(row);
    row_pivot_[row] = pid;
    const Item& piv = pivots_.back();
    // Keep deferred vectors zero on every pivot row.
    std::vector<Item> keep;
    for (auto& d : deferred_) {
      auto it = std::lower_bound(d.vec.begin(), d.vec.end(), row,
                                 [](const Entry& e, std::uint32_t r) { return e.index < r; });
      if (it == d.vec.end() || it->index != row) {
        keep.push_back(std::move(d));
        continue;
      }
      Integer f = -(it->value * lead);
      d.vec = axpy(d.vec, f, piv.vec);
      d.tag = axpy(d.tag, f, piv.tag);
      if (d.vec.empty())
        zero_tags_.push_back(std::move(d.tag));
      else
        queue.push_back(std::move(d));
    }
    deferred_ = std::move(keep);
  }
}

void IntLattice::insert(const SparseVector& v, const SparseVector& tag) {
  for (const auto& e : v)
    if (e.index >= dim_) throw DimensionMismatch("vector index out of range for lattice");
  residue_.reset();
  add_pivot(Item{v, tag});
}

const IntLattice::Residue& IntLattice::residue() const {
  if (residue_) return *residue_;
  auto res = std::make_shared<Residue>();
  for (const auto& d : deferred_)
    for (const auto& e : d.vec) res->rows.push_back(e.index);
  std::sort(res->rows.begin(), res->rows.end());
  res->rows.erase(std::unique(res->rows.begin(), res->rows.end()), res->rows.end());
  res->matrix = DenseMatrix(res->rows.size(), deferred_.size());
  for (std::size_t j = 0; j < deferred_.size(); ++j)
    for (const auto& e : deferred_[j].vec) {
      auto i = std::lower_bound(res->rows.begin(), res->rows.end(), e.index) - res->rows.begin();
      res->matrix(static_cast<std::size_t>(i), j) = e.value;
    }
  res->kernel = dense_integer_kernel(res->matrix);
  residue_ = std::move(res);
  return *residue_;
}

std::vector<SparseVector> IntLattice::deferred_tags() const {
  std::vector<SparseVector> tags;
  tags.reserve(deferred_.size());
  for (const auto& d : deferred_) tags.push_back(d.tag);
  return tags;
}

std::optional<SparseVector> IntLattice::solve(const SparseVector& v) const {
  SparseVector r = v, t;
  reduce(r, t);
  for (auto& e : t) e.value = -e.value;
  if (r.empty()) return t;
  if (deferred_.empty()) return std::nullopt;
  const Residue& res = residue();
  const std::size_t k = deferred_.size();
  DenseMatrix aug(res.rows.size(), k + 1);
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = res.matrix(i, j);
  for (const auto& e : r) {
    auto it = std::lower_bound(res.rows.begin(), res.rows.end(), e.index);
    if (it == res.rows.end() || *it != e.index) return std::nullopt;
    aug(static_cast<std::size_t>(it - res.rows.begin()), k) = e.value;
  }
  // (c, -1) in the kernel of [S | r] means S c = r.
  auto kernel = dense_integer_kernel(aug);
  Integer g = 0;
  std::vector<Integer> x(k + 1);
  for (const auto& z : kernel) {
    if (z[k] == 0) continue;
    Integer s, u;
    Integer h = extended_gcd(g, z[k], s, u);
    for (std::size_t j = 0; j <= k; ++j) x[j] = s * x[j] + u * z[j];
    g = h;
  }
  if (g != 1 && g != -1) return std::nullopt;
  // x[k] == g; scale so the last entry is -1.
  Integer scale = -g;
  std::vector<Integer> c(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = scale * x[j];
  return axpy(t, 1, combination(deferred_tags(), c));
}

std::vector<SparseVector> IntLattice::relations() const {
  std::vector<SparseVector> out = zero_tags_;
  if (deferred_.empty()) return out;
  auto tags = deferred_tags();
  for (const auto& z : residue().kernel) out.push_back(combination(tags, z));
  return out;
}

namespace {

/// Column lattice of dense s: the columns s * v_j for the pivot columns of a
/// unimodular v from the Smith form.
std::vector<std::vector<Integer>> column_lattice_coefficients(const DenseMatrix& s) {
  auto snf = smith_normal_form(s);
  std::vector<std::vector<Integer>> out;
  for (std::size_t j = 0; j < snf.diagonal.size(); ++j) {
    std::vector<Integer> c(s.cols());
    for (std::size_t k = 0; k < s.cols(); ++k) c[k] = snf.right(k, j);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<SparseVector> IntLattice::basis() const {
  std::vector<SparseVector> out;
  for (const auto& p : pivots_) out.push_back(p.vec);
  if (deferred_.empty()) return out;
  std::vector<SparseVector> vecs;
  for (const auto& d : deferred_) vecs.push_back(d.vec);
  for (const auto& c : column_lattice_coefficients(residue().matrix)) out.push_back(combination(vecs, c));
  return out;
}

std::vector<SparseVector> IntLattice::basis_tags() const {
  std::vector<SparseVector> out;
  for (const auto& p : pivots_) out.push_back(p.tag);
  if (deferred_.empty()) return out;
  auto tags = deferred_tags();
  for (const auto& c : column_lattice_coefficients(residue().matrix)) out.push_back(combination(tags, c));
  return out;
}

SparseVector IntLattice::reduced(const SparseVector& v) const {
  SparseVector r = v, t;
  reduce(r, t);
  return r;
}

std::vector<SparseVector> IntLattice::residual() const {
  std::vector<SparseVector> out;
  out.reserve(deferred_.size());
  for (const auto& d : deferred_) out.push_back(d.vec);
  return out;
}

std::size_t IntLattice::rank() const {
  if (deferred_.empty()) return pivots_.size();
  return pivots_.size() + deferred_.size() - residue().kernel.size();
}

// ---- dense saturated kernel

std::vector<std::vector<Integer>> dense_integer_kernel(const DenseMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  // Reduced row echelon form over Q.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
  std::vector<std::size_t> pivot_cols, free_cols;
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t p = r;
    while (p < rows && a[p][j] == 0) ++p;
    if (p == rows) {
      free_cols.push_back(j);
      continue;
    }
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][j];
    for (std::size_t c = j; c < cols; ++c) a[r][c] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][j] == 0) continue;
      Rational f = a[i][j];
      for (std::size_t c = j; c < cols; ++c)
        if (a[r][c] != 0) a[i][c] -= f * a[r][c];
    }
    pivot_cols.push_back(j);
    ++r;
  }
  const std::size_t f = free_cols.size();
  if (f == 0) return {};

  // x_free = y, x_pivot = -R y; y ranges over {y : R y integral}, cut out
  // one congruence per row. The basis is kept echelonized modulo its index.
  std::vector<std::vector<Integer>> basis(f, std::vector<Integer>(f));
  for (std::size_t t = 0; t < f; ++t) basis[t][t] = 1;
  Integer index = 1;

  auto echelonize = [&]() {
    std::vector<std::vector<Integer>> piv(f);
    for (std::size_t l = 0; l < f; ++l) {
      piv[l].assign(f, 0);
      piv[l][l] = index;
    }
    for (auto v : basis) {
      for (auto& x : v) x = mod_floor(x, index);
      std::size_t l = 0;
      while (true) {
        while (l < f && v[l] == 0) ++l;
        if (l == f) break;
        auto& p = piv[l];
        Integer s, u;
        Integer g = extended_gcd(p[l], v[l], s, u);
        Integer pl = p[l] / g, vl = v[l] / g;
        std::vector<Integer> np(f), rest(f);
        for (std::size_t c = l; c < f; ++c) {
          np[c] = s * p[c] + u * v[c];
          rest[c] = pl * v[c] - vl * p[c];
        }
        for (std::size_t c = l + 1; c < f; ++c) {
          np[c] = mod_floor(np[c], index);
          rest[c] = mod_floor(rest[c], index);
        }
        if (np[l] < 0) np[l] = -np[l];
        p = std::move(np);
        v = std::move(rest);
      }
    }
    basis = std::move(piv);
  };

  for (std::size_t i = 0; i < r; ++i) {
    Integer den = 1;
    for (std::size_t t = 0; t < f; ++t) {
      const Integer& d = denominator(a[i][free_cols[t]]);
      den = den / gcd(den, d) * d;
    }
    if (den == 1) continue;
    std::vector<Integer> coeff(f);
    for (std::size_t t = 0; t < f; ++t) coeff[t] = numerator(Rational(a[i][free_cols[t]] * den));
    std::vector<Integer> c(f);
    for (std::size_t j = 0; j < f; ++j) {
      Integer s = 0;
      for (std::size_t t = 0; t < f; ++t)
        if (basis[j][t] != 0 && coeff[t] != 0) s += coeff[t] * basis[j][t];
      c[j] = mod_floor(s, den);
    }
    std::size_t j0 = f;
    for (std::size_t j = 0; j < f; ++j) {
      if (c[j] == 0) continue;
      if (j0 == f) {
        j0 = j;
        continue;
      }
      Integer s, u;
      Integer g = extended_gcd(c[j0], c[j], s, u);
      Integer a0 = c[j0] / g, aj = c[j] / g;
      for (std::size_t t = 0; t < f; ++t) {
        Integer b0 = basis[j0][t], bj = basis[j][t];
        basis[j0][t] = s * b0 + u * bj;
        basis[j][t] = a0 * bj - aj * b0;
      }
      c[j0] = mod_floor(g, den);
      c[j] = 0;
    }
    if (j0 == f) continue;
    Integer scale = den / gcd(c[j0], den);
    if (scale == 1) continue;
    for (auto& x : basis[j0]) x *= scale;
    index *= scale;
    echelonize();
  }

  std::vector<std::vector<Integer>> out;
  out.reserve(f);
  for (const auto& y : basis) {
    std::vector<Integer> x(cols);
    for (std::size_t t = 0; t < f; ++t) x[free_cols[t]] = y[t];
    for (std::size_t i = 0; i < r; ++i) {
      Rational s = 0;
      for (std::size_t t = 0; t < f; ++t)
        if (y[t] != 0) s += a[i][free_cols[t]] * y[t];
      if (denominator(s) != 1) throw VerificationFailure("saturated kernel produced a non-integral vector");
      x[pivot_cols[i]] = -numerator(s);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace diagtor
