#include "diagtor/smith.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace diagtor {

namespace {

using boost::multiprecision::abs;

struct Transforms {
  DenseMatrix* u = nullptr;
  DenseMatrix* uinv = nullptr;
  DenseMatrix* v = nullptr;
};

void swap_rows(DenseMatrix& a, std::size_t i, std::size_t k, Transforms& t) {
  if (i == k) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
  if (t.u)
    for (std::size_t j = 0; j < t.u->cols(); ++j) std::swap((*t.u)(i, j), (*t.u)(k, j));
  if (t.uinv)
    for (std::size_t j = 0; j < t.uinv->rows(); ++j) std::swap((*t.uinv)(j, i), (*t.uinv)(j, k));
}

void swap_cols(DenseMatrix& a, std::size_t i, std::size_t k, Transforms& t) {
  if (i == k) return;
  for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, k));
  if (t.v)
    for (std::size_t r = 0; r < t.v->rows(); ++r) std::swap((*t.v)(r, i), (*t.v)(r, k));
}

/// row_i += q * row_k
void add_row(DenseMatrix& a, std::size_t i, std::size_t k, const Integer& q, Transforms& t) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (a(k, j) != 0) a(i, j) += q * a(k, j);
  if (t.u)
    for (std::size_t j = 0; j < t.u->cols(); ++j)
      if ((*t.u)(k, j) != 0) (*t.u)(i, j) += q * (*t.u)(k, j);
  if (t.uinv)
    for (std::size_t r = 0; r < t.uinv->rows(); ++r)
      if ((*t.uinv)(r, i) != 0) (*t.uinv)(r, k) -= q * (*t.uinv)(r, i);
}

/// col_j += q * col_k
void add_col(DenseMatrix& a, std::size_t j, std::size_t k, const Integer& q, Transforms& t) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (a(r, k) != 0) a(r, j) += q * a(r, k);
  if (t.v)
    for (std::size_t r = 0; r < t.v->rows(); ++r)
      if ((*t.v)(r, k) != 0) (*t.v)(r, j) += q * (*t.v)(r, k);
}

void negate_row(DenseMatrix& a, std::size_t i, Transforms& t) {
  for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
  if (t.u)
    for (std::size_t j = 0; j < t.u->cols(); ++j) (*t.u)(i, j) = -(*t.u)(i, j);
  if (t.uinv)
    for (std::size_t r = 0; r < t.uinv->rows(); ++r) (*t.uinv)(r, i) = -(*t.uinv)(r, i);
}

std::vector<Integer> run_dense(DenseMatrix& a, Transforms t) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<Integer> diag;
  for (std::size_t s = 0; s < std::min(rows, cols); ++s) {
    std::size_t pi = rows, pj = cols;
    Integer best;
    for (std::size_t i = s; i < rows; ++i)
      for (std::size_t j = s; j < cols; ++j)
        if (a(i, j) != 0 && (pi == rows || abs(a(i, j)) < best)) {
          best = abs(a(i, j));
          pi = i;
          pj = j;
          if (best == 1) goto found;
        }
  found:
    if (pi == rows) break;
    swap_rows(a, s, pi, t);
    swap_cols(a, s, pj, t);
    for (;;) {
      bool moved = false;
      for (std::size_t i = s + 1; i < rows && !moved; ++i) {
        if (a(i, s) == 0) continue;
        Integer q = a(i, s) / a(s, s);
        add_row(a, i, s, -q, t);
        if (a(i, s) != 0) {
          swap_rows(a, s, i, t);
          moved = true;
        }
      }
      for (std::size_t j = s + 1; j < cols && !moved; ++j) {
        if (a(s, j) == 0) continue;
        Integer q = a(s, j) / a(s, s);
        add_col(a, j, s, -q, t);
        if (a(s, j) != 0) {
          swap_cols(a, s, j, t);
          moved = true;
        }
      }
      if (moved) continue;
      std::size_t bad = rows;
      for (std::size_t i = s + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = s + 1; j < cols; ++j)
          if (a(i, j) % a(s, s) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      add_row(a, s, bad, Integer(1), t);
    }
    if (a(s, s) < 0) negate_row(a, s, t);
    diag.push_back(a(s, s));
  }
  return diag;
}

struct Overflow {};

/// Checked machine arithmetic for the fast path.
struct SmallOps {
  using Value = std::int64_t;
  static Value mul(Value a, Value b) {
    Value r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static Value add(Value a, Value b) {
    Value r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static bool is_unit(Value a) { return a == 1 || a == -1; }
  static Integer to_integer(Value a) { return Integer(a); }
};

struct BigOps {
  using Value = Integer;
  static Value mul(const Value& a, const Value& b) { return a * b; }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static bool is_unit(const Value& a) { return a == 1 || a == -1; }
  static Integer to_integer(const Value& a) { return a; }
};

template <class Ops>
class SparseElimination {
 public:
  using Value = typename Ops::Value;
  using Column = std::vector<std::pair<std::uint32_t, Value>>;

  SparseElimination(std::uint32_t rows, std::vector<Column> columns)
      : rows_(rows), columns_(std::move(columns)), row_count_(rows, 0), pivot_of_row_(rows, -1), acc_(rows),
        touched_mark_(rows, 0), queued_(rows, 0) {
    for (const auto& c : columns_)
      for (const auto& e : c) ++row_count_[e.first];
  }

  InvariantFactors run() {
    std::vector<std::uint32_t> order(columns_.size());
    for (std::uint32_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return columns_[a].size() < columns_[b].size(); });
    std::vector<Column> deferred;
    for (auto j : order) {
      Column r = reduce(columns_[j]);
      Column().swap(columns_[j]);
      if (r.empty()) continue;
      if (!try_pivot(r)) deferred.push_back(std::move(r));
    }
    bool changed = true;
    while (changed && !deferred.empty()) {
      changed = false;
      std::vector<Column> keep;
      for (auto& d : deferred) {
        Column r = reduce(d);
        if (r.empty()) continue;
        if (try_pivot(r)) {
          changed = true;
          continue;
        }
        keep.push_back(std::move(r));
      }
      deferred = std::move(keep);
    }
    InvariantFactors out;
    out.rank = pivots_.size();
    if (deferred.empty()) return out;
    std::vector<std::uint32_t> row_ids;
    for (const auto& d : deferred)
      for (const auto& e : d) row_ids.push_back(e.first);
    std::sort(row_ids.begin(), row_ids.end());
    row_ids.erase(std::unique(row_ids.begin(), row_ids.end()), row_ids.end());
    DenseMatrix rest(row_ids.size(), deferred.size());
    for (std::size_t j = 0; j < deferred.size(); ++j)
      for (const auto& e : deferred[j]) {
        auto pos = std::lower_bound(row_ids.begin(), row_ids.end(), e.first) - row_ids.begin();
        rest(pos, j) = Ops::to_integer(e.second);
      }
    for (auto& f : dense_invariant_factors(std::move(rest))) {
      ++out.rank;
      if (f != 1) out.nontrivial.push_back(f);
    }
    return out;
  }

 private:
  Column reduce(const Column& v) {
    auto cmp = std::greater<std::uint32_t>();
    std::vector<std::uint32_t> heap;
    for (const auto& [i, x] : v) {
      acc_[i] = x;
      mark(i);
      if (pivot_of_row_[i] >= 0) {
        heap.push_back(static_cast<std::uint32_t>(pivot_of_row_[i]));
        queued_[i] = 1;
      }
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      std::uint32_t k = heap.back();
      heap.pop_back();
      const auto& piv = pivots_[k];
      std::uint32_t r = pivot_rows_[k];
      queued_[r] = 0;
      Value c = acc_[r];
      if (c == 0) continue;
      Value f = Ops::mul(c, pivot_units_[k]);
      f = -f;
      for (const auto& [i, x] : piv) {
        acc_[i] = Ops::add(acc_[i], Ops::mul(f, x));
        mark(i);
        if (pivot_of_row_[i] >= 0 && !queued_[i] && i != r) {
          queued_[i] = 1;
          heap.push_back(static_cast<std::uint32_t>(pivot_of_row_[i]));
          std::push_heap(heap.begin(), heap.end(), cmp);
        }
      }
    }
    std::sort(touched_.begin(), touched_.end());
    Column out;
    for (auto i : touched_) {
      if (acc_[i] != 0) out.emplace_back(i, acc_[i]);
      acc_[i] = 0;
      touched_mark_[i] = 0;
    }
    touched_.clear();
    return out;
  }

  bool try_pivot(Column& r) {
    std::size_t best = r.size();
    for (std::size_t k = 0; k < r.size(); ++k)
      if (Ops::is_unit(r[k].second) && (best == r.size() || row_count_[r[k].first] < row_count_[r[best].first]))
        best = k;
    if (best == r.size()) return false;
    std::uint32_t row = r[best].first;
    pivot_of_row_[row] = static_cast<std::int32_t>(pivots_.size());
    pivot_rows_.push_back(row);
    pivot_units_.push_back(r[best].second);
    pivots_.push_back(std::move(r));
    return true;
  }

  void mark(std::uint32_t i) {
    if (!touched_mark_[i]) {
      touched_mark_[i] = 1;
      touched_.push_back(i);
    }
  }

  std::uint32_t rows_;
  std::vector<Column> columns_;
  std::vector<std::uint32_t> row_count_;
  std::vector<std::int32_t> pivot_of_row_;
  std::vector<Column> pivots_;
  std::vector<std::uint32_t> pivot_rows_;
  std::vector<Value> pivot_units_;
  std::vector<Value> acc_;
  std::vector<char> touched_mark_;
  std::vector<char> queued_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace

SmithNormalForm smith_normal_form(const DenseMatrix& m) {
  SmithNormalForm out;
  DenseMatrix a = m;
  out.left = DenseMatrix::identity(m.rows());
  out.left_inverse = DenseMatrix::identity(m.rows());
  out.right = DenseMatrix::identity(m.cols());
  out.diagonal = run_dense(a, Transforms{&out.left, &out.left_inverse, &out.right});
  return out;
}

SmithNormalForm smith_normal_form(const SparseMatrix& m) { return smith_normal_form(m.to_dense()); }

std::vector<Integer> dense_invariant_factors(DenseMatrix m) { return run_dense(m, Transforms{}); }

InvariantFactors invariant_factors(std::uint32_t rows, std::vector<SmallColumn> columns) {
  std::vector<SparseElimination<SmallOps>::Column> cols(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    auto& src = columns[j];
    std::sort(src.begin(), src.end(), [](const SmallEntry& a, const SmallEntry& b) { return a.index < b.index; });
    for (const auto& e : src) {
      if (e.index >= rows) throw DimensionMismatch("column entry out of bounds");
      if (!cols[j].empty() && cols[j].back().first == e.index)
        cols[j].back().second = SmallOps::add(cols[j].back().second, e.value);
      else
        cols[j].emplace_back(e.index, e.value);
    }
    std::erase_if(cols[j], [](const auto& e) { return e.second == 0; });
    SmallColumn().swap(src);
  }
  std::vector<SparseElimination<SmallOps>::Column> backup;
  try {
    backup = cols;
    return SparseElimination<SmallOps>(rows, std::move(cols)).run();
  } catch (const Overflow&) {
    std::vector<SparseElimination<BigOps>::Column> big(backup.size());
    for (std::size_t j = 0; j < backup.size(); ++j)
      for (const auto& [i, x] : backup[j]) big[j].emplace_back(i, Integer(x));
    backup.clear();
    return SparseElimination<BigOps>(rows, std::move(big)).run();
  }
}

InvariantFactors invariant_factors(const SparseMatrix& m) {
  bool small = true;
  const Integer limit = std::numeric_limits<std::int32_t>::max();
  for (const auto& c : m.columns())
    for (const auto& e : c)
      if (abs(e.value) > limit) small = false;
  if (small) {
    std::vector<SmallColumn> cols(m.cols());
    for (std::uint32_t j = 0; j < m.cols(); ++j)
      for (const auto& e : m.column(j)) cols[j].push_back({e.index, static_cast<std::int64_t>(e.value)});
    return invariant_factors(m.rows(), std::move(cols));
  }
  std::vector<SparseElimination<BigOps>::Column> big(m.cols());
  for (std::uint32_t j = 0; j < m.cols(); ++j)
    for (const auto& e : m.column(j)) big[j].emplace_back(e.index, e.value);
  return SparseElimination<BigOps>(m.rows(), std::move(big)).run();
}

}  // namespace diagtor
