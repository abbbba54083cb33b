#include "diagtor/sparse_matrix.hpp"

#include "diagtor/errors.hpp"
#include "diagtor/ring.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace diagtor {

bool operator==(const Entry& a, const Entry& b) { return a.index == b.index && a.value == b.value; }

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("dense product shape mismatch");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        if (other(k, j) != 0) out(i, j) += a * other(k, j);
    }
  return out;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

SparseMatrix SparseMatrix::from_triplets(std::uint32_t rows, std::uint32_t cols, std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    if (t.row >= rows || t.col >= cols) throw DimensionMismatch("triplet index out of bounds");
    Integer sum = 0;
    std::size_t l = k;
    for (; l < triplets.size() && triplets[l].row == t.row && triplets[l].col == t.col; ++l) sum += triplets[l].value;
    if (sum != 0) m.columns_[t.col].push_back({t.row, std::move(sum)});
    k = l;
  }
  return m;
}

SparseMatrix SparseMatrix::from_columns(std::uint32_t rows, std::vector<SparseVector> columns) {
  SparseMatrix m;
  m.rows_ = rows;
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVector merged;
    for (auto& e : col) {
      if (e.index >= rows) throw DimensionMismatch("column entry out of bounds");
      if (!merged.empty() && merged.back().index == e.index)
        merged.back().value += e.value;
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const Entry& e) { return e.value == 0; });
    col = std::move(merged);
  }
  m.columns_ = std::move(columns);
  return m;
}

SparseMatrix SparseMatrix::from_small_columns(std::uint32_t rows, const std::vector<SmallColumn>& columns) {
  std::vector<SparseVector> cols(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    cols[j].reserve(columns[j].size());
    for (const auto& e : columns[j]) cols[j].push_back({e.index, Integer(e.value)});
  }
  return from_columns(rows, std::move(cols));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d) {
  SparseMatrix m(static_cast<std::uint32_t>(d.rows()), static_cast<std::uint32_t>(d.cols()));
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (d(i, j) != 0) m.columns_[j].push_back({static_cast<std::uint32_t>(i), d(i, j)});
  return m;
}

SparseMatrix SparseMatrix::identity(std::uint32_t n) {
  SparseMatrix m(n, n);
  for (std::uint32_t i = 0; i < n; ++i) m.columns_[i].push_back({i, Integer(1)});
  return m;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.size();
  return total;
}

Integer SparseMatrix::at(std::uint32_t i, std::uint32_t j) const {
  const auto& col = columns_.at(j);
  auto it = std::lower_bound(col.begin(), col.end(), i, [](const Entry& e, std::uint32_t r) { return e.index < r; });
  if (it != col.end() && it->index == i) return it->value;
  return 0;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols(), rows_);
  for (std::uint32_t j = 0; j < cols(); ++j)
    for (const auto& e : columns_[j]) t.columns_[e.index].push_back({j, e.value});
  return t;
}

SparseVector axpy(const SparseVector& a, const Integer& c, const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      Integer v = c * b[j].value;
      if (v != 0) out.push_back({b[j].index, std::move(v)});
      ++j;
    } else {
      Integer v = a[i].value + c * b[j].value;
      if (v != 0) out.push_back({a[i].index, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector multiply(const SparseMatrix& m, const SparseVector& v) {
  SparseVector out;
  for (const auto& e : v) {
    if (e.index >= m.cols()) throw DimensionMismatch("vector length exceeds matrix columns");
    out = axpy(out, e.value, m.column(e.index));
  }
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
  if (cols() != other.rows()) throw DimensionMismatch("sparse product shape mismatch");
  SparseMatrix out(rows_, other.cols());
  std::vector<Integer> acc(rows_);
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(rows_, 0);
  for (std::uint32_t j = 0; j < other.cols(); ++j) {
    for (const auto& e : other.columns_[j])
      for (const auto& f : columns_[e.index]) {
        if (!mark[f.index]) {
          mark[f.index] = 1;
          touched.push_back(f.index);
        }
        acc[f.index] += e.value * f.value;
      }
    std::sort(touched.begin(), touched.end());
    for (auto r : touched) {
      if (acc[r] != 0) out.columns_[j].push_back({r, acc[r]});
      acc[r] = 0;
      mark[r] = 0;
    }
    touched.clear();
  }
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
  return rows_ == other.rows_ && columns_ == other.columns_;
}

SparseMatrix SparseMatrix::reduced(const CoefficientRing& ring) const {
  if (ring.modulus() == 0) return *this;
  SparseMatrix out(rows_, cols());
  for (std::uint32_t j = 0; j < cols(); ++j)
    for (const auto& e : columns_[j]) {
      Integer v = ring.reduce(e.value);
      if (v != 0) out.columns_[j].push_back({e.index, std::move(v)});
    }
  return out;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols());
  for (std::uint32_t j = 0; j < cols(); ++j)
    for (const auto& e : columns_[j]) d(e.index, j) = e.value;
  return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::uint32_t j = 0; j < cols(); ++j)
    for (const auto& e : columns_[j]) out.push_back({e.index, j, e.value});
  return out;
}

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (std::uint32_t j = 0; j < m.cols(); ++j)
    for (const auto& e : m.column(j)) out << e.index << ' ' << j << ' ' << e.value << '\n';
}

SparseMatrix read_triplets(std::istream& in) {
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) throw InvalidArgument("triplet header expected");
  if (rows > UINT32_MAX || cols > UINT32_MAX) throw InvalidArgument("triplet dimensions too large");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    std::uint64_t i = 0, j = 0;
    std::string v;
    if (!(in >> i >> j >> v)) throw InvalidArgument("truncated triplet list at entry " + std::to_string(k));
    if (i >= rows || j >= cols) throw InvalidArgument("triplet index out of range at entry " + std::to_string(k));
    t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), parse_integer(v)});
  }
  return SparseMatrix::from_triplets(static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols), std::move(t));
}

}  // namespace diagtor
