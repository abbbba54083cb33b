#include "diagtor/mv.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

namespace diagtor {

namespace {

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

std::vector<std::uint32_t> meet(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint32_t position(const std::vector<std::uint32_t>& basis, std::uint32_t v) {
  auto it = std::lower_bound(basis.begin(), basis.end(), v);
  if (it == basis.end() || *it != v) throw VerificationFailure("MV face map leaves its summand");
  return static_cast<std::uint32_t>(it - basis.begin());
}

const MVSummand* find_summand(const MVDegree& d, const std::vector<unsigned>& subset) {
  auto it = std::lower_bound(d.summands.begin(), d.summands.end(), subset,
                             [](const MVSummand& s, const std::vector<unsigned>& key) { return s.subset < key; });
  return it != d.summands.end() && it->subset == subset ? &*it : nullptr;
}

}  // namespace

unsigned sign_count(const std::vector<unsigned>& S, unsigned j) {
  if (std::find(S.begin(), S.end(), j) == S.end()) throw InvalidArgument("sign_count: element not in the subset");
  return static_cast<unsigned>(std::count_if(S.begin(), S.end(), [j](unsigned i) { return i < j; }));
}

std::uint32_t MVComplex::rank(int p) const {
  if (p < -1 || p > max_degree) return 0;
  return degree(p).rank;
}

SparseMatrix MVComplex::d(int p) const {
  if (p >= 0 && p <= max_degree) return differentials[static_cast<std::size_t>(p)];
  return SparseMatrix(rank(p - 1), rank(p));
}

MVComplex build_mv(const Algebra& algebra, const CoverDescriptor& cover, unsigned degree_limit, unsigned threads,
                   std::size_t budget) {
  for (const auto& I : cover.ideals)
    if (!(I.algebra == algebra.id())) throw DimensionMismatch("cover ideal from " + I.algebra.to_string());
  const unsigned w = static_cast<unsigned>(cover.width());
  MVComplex c;
  c.cover = cover;
  c.max_degree = static_cast<int>(std::min(degree_limit, w));

  std::vector<std::uint32_t> quotient;
  for (std::uint32_t k = 0; k < algebra.dim(); ++k)
    if (!cover.target.contains(k)) quotient.push_back(k);
  std::vector<std::uint32_t> all(algebra.dim());
  for (std::uint32_t k = 0; k < algebra.dim(); ++k) all[k] = k;

  std::size_t total = 0;
  auto charge = [&](std::size_t r) {
    total += r;
    if (total > budget) throw BudgetExceeded("Mayer-Vietoris complex", total, budget);
  };
  c.degrees.push_back({-1, {{{}, quotient, 0}}, static_cast<std::uint32_t>(quotient.size())});
  c.degrees.push_back({0, {{{}, all, 0}}, algebra.dim()});
  charge(quotient.size() + all.size());

  for (int p = 1; p <= c.max_degree; ++p) {
    auto subsets = subsets_of_size(w, static_cast<unsigned>(p));
    std::vector<std::vector<std::uint32_t>> bases(subsets.size());
    const MVDegree& prev = c.degrees.back();
    parallel_for(subsets.size(), threads, [&](std::size_t k) {
      // Intersect the parent summand (S minus its last element) with the last ideal.
      std::vector<unsigned> parent(subsets[k].begin(), subsets[k].end() - 1);
      const MVSummand* s = find_summand(prev, parent);
      if (s) bases[k] = meet(s->basis, cover.ideals[subsets[k].back() - 1].basis);
    });
    MVDegree deg{p, {}, 0};
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      if (bases[k].empty()) continue;
      deg.summands.push_back({subsets[k], std::move(bases[k]), deg.rank});
      deg.rank += static_cast<std::uint32_t>(deg.summands.back().basis.size());
    }
    charge(deg.rank);
    c.degrees.push_back(std::move(deg));
  }

  // d_0: projection onto the quotient basis.
  {
    std::vector<SmallColumn> cols(algebra.dim());
    for (std::uint32_t k = 0; k < algebra.dim(); ++k)
      if (!cover.target.contains(k)) cols[k].push_back({position(quotient, k), 1});
    c.differentials.push_back(SparseMatrix::from_small_columns(static_cast<std::uint32_t>(quotient.size()), cols));
  }
  for (int p = 1; p <= c.max_degree; ++p) {
    const MVDegree& src = c.degree(p);
    const MVDegree& dst = c.degree(p - 1);
    std::vector<SmallColumn> cols(src.rank);
    parallel_for(src.summands.size(), threads, [&](std::size_t k) {
      const MVSummand& s = src.summands[k];
      for (std::size_t jj = 0; jj < s.subset.size(); ++jj) {
        std::vector<unsigned> face = s.subset;
        face.erase(face.begin() + static_cast<long>(jj));
        const MVSummand* t = find_summand(dst, face);
        if (!t) throw VerificationFailure("MV face summand missing");
        const std::int64_t sign = jj % 2 == 0 ? 1 : -1;  // #(S, j) is the position of j in S.
        for (std::size_t v = 0; v < s.basis.size(); ++v)
          cols[s.offset + v].push_back({t->offset + position(t->basis, s.basis[v]), sign});
      }
    });
    for (auto& col : cols)
      std::sort(col.begin(), col.end(), [](const SmallEntry& a, const SmallEntry& b) { return a.index < b.index; });
    c.differentials.push_back(SparseMatrix::from_small_columns(dst.rank, cols));
  }
  return c;
}

bool composes_to_zero(const MVComplex& c) {
  for (int p = 0; p <= c.max_degree; ++p)
    if (!(c.d(p) * c.d(p + 1)).is_zero()) return false;
  return true;
}

MVHomologyReport check_acyclic(const MVComplex& c, const CoefficientRing& ring) {
  MVHomologyReport r;
  r.acyclic = true;
  const int top = c.full() ? c.max_degree : c.max_degree - 1;
  for (int p = -1; p <= top; ++p) {
    auto h = chain_homology(c.d(p), c.d(p + 1), ring);
    r.acyclic &= h.is_zero();
    r.homology.emplace(p, std::move(h));
  }
  return r;
}

bool simplex_decomposition_check(const MVComplex& c) {
  const unsigned w = static_cast<unsigned>(c.cover.width());
  const std::uint32_t dim = c.rank(0);
  // Copy of v in summand S of degree p sits at this global column.
  auto locate = [&](int p, const std::vector<unsigned>& S, std::uint32_t v) -> std::optional<std::uint32_t> {
    const MVSummand* s = find_summand(c.degree(p), S);
    if (!s) return std::nullopt;
    auto it = std::lower_bound(s->basis.begin(), s->basis.end(), v);
    if (it == s->basis.end() || *it != v) return std::nullopt;
    return s->offset + static_cast<std::uint32_t>(it - s->basis.begin());
  };
  std::vector<std::size_t> copies(static_cast<std::size_t>(c.max_degree + 2), 0);
  for (std::uint32_t v = 0; v < dim; ++v) {
    std::vector<unsigned> support;
    for (unsigned i = 1; i <= w; ++i)
      if (c.cover.ideals[i - 1].contains(v)) support.push_back(i);
    const bool in_target = c.cover.target.contains(v);
    if (in_target == support.empty()) return false;
    // Augmentation: v maps to its class in A/I, which vanishes exactly on I.
    if (c.d(0).column(v).size() != (in_target ? 0u : 1u)) return false;
    for (int p = 1; p <= c.max_degree; ++p) {
      for (const auto& pos : subsets_of_size(static_cast<unsigned>(support.size()), static_cast<unsigned>(p))) {
        std::vector<unsigned> S;
        for (auto k : pos) S.push_back(support[k - 1]);
        auto col = locate(p, S, v);
        if (!col) return false;
        ++copies[static_cast<std::size_t>(p)];
        SparseVector expected;
        for (std::size_t jj = 0; jj < S.size(); ++jj) {
          std::vector<unsigned> face = S;
          face.erase(face.begin() + static_cast<long>(jj));
          auto row = p == 1 ? std::optional<std::uint32_t>(v) : locate(p - 1, face, v);
          if (!row) return false;
          expected.push_back({*row, Integer((sign_count(S, S[jj]) % 2 == 0) ? 1 : -1)});
        }
        std::sort(expected.begin(), expected.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
        if (!(c.d(p).column(*col) == expected)) return false;
      }
    }
  }
  // No copies beyond those of the simplices.
  for (int p = 1; p <= c.max_degree; ++p)
    if (copies[static_cast<std::size_t>(p)] != c.rank(p)) return false;
  return true;
}

nlohmann::json manifest(const MVComplex& c) {
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& d : c.degrees) {
    nlohmann::json summands = nlohmann::json::array();
    for (const auto& s : d.summands) {
      nlohmann::json tags = nlohmann::json::array();
      for (auto i : s.subset) tags.push_back(c.cover.ideals[i - 1].tag.to_string());
      summands.push_back({{"subset", s.subset}, {"ideals", tags}, {"offset", s.offset}, {"size", s.basis.size()}});
    }
    degrees.push_back({{"p", d.p}, {"rank", d.rank}, {"summands", summands}});
  }
  nlohmann::json diffs = nlohmann::json::array();
  for (int p = 0; p <= c.max_degree; ++p) {
    const auto& m = c.differentials[static_cast<std::size_t>(p)];
    diffs.push_back({{"p", p},
                     {"rows", m.rows()},
                     {"cols", m.cols()},
                     {"nnz", m.nnz()},
                     {"file", "d_" + std::to_string(p) + ".tri"}});
  }
  return {{"algebra", c.cover.algebra.to_string()},
          {"width", c.cover.width()},
          {"height", c.cover.height},
          {"max_degree", c.max_degree},
          {"degrees", degrees},
          {"differentials", diffs}};
}

void export_mv(const MVComplex& c, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (int p = 0; p <= c.max_degree; ++p) {
    std::ofstream out(std::filesystem::path(dir) / ("d_" + std::to_string(p) + ".tri"));
    write_triplets(out, c.differentials[static_cast<std::size_t>(p)]);
    if (!out) throw Error("cannot write matrix into " + dir);
  }
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  out << manifest(c).dump(2) << "\n";
  if (!out) throw Error("cannot write manifest into " + dir);
}

}  // namespace diagtor
