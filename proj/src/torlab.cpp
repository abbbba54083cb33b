#include "diagtor/torlab.hpp"

#include "diagtor/covers.hpp"
#include "diagtor/errors.hpp"
#include "diagtor/mv.hpp"

#include <algorithm>

namespace diagtor {

namespace {

using nlohmann::json;

std::uint64_t bar_size(std::uint64_t m, unsigned q) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < q; ++i) {
    if (m != 0 && r > ~std::uint64_t(0) / m) return ~std::uint64_t(0);
    r *= m;
  }
  return r;
}

bool satisfied(Claim c, MapClass m) {
  switch (c) {
    case Claim::None: return true;
    case Claim::Isomorphism: return m == MapClass::Isomorphism;
    case Claim::Surjection: return m == MapClass::Isomorphism || m == MapClass::SurjectiveNotInjective;
  }
  return false;
}

void require_induced_ring(const CoefficientRing& ring) {
  if (ring.kind() == RingKind::ModularRing)
    throw UnsupportedRing("induced maps are computed over Z, Q or F_p, not " + ring.spec());
}

std::vector<InducedDegree> induced_bar(const Algebra& algebra, const Algebra& group, const CoefficientRing& ring,
                                       unsigned q_max, const TorOptions& opt) {
  BarComplex a(algebra, ring, opt.budget, opt.threads), g(group, ring, opt.budget, opt.threads);
  a.require_budget(q_max + 1);
  g.require_budget(q_max + 1);
  std::vector<SparseMatrix> da, dg, f;
  for (unsigned q = 0; q <= q_max + 1; ++q) {
    da.push_back(a.differential(q));
    dg.push_back(g.differential(q));
    f.push_back(bar_quotient_map(a.ideal(), g.ideal(), q));
  }
  std::vector<InducedDegree> out;
  for (unsigned q = 0; q <= q_max; ++q) {
    ChainMapWindow w{q == 0 ? SparseMatrix(0, 0) : f[q - 1], f[q], f[q + 1]};
    InducedDegree d{q, homology_induced_map({da[q], da[q + 1]}, {dg[q], dg[q + 1]}, w, ring)};
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<InducedDegree> induced_resolution(const Algebra& algebra, const Algebra& group,
                                              const CoefficientRing& ring, unsigned q_max, const TorOptions& opt) {
  const Integer delta = integral_delta(ring);
  FreeResolution F(algebra, delta, q_max + 1, std::max<std::size_t>(opt.budget, 50'000'000));
  FreeResolution P(group, delta, q_max + 1, std::max<std::size_t>(opt.budget, 50'000'000));
  const Algebra& A = F.algebra();
  const Algebra& G = P.algebra();
  const std::uint32_t dimA = A.dim(), dimG = G.dim();
  std::vector<std::optional<std::uint32_t>> pi(dimA);
  for (std::uint32_t b = 0; b < dimA; ++b) pi[b] = quotient_index(A, G, b);

  // f_q(e_k) in P_q, coordinates l * dimG + gamma.
  std::vector<std::vector<SparseVector>> fv(q_max + 2);
  fv[0].push_back({{G.identity_index(), Integer(1)}});
  for (unsigned q = 1; q <= q_max + 1; ++q) {
    for (std::uint32_t k = 0; k < F.generators(q); ++k) {
      std::map<std::uint32_t, Integer> acc;
      for (const auto& e : F.generator(q, k)) {
        const std::uint32_t j = e.index / dimA, b = e.index % dimA;
        if (!pi[b]) continue;
        for (const auto& t : fv[q - 1][j]) {
          const std::uint32_t l = t.index / dimG, gamma = t.index % dimG;
          const Product p = G.product(*pi[b], gamma);
          acc[l * dimG + p.index] += e.value * t.value;
        }
      }
      SparseVector target;
      for (auto& [i, c] : acc)
        if (c != 0) target.push_back({i, c});
      auto z = P.lift(q, target);
      if (!z) throw VerificationFailure("comparison map does not lift at degree " + std::to_string(q));
      fv[q].push_back(std::move(*z));
    }
  }
  auto reduced = [&](unsigned q) {
    std::vector<SparseVector> cols;
    for (const auto& z : fv[q]) {
      std::map<std::uint32_t, Integer> acc;
      for (const auto& e : z) acc[e.index / dimG] += e.value;
      SparseVector c;
      for (auto& [i, v] : acc)
        if (v != 0) c.push_back({i, v});
      cols.push_back(std::move(c));
    }
    return SparseMatrix::from_columns(P.generators(q), std::move(cols));
  };
  std::vector<SparseMatrix> dF, dP, f;
  for (unsigned q = 0; q <= q_max + 1; ++q) {
    dF.push_back(F.reduced_differential(q));
    dP.push_back(P.reduced_differential(q));
    f.push_back(reduced(q));
  }
  std::vector<InducedDegree> out;
  for (unsigned q = 0; q <= q_max; ++q) {
    ChainMapWindow w{q == 0 ? SparseMatrix(0, 0) : f[q - 1], f[q], f[q + 1]};
    out.push_back({q, homology_induced_map({dF[q], dF[q + 1]}, {dP[q], dP[q + 1]}, w, ring)});
  }
  return out;
}

json group_json(const HomologyGroup& h, const CoefficientRing& ring) { return to_json(h, ring); }

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

json check(const std::string& name, const std::string& status, json data) {
  return {{"name", name}, {"status", status}, {"data", std::move(data)}};
}

}  // namespace

TorMethod parse_tor_method(const std::string& s) {
  if (s == "auto") return TorMethod::Auto;
  if (s == "bar") return TorMethod::Bar;
  if (s == "resolution") return TorMethod::Resolution;
  throw InvalidArgument("unknown Tor method '" + s + "' (auto, bar, resolution)");
}

std::string to_string(TorMethod m) {
  switch (m) {
    case TorMethod::Auto: return "auto";
    case TorMethod::Bar: return "bar";
    case TorMethod::Resolution: return "resolution";
  }
  return "auto";
}

std::string to_string(Claim c) {
  switch (c) {
    case Claim::None: return "none";
    case Claim::Isomorphism: return "isomorphism";
    case Claim::Surjection: return "surjection";
  }
  return "none";
}

Claim theorem_claim(const AlgebraId& id, const CoefficientRing& ring, unsigned q) {
  const long n = id.n, k = q;
  switch (id.family) {
    case Family::Partition:
      if (k <= n - 3) return Claim::Isomorphism;
      if (k == n - 2) return Claim::Surjection;
      return Claim::None;
    case Family::JonesAnnular:
      if (n % 2 == 1 || ring.is_unit(ring.delta())) return Claim::Isomorphism;
      if (k <= n / 2 - 3) return Claim::Isomorphism;
      if (k == n / 2 - 2) return Claim::Surjection;
      return Claim::None;
    default: return Claim::None;
  }
}

bool InducedMapReport::pass() const {
  return std::all_of(degrees.begin(), degrees.end(), [](const InducedDegree& d) { return d.satisfied; });
}

InducedMapReport induced_tor_map(const Algebra& algebra, const CoefficientRing& ring, unsigned q_max,
                                 const TorOptions& options) {
  require_induced_ring(ring);
  Algebra group(quotient_target(algebra.id()));
  TorMethod method = options.method;
  if (method == TorMethod::Auto) {
    const std::uint64_t top = bar_size(algebra.dim() - 1, q_max + 1);
    method = top <= options.auto_bar_limit ? TorMethod::Bar : TorMethod::Resolution;
  }
  InducedMapReport r{algebra.id(), group.id(), ring.spec(), to_string(method), {}};
  r.degrees = method == TorMethod::Bar ? induced_bar(algebra, group, ring, q_max, options)
                                       : induced_resolution(algebra, group, ring, q_max, options);
  for (auto& d : r.degrees) {
    d.claim = theorem_claim(algebra.id(), ring, d.q);
    d.satisfied = satisfied(d.claim, d.map.classification);
  }
  return r;
}

Theorem parse_theorem(const std::string& s) {
  if (s == "partition") return Theorem::Partition;
  if (s == "jones") return Theorem::Jones;
  if (s == "jones-global") return Theorem::JonesGlobal;
  if (s == "main-partition") return Theorem::MainPartition;
  if (s == "main-jones") return Theorem::MainJones;
  throw InvalidArgument("unknown theorem '" + s + "' (partition, jones, jones-global, main-partition, main-jones)");
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::Partition: return "partition";
    case Theorem::Jones: return "jones";
    case Theorem::JonesGlobal: return "jones-global";
    case Theorem::MainPartition: return "main-partition";
    case Theorem::MainJones: return "main-jones";
  }
  return "partition";
}

Verdict verify_theorem(Theorem theorem, unsigned n, const CoefficientRing& ring, unsigned q_max,
                       const TorOptions& options, unsigned height) {
  const bool partition = theorem == Theorem::Partition || theorem == Theorem::MainPartition;
  const Algebra algebra(partition ? Family::Partition : Family::JonesAnnular, n);
  if (height == 0) {
    if (partition)
      height = n - 1;
    else if (theorem == Theorem::JonesGlobal || n % 2 == 1)
      height = n;
    else
      height = n / 2 - 1;
  }
  const bool with_tor = theorem == Theorem::Partition || theorem == Theorem::Jones || theorem == Theorem::JonesGlobal;
  json checks = json::array();

  if (theorem == Theorem::JonesGlobal) {
    const bool unit = ring.is_unit(ring.delta());
    checks.push_back(check("hypothesis", n % 2 == 1 || unit ? "pass" : "fail",
                           {{"n_odd", n % 2 == 1}, {"delta_unit", unit}}));
  }

  if (height == 0) {
    checks.push_back(check("cover", "skipped", {{"reason", "height 0 gives an empty cover condition"}}));
  } else {
    // Large algebras multiply by composition instead of a table.
    const std::size_t cells = static_cast<std::size_t>(algebra.dim()) * algebra.dim();
    const Algebra tabled = cells <= 50'000'000 ? algebra.with_table(build_table(algebra, options.threads)) : algebra;
    auto cover = standard_cover(tabled, height);
    auto report = verify_cover(tabled, cover, ring, options.threads);
    json failures = json::array();
    std::size_t certified = 0, zero = 0;
    for (const auto& s : report.subsets) {
      if (!s.passed) failures.push_back({{"members", s.members}, {"ideal", s.tag.to_string()}, {"message", s.message}});
      if (s.outcome.status == SynthesisStatus::Certified) ++certified;
      if (s.outcome.status == SynthesisStatus::Zero) ++zero;
    }
    checks.push_back(check("cover", report.ok() ? "pass" : "fail",
                           {{"width", cover.width()},
                            {"height", cover.height},
                            {"height_valid", report.height_valid},
                            {"union_matches", report.union_matches},
                            {"subsets", report.subsets.size()},
                            {"certified", certified},
                            {"zero", zero},
                            {"failures", failures}}));
    try {
      auto mv = build_mv(tabled, cover, static_cast<unsigned>(cover.width()), options.threads);
      auto h = check_acyclic(mv, CoefficientRing::integers());
      const bool squares = composes_to_zero(mv), simplex = simplex_decomposition_check(mv);
      json ranks = json::array();
      for (int p = -1; p <= mv.max_degree; ++p) ranks.push_back(mv.rank(p));
      checks.push_back(check("mayer_vietoris", h.acyclic && squares && simplex ? "pass" : "fail",
                             {{"ranks", ranks},
                              {"d_squared_zero", squares},
                              {"simplex_decomposition", simplex},
                              {"acyclic_over_Z", h.acyclic}}));
    } catch (const BudgetExceeded& e) {
      checks.push_back(check("mayer_vietoris", "skipped", {{"reason", e.what()}}));
    }
  }

  if (with_tor) {
    try {
      auto r = induced_tor_map(algebra, ring, q_max, options);
      checks.push_back(check("tor", r.pass() ? "pass" : "fail", to_json(r, ring)));
    } catch (const BudgetExceeded& e) {
      checks.push_back(check("tor", "skipped", {{"reason", e.what()}}));
    }
  }

  std::string overall = "pass";
  for (const auto& c : checks) {
    if (c["status"] == "fail") overall = "fail";
    if (c["status"] == "skipped" && overall == "pass") overall = "incomplete";
  }
  json v{{"theorem", to_string(theorem)},
         {"algebra", algebra.id().to_string()},
         {"ring", ring.spec()},
         {"delta", ring.to_string(ring.delta())},
         {"q_max", q_max},
         {"height", height},
         {"checks", checks},
         {"overall", overall}};
  return {std::move(v)};
}

nlohmann::json to_json(const HomologyGroup& h, const CoefficientRing& ring) {
  json torsion = json::array();
  for (const auto& t : h.torsion) torsion.push_back(t.str());
  return {{"free_rank", h.free_rank}, {"torsion", torsion}, {"text", h.to_string(ring)}};
}

nlohmann::json to_json(const TorReport& r, const CoefficientRing& ring) {
  json groups = json::array();
  for (std::size_t q = 0; q < r.groups.size(); ++q) {
    json g = group_json(r.groups[q], ring);
    g["q"] = q;
    groups.push_back(g);
  }
  return {{"algebra", r.algebra.to_string()},
          {"ring", r.ring},
          {"delta", ring.to_string(ring.delta())},
          {"method", r.method},
          {"groups", groups}};
}

nlohmann::json to_json(const InducedMapReport& r, const CoefficientRing& ring) {
  json degrees = json::array();
  for (const auto& d : r.degrees)
    degrees.push_back({{"q", d.q},
                       {"source", group_json(d.map.source, ring)},
                       {"target", group_json(d.map.target, ring)},
                       {"matrix", matrix_json(d.map.matrix)},
                       {"classification", to_string(d.map.classification)},
                       {"claim", to_string(d.claim)},
                       {"satisfied", d.satisfied}});
  return {{"source", r.source.to_string()},
          {"target", r.target.to_string()},
          {"ring", r.ring},
          {"delta", ring.to_string(ring.delta())},
          {"method", r.method},
          {"degrees", degrees},
          {"pass", r.pass()}};
}

}  // namespace diagtor
