#include "diagtor/covers.hpp"

#include "diagtor/errors.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace diagtor {

namespace {

unsigned cyc(long x, unsigned n) { return static_cast<unsigned>(((x - 1) % long(n) + long(n)) % long(n)) + 1; }

unsigned top(unsigned n, unsigned i) { return n + i - 1; }

void flatten_into(const IdealTag& t, std::vector<IdealTag>& out) {
  if (t.kind == IdealTag::Kind::Intersection) {
    for (const auto& p : t.parts) flatten_into(p, out);
  } else if (t.kind != IdealTag::Kind::Whole) {
    out.push_back(t);
  }
}

std::vector<IdealTag> atoms(const IdealTag& t) {
  std::vector<IdealTag> out;
  flatten_into(t, out);
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void check_label(unsigned i, unsigned n, const char* name) {
  require(i >= 1 && i <= n, std::string(name) + " index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

LeftIdealSpan make_span(const Algebra& algebra, std::vector<std::uint32_t> basis, IdealTag tag) {
  LeftIdealSpan s{algebra.id(), std::move(basis), std::move(tag), false};
  s.zero = s.basis.empty();
  return s;
}

SetPartition from_blocks(unsigned n, std::vector<std::vector<VertexLabel>> blocks) {
  return SetPartition::from_blocks(n, blocks);
}

AlgebraElement diagram_element(const Algebra& algebra, const SetPartition& d) {
  auto i = algebra.index_of(d);
  if (!i) throw VerificationFailure("diagram " + d.to_string() + " is not in " + algebra.id().to_string());
  return AlgebraElement::basis(algebra.id(), *i);
}

}  // namespace

IdealTag IdealTag::intersection(const std::vector<IdealTag>& parts) {
  IdealTag t;
  for (const auto& p : parts) flatten_into(p, t.parts);
  if (t.parts.empty()) return whole();
  if (t.parts.size() == 1) return t.parts.front();
  t.kind = Kind::Intersection;
  return t;
}

std::string IdealTag::to_string() const {
  switch (kind) {
    case Kind::Whole: return "A";
    case Kind::K: return "K(" + std::to_string(i) + ")";
    case Kind::L: return "L(" + std::to_string(i) + "," + std::to_string(j) + ")";
    case Kind::J: return "J(" + std::to_string(i) + ")";
    case Kind::BelowTop: return "I(<=n-1)";
    case Kind::Intersection: {
      std::string s;
      for (const auto& p : parts) s += (s.empty() ? "" : " & ") + p.to_string();
      return s;
    }
  }
  return "?";
}

bool LeftIdealSpan::contains(std::uint32_t i) const { return std::binary_search(basis.begin(), basis.end(), i); }

bool satisfies(const SetPartition& rho, const IdealTag& tag) {
  const unsigned n = rho.n();
  switch (tag.kind) {
    case IdealTag::Kind::Whole: return true;
    case IdealTag::Kind::K: {
      unsigned v = top(n, tag.i);
      for (unsigned u = 0; u < 2 * n; ++u)
        if (u != v && rho.same_block(u, v)) return false;
      return true;
    }
    case IdealTag::Kind::L: return rho.same_block(top(n, tag.i), top(n, tag.j));
    case IdealTag::Kind::J: return rho.same_block(top(n, tag.i), top(n, cyc(tag.i + 1, n)));
    case IdealTag::Kind::BelowTop: return propagating_number(rho) < n;
    case IdealTag::Kind::Intersection:
      return std::all_of(tag.parts.begin(), tag.parts.end(), [&](const IdealTag& p) { return satisfies(rho, p); });
  }
  return false;
}

LeftIdealSpan ideal_from_tag(const Algebra& algebra, const IdealTag& tag) {
  std::vector<std::uint32_t> members;
  for (std::uint32_t k = 0; k < algebra.dim(); ++k)
    if (satisfies(algebra.diagram(k), tag)) members.push_back(k);
  return make_span(algebra, std::move(members), tag);
}

LeftIdealSpan ideal_K(const Algebra& partition, unsigned i) {
  require(partition.id().family == Family::Partition, "K ideals live in the partition algebra");
  check_label(i, partition.id().n, "K");
  return ideal_from_tag(partition, IdealTag::K(i));
}

LeftIdealSpan ideal_L(const Algebra& partition, unsigned i, unsigned j) {
  require(partition.id().family == Family::Partition, "L ideals live in the partition algebra");
  check_label(i, partition.id().n, "L");
  check_label(j, partition.id().n, "L");
  require(i < j, "L(i,j) needs i < j");
  return ideal_from_tag(partition, IdealTag::L(i, j));
}

LeftIdealSpan ideal_J(const Algebra& jones, unsigned i) {
  require(jones.id().family == Family::JonesAnnular, "J ideals live in the Jones annular algebra");
  require(jones.id().n >= 2, "J ideals need n >= 2");
  check_label(i, jones.id().n, "J");
  return ideal_from_tag(jones, IdealTag::J(i));
}

LeftIdealSpan ideal_below_top(const Algebra& algebra) {
  std::vector<std::uint32_t> members;
  for (std::uint32_t k = 0; k < algebra.dim(); ++k)
    if (!algebra.is_full_propagation(k)) members.push_back(k);
  return make_span(algebra, std::move(members), IdealTag::below_top());
}

bool predicted_zero(const IdealTag& tag, unsigned n) {
  std::set<unsigned> S, JT;
  PairSet T;
  for (const auto& a : atoms(tag)) {
    if (a.kind == IdealTag::Kind::K) S.insert(a.i);
    else if (a.kind == IdealTag::Kind::L) T.insert({a.i, a.j});
    else if (a.kind == IdealTag::Kind::J) JT.insert(a.i);
  }
  for (auto [i, j] : T)
    if (S.count(i) || S.count(j)) return true;
  // For n = 2 both J ideals name the same edge 1'-2'.
  return !JT.empty() && n > 2 && !is_innermost(JT, n);
}

LeftIdealSpan intersect(const Algebra& algebra, const std::vector<LeftIdealSpan>& ideals) {
  std::vector<IdealTag> tags;
  std::vector<std::uint32_t> acc;
  bool first = true;
  for (const auto& I : ideals) {
    if (!(I.algebra == algebra.id())) throw DimensionMismatch("ideal from " + I.algebra.to_string());
    tags.push_back(I.tag);
    if (first) {
      acc = I.basis;
      first = false;
      continue;
    }
    std::vector<std::uint32_t> next;
    std::set_intersection(acc.begin(), acc.end(), I.basis.begin(), I.basis.end(), std::back_inserter(next));
    acc = std::move(next);
  }
  if (first) {
    acc.resize(algebra.dim());
    for (std::uint32_t k = 0; k < algebra.dim(); ++k) acc[k] = k;
  }
  auto tag = IdealTag::intersection(tags);
  auto direct = ideal_from_tag(algebra, tag);
  if (direct.basis != acc)
    throw VerificationFailure("intersection " + tag.to_string() + " disagrees with its defining condition");
  bool has_below = false;
  for (const auto& a : atoms(tag)) has_below |= a.kind == IdealTag::Kind::BelowTop;
  if (!has_below && predicted_zero(tag, algebra.id().n) != acc.empty())
    throw VerificationFailure("intersection " + tag.to_string() + " disagrees with the zero criterion");
  return make_span(algebra, std::move(acc), tag);
}

bool is_left_closed(const Algebra& algebra, const LeftIdealSpan& ideal) {
  for (std::uint32_t x = 0; x < algebra.dim(); ++x)
    for (auto rho : ideal.basis)
      if (!ideal.contains(algebra.product(x, rho).index)) return false;
  return true;
}

bool is_innermost(const std::set<unsigned>& T, unsigned n) {
  for (auto i : T)
    if (n > 1 && cyc(i + 1, n) != i && T.count(cyc(i + 1, n))) return false;
  return true;
}

std::set<unsigned> moral_support(const std::set<unsigned>& T, unsigned n) {
  std::set<unsigned> ms;
  for (auto i : T) {
    ms.insert(cyc(i, n));
    ms.insert(cyc(i + 1, n));
  }
  return ms;
}

std::optional<unsigned> pick_a(const std::set<unsigned>& T, unsigned n) {
  auto ms = moral_support(T, n);
  if (ms.size() >= n) return std::nullopt;
  // b locally minimal in the complement: b outside MS, b-1 inside.
  std::optional<unsigned> best;
  for (unsigned b = 1; b <= n; ++b) {
    if (ms.count(b) || !ms.count(cyc(long(b) - 1, n))) continue;
    unsigned a = cyc(long(b) - 2, n);
    if (!best || a < *best) best = a;
  }
  return best;
}

SetPartition build_mu(const std::set<unsigned>& S, const PairSet&, unsigned a, unsigned b, unsigned n) {
  check_label(a, n, "mu");
  check_label(b, n, "mu");
  require(!S.count(a), "mu: a lies in S");
  require(S.size() + 1 < n, "mu: S together with a is all of 1..n");
  require(b != a && !S.count(b), "mu: b lies in S or equals a");
  std::vector<std::vector<VertexLabel>> blocks{{{a, true}}, {{a, false}, {b, false}, {b, true}}};
  for (unsigned i = 1; i <= n; ++i)
    if (i != a && i != b) blocks.push_back({{i, false}, {i, true}});
  return from_blocks(n, std::move(blocks));
}

SetPartition build_nu(unsigned a, unsigned b, unsigned n) {
  check_label(a, n, "nu");
  check_label(b, n, "nu");
  require(a < b, "nu needs a < b");
  std::vector<std::vector<VertexLabel>> blocks{{{a, false}, {b, false}, {a, true}, {b, true}}};
  for (unsigned i = 1; i <= n; ++i)
    if (i != a && i != b) blocks.push_back({{i, false}, {i, true}});
  return from_blocks(n, std::move(blocks));
}

SetPartition build_omega(unsigned a, unsigned n) {
  require(n >= 3, "omega needs n >= 3");
  check_label(a, n, "omega");
  unsigned a1 = cyc(a + 1, n), a2 = cyc(a + 2, n);
  std::vector<std::vector<VertexLabel>> blocks{
      {{a2, false}, {a1, false}}, {{a, false}, {a2, true}}, {{a1, true}, {a, true}}};
  for (unsigned i = 1; i <= n; ++i)
    if (i != a && i != a1 && i != a2) blocks.push_back({{i, false}, {i, true}});
  return from_blocks(n, std::move(blocks));
}

std::string to_string(RetractionStep::Kind k) {
  switch (k) {
    case RetractionStep::Kind::Mu: return "mu";
    case RetractionStep::Kind::Nu: return "nu";
    case RetractionStep::Kind::Omega: return "omega";
    case RetractionStep::Kind::ScaledProjection: return "scaled_projection";
  }
  return "?";
}

std::string to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Zero: return "zero";
    case SynthesisStatus::Certified: return "idempotent";
    case SynthesisStatus::Impossible: return "impossible";
  }
  return "?";
}

void verify_certificate(const Algebra& algebra, const IdempotentCertificate& cert, const CoefficientRing& ring) {
  const auto& e = cert.generator;
  const auto& name = cert.ideal.tag.to_string();
  if (e.is_zero()) throw VerificationFailure(name + ": generator is zero");
  if (!(multiply(algebra, e, e, ring) == e)) throw VerificationFailure(name + ": generator is not idempotent");
  for (const auto& [k, c] : e.coeffs)
    if (!cert.ideal.contains(k)) throw VerificationFailure(name + ": generator leaves the ideal");
  for (auto rho : cert.ideal.basis) {
    auto r = AlgebraElement::basis(algebra.id(), rho);
    if (!(multiply(algebra, r, e, ring) == r))
      throw VerificationFailure(name + ": right multiplication fixes " + algebra.diagram(rho).to_string() + " wrongly");
  }
  for (std::uint32_t x = 0; x < algebra.dim(); ++x) {
    auto xe = multiply(algebra, AlgebraElement::basis(algebra.id(), x), e, ring);
    for (const auto& [k, c] : xe.coeffs)
      if (!cert.ideal.contains(k)) throw VerificationFailure(name + ": A*e leaves the ideal");
  }
}

namespace {

SynthesisOutcome finish(const Algebra& algebra, LeftIdealSpan ideal, std::vector<RetractionStep> chain,
                        const CoefficientRing& ring, const Scalar& scalar = 1) {
  AlgebraElement e = AlgebraElement::basis(algebra.id(), algebra.identity_index());
  for (const auto& step : chain) e = multiply(algebra, e, diagram_element(algebra, step.diagram), ring);
  e = scale(e, scalar, ring);
  IdempotentCertificate cert{std::move(ideal), std::move(e), std::move(chain)};
  verify_certificate(algebra, cert, ring);
  auto span = cert.ideal;
  return {SynthesisStatus::Certified, std::move(span), std::move(cert), ""};
}

IdealTag partition_tag(const std::set<unsigned>& S, const PairSet& T) {
  std::vector<IdealTag> parts;
  for (auto i : S) parts.push_back(IdealTag::K(i));
  for (auto [i, j] : T) parts.push_back(IdealTag::L(i, j));
  return IdealTag::intersection(parts);
}

}  // namespace

SynthesisOutcome synthesize_partition(const Algebra& partition, const std::set<unsigned>& S, const PairSet& T,
                                      const CoefficientRing& ring) {
  require(partition.id().family == Family::Partition, "partition synthesis needs the partition algebra");
  const unsigned n = partition.id().n;
  for (auto i : S) check_label(i, n, "K");
  for (auto [i, j] : T) {
    check_label(i, n, "L");
    check_label(j, n, "L");
    require(i < j, "L(i,j) needs i < j");
  }
  auto ideal = ideal_from_tag(partition, partition_tag(S, T));
  if (ideal.zero) return {SynthesisStatus::Zero, std::move(ideal), std::nullopt, "intersection is zero"};
  if (S.size() == n)
    return {SynthesisStatus::Impossible, std::move(ideal), std::nullopt, "every top vertex is required to be a singleton"};

  std::vector<RetractionStep> chain;
  PairSet t_cur;
  for (auto [a, b] : T) {
    chain.push_back({RetractionStep::Kind::Nu, a, b, build_nu(a, b, n), 0});
    t_cur.insert({a, b});
  }
  std::set<unsigned> s_cur;
  for (auto a : S) {
    unsigned b = 1;
    while (b == a || s_cur.count(b)) ++b;
    chain.push_back({RetractionStep::Kind::Mu, a, b, build_mu(s_cur, t_cur, a, b, n), 0});
    s_cur.insert(a);
  }
  return finish(partition, std::move(ideal), std::move(chain), ring);
}

SynthesisOutcome synthesize_jones(const Algebra& jones, const std::set<unsigned>& T, const CoefficientRing& ring) {
  require(jones.id().family == Family::JonesAnnular, "Jones synthesis needs the Jones annular algebra");
  const unsigned n = jones.id().n;
  for (auto i : T) check_label(i, n, "J");
  std::vector<IdealTag> parts;
  for (auto i : T) parts.push_back(IdealTag::J(i));
  auto ideal = ideal_from_tag(jones, IdealTag::intersection(parts));
  if (ideal.zero) return {SynthesisStatus::Zero, std::move(ideal), std::nullopt, "T is not innermost"};

  std::vector<RetractionStep> peeled;
  std::set<unsigned> cur = T;
  while (!cur.empty()) {
    auto a = pick_a(cur, n);
    if (!a) break;
    if (!cur.count(*a)) throw VerificationFailure("picked a outside T");
    peeled.push_back({RetractionStep::Kind::Omega, *a, 0, build_omega(*a, n), 0});
    cur.erase(*a);
  }
  if (cur.empty()) {
    std::reverse(peeled.begin(), peeled.end());
    return finish(jones, std::move(ideal), std::move(peeled), ring);
  }
  // MS(T) is all of C_n, so peeling never starts and cur == T.
  if (!ring.is_unit(ring.delta()))
    return {SynthesisStatus::Impossible, std::move(ideal), std::nullopt,
            "T covers every vertex through its moral support and delta is not a unit"};
  std::set<std::pair<unsigned, unsigned>> arcs;
  for (auto i : T) arcs.emplace(std::min(i, cyc(i + 1, n)), std::max(i, cyc(i + 1, n)));
  auto q = AnnularLinkState::from_arcs(n, {arcs.begin(), arcs.end()});
  if (!q) throw VerificationFailure("arcs of T do not form a link state");
  auto c = build_annular(*q, *q, 0);
  unsigned k = compose(c, c).loops;
  std::vector<RetractionStep> chain{{RetractionStep::Kind::ScaledProjection, 0, 0, c, k}};
  return finish(jones, std::move(ideal), std::move(chain), ring, ring.inverse(ring.delta_power(k)));
}

SynthesisOutcome synthesize(const Algebra& algebra, const IdealTag& tag, const CoefficientRing& ring) {
  std::set<unsigned> S, JT;
  PairSet T;
  for (const auto& a : atoms(tag)) {
    switch (a.kind) {
      case IdealTag::Kind::K: S.insert(a.i); break;
      case IdealTag::Kind::L: T.insert({a.i, a.j}); break;
      case IdealTag::Kind::J: JT.insert(a.i); break;
      default: throw InvalidArgument("no idempotent construction for " + a.to_string());
    }
  }
  if (algebra.id().family == Family::Partition && JT.empty()) return synthesize_partition(algebra, S, T, ring);
  if (algebra.id().family == Family::JonesAnnular && S.empty() && T.empty()) return synthesize_jones(algebra, JT, ring);
  throw InvalidArgument("no idempotent construction for " + tag.to_string() + " in " + algebra.id().to_string());
}

CoverDescriptor standard_cover(const Algebra& algebra, unsigned height) {
  CoverDescriptor c{algebra.id(), {}, ideal_below_top(algebra), height};
  const unsigned n = algebra.id().n;
  if (algebra.id().family == Family::Partition) {
    for (unsigned i = 1; i <= n; ++i) c.ideals.push_back(ideal_K(algebra, i));
    for (unsigned i = 1; i <= n; ++i)
      for (unsigned j = i + 1; j <= n; ++j) c.ideals.push_back(ideal_L(algebra, i, j));
  } else if (algebra.id().family == Family::JonesAnnular) {
    for (unsigned i = 1; i <= n; ++i) c.ideals.push_back(ideal_J(algebra, i));
  } else {
    throw InvalidArgument("no standard cover for " + algebra.id().to_string());
  }
  return c;
}

std::vector<std::vector<unsigned>> subsets_of_size(unsigned w, unsigned p) {
  std::vector<std::vector<unsigned>> out;
  if (p > w) return out;
  std::vector<unsigned> pick(p);
  for (unsigned k = 0; k < p; ++k) pick[k] = k + 1;
  while (true) {
    out.push_back(pick);
    int k = int(p) - 1;
    while (k >= 0 && pick[k] == w - p + k + 1) --k;
    if (k < 0) break;
    ++pick[k];
    for (unsigned m = k + 1; m < p; ++m) pick[m] = pick[m - 1] + 1;
  }
  return out;
}

bool CoverReport::ok() const {
  return height_valid && union_matches &&
         std::all_of(subsets.begin(), subsets.end(), [](const SubsetReport& s) { return s.passed; });
}

CoverReport verify_cover(const Algebra& algebra, const CoverDescriptor& cover, const CoefficientRing& ring,
                         unsigned threads) {
  CoverReport report;
  const unsigned w = static_cast<unsigned>(cover.width());
  report.height_valid = cover.height >= 1 && cover.height <= w;
  std::set<std::uint32_t> uni;
  for (const auto& I : cover.ideals) uni.insert(I.basis.begin(), I.basis.end());
  report.union_matches = std::vector<std::uint32_t>(uni.begin(), uni.end()) == cover.target.basis;

  const unsigned h = std::min(cover.height, w);
  std::vector<std::vector<unsigned>> subsets;
  for (unsigned size = 1; size <= h; ++size)
    for (auto& S : subsets_of_size(w, size)) subsets.push_back(std::move(S));

  report.subsets.resize(subsets.size());
  auto work = [&](std::size_t idx) {
    SubsetReport& r = report.subsets[idx];
    r.members = subsets[idx];
    std::vector<LeftIdealSpan> family;
    for (auto m : r.members) family.push_back(cover.ideals[m - 1]);
    try {
      auto inter = intersect(algebra, family);
      r.tag = inter.tag;
      r.intersection_size = inter.size();
      r.outcome = synthesize(algebra, inter.tag, ring);
      r.passed = r.outcome.status != SynthesisStatus::Impossible;
      r.message = r.outcome.reason;
    } catch (const Error& e) {
      r.passed = false;
      r.message = e.what();
    }
  };
  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t idx = t; idx < subsets.size(); idx += threads) work(idx);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return report;
}

nlohmann::json element_to_json(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [i, c] : x.coeffs) out[algebra.diagram(i).to_string()] = ring.to_string(c);
  return out;
}

nlohmann::json to_json(const Algebra&, const RetractionStep& step) {
  nlohmann::json j = {{"kind", to_string(step.kind)}, {"diagram", step.diagram.to_string()}};
  switch (step.kind) {
    case RetractionStep::Kind::Mu:
    case RetractionStep::Kind::Nu: j["a"] = step.a; j["b"] = step.b; break;
    case RetractionStep::Kind::Omega: j["a"] = step.a; break;
    case RetractionStep::Kind::ScaledProjection: j["loops"] = step.loops; break;
  }
  return j;
}

nlohmann::json to_json(const Algebra& algebra, const IdempotentCertificate& cert, const CoefficientRing& ring) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& s : cert.chain) chain.push_back(to_json(algebra, s));
  return {{"algebra", algebra.id().to_string()},
          {"ring", ring.spec()},
          {"delta", ring.to_string(ring.delta())},
          {"ideal", cert.ideal.tag.to_string()},
          {"ideal_size", cert.ideal.size()},
          {"chain", chain},
          {"generator", element_to_json(algebra, cert.generator, ring)},
          {"checks", {"idempotent", "generator_in_ideal", "fixes_ideal", "left_multiples_in_ideal"}}};
}

nlohmann::json to_json(const Algebra& algebra, const SynthesisOutcome& outcome, const CoefficientRing& ring) {
  nlohmann::json j = {{"ideal", outcome.ideal.tag.to_string()},
                      {"ideal_size", outcome.ideal.size()},
                      {"zero", outcome.ideal.zero},
                      {"status", to_string(outcome.status)}};
  if (!outcome.reason.empty()) j["reason"] = outcome.reason;
  if (outcome.certificate) j["certificate"] = to_json(algebra, *outcome.certificate, ring);
  return j;
}

nlohmann::json to_json(const Algebra& algebra, const CoverReport& report, const CoefficientRing& ring) {
  nlohmann::json subsets = nlohmann::json::array();
  for (const auto& s : report.subsets) {
    nlohmann::json members = nlohmann::json::array();
    for (auto m : s.members) members.push_back(m);
    nlohmann::json j = {{"members", members},
                        {"ideal", s.tag.to_string()},
                        {"intersection_size", s.intersection_size},
                        {"status", s.passed ? "pass" : "fail"}};
    if (!s.message.empty()) j["message"] = s.message;
    if (s.passed || s.outcome.certificate) j["outcome"] = to_json(algebra, s.outcome, ring);
    subsets.push_back(j);
  }
  return {{"algebra", algebra.id().to_string()},
          {"ring", ring.spec()},
          {"height_valid", report.height_valid},
          {"union_matches", report.union_matches},
          {"subsets", subsets},
          {"overall", report.ok() ? "pass" : "fail"}};
}

}  // namespace diagtor
