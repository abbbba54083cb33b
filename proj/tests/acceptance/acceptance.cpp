// Acceptance suite: one PASS/FAIL line per criterion.
// Set DIAGTOR_EXTENDED=1 for the long opt-in runs (reported, never gating).

#include "diagtor/covers.hpp"
#include "diagtor/errors.hpp"
#include "diagtor/mv.hpp"
#include "diagtor/torlab.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace diagtor;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

HomologyGroup cyclic_oracle(unsigned n, unsigned q) {
  HomologyGroup h;
  if (q == 0)
    h.free_rank = 1;
  else if (q % 2 == 1 && n > 1)
    h.torsion.push_back(Integer(n));
  return h;
}

std::string classes(const InducedMapReport& r) {
  std::string s;
  for (const auto& d : r.degrees) s += (s.empty() ? "" : ",") + to_string(d.map.classification);
  return s;
}

bool all_iso(const InducedMapReport& r) {
  for (const auto& d : r.degrees)
    if (d.map.classification != MapClass::Isomorphism) return false;
  return true;
}

bool iso_then_surjection(const InducedMapReport& r) {
  return r.degrees.size() == 2 && r.degrees[0].map.classification == MapClass::Isomorphism &&
         r.degrees[1].map.classification != MapClass::Neither;
}

TorOptions resolution() { return {TorMethod::Resolution}; }

void criterion1(Outcome& o) {
  const auto Z = CoefficientRing::integers(0);
  Algebra j3(Family::JonesAnnular, 3), j5(Family::JonesAnnular, 5);
  auto bar3 = tor_bar(j3, Z, 5, 50'000'000);
  auto res3 = tor_resolution(j3, Z, 5);
  auto res5 = tor_resolution(j5, Z, 3);
  auto oracle3 = group_homology_cyclic(3, Z, 5), oracle5 = group_homology_cyclic(5, Z, 3);
  for (unsigned q = 0; q <= 5; ++q) {
    o.require(oracle3[q] == cyclic_oracle(3, q), "oracle C_3 at q=" + std::to_string(q));
    o.require(bar3.groups[q] == oracle3[q], "J_3 bar at q=" + std::to_string(q));
    o.require(res3.groups[q] == oracle3[q], "J_3 resolution at q=" + std::to_string(q));
  }
  for (unsigned q = 0; q <= 3; ++q) o.require(res5.groups[q] == oracle5[q], "J_5 at q=" + std::to_string(q));
  auto m3 = induced_tor_map(j3, Z, 5, resolution());
  auto m5 = induced_tor_map(j5, Z, 3, resolution());
  o.require(all_iso(m3), "J_3 induced map");
  o.require(all_iso(m5), "J_5 induced map");
  o.detail << "J_3 Tor_0..5 = ";
  for (const auto& h : bar3.groups) o.detail << h.to_string(Z) << ";";
  o.detail << " J_5 Tor_0..3 = ";
  for (const auto& h : res5.groups) o.detail << h.to_string(Z) << ";";
  o.detail << " maps all isomorphisms";
}

void criterion2(Outcome& o) {
  const auto F2 = CoefficientRing::prime_field(2, 1);
  Algebra j4(Family::JonesAnnular, 4);
  auto bar = tor_bar(j4, F2, 3);
  auto m = induced_tor_map(j4, F2, 3);
  for (unsigned q = 0; q <= 3; ++q) {
    o.require(bar.groups[q].free_rank == 1, "dim Tor_" + std::to_string(q) + " = 1");
    o.require(m.degrees[q].map.source == bar.groups[q], "bar and resolution agree at q=" + std::to_string(q));
  }
  o.require(all_iso(m), "induced map isomorphism");
  o.detail << "J_4(1) over F_2: dims 1,1,1,1; maps " << classes(m);
}

void criterion3(Outcome& o) {
  Algebra j6(Family::JonesAnnular, 6);
  for (std::uint32_t p : {2u, 3u}) {
    const auto F = CoefficientRing::prime_field(p, 0);
    auto m = induced_tor_map(j6, F, 1);
    auto bar = tor_bar(j6, F, 1);
    o.require(iso_then_surjection(m) && m.pass(), "J_6 over F_" + std::to_string(p));
    for (unsigned q = 0; q <= 1; ++q) o.require(bar.groups[q] == m.degrees[q].map.source, "bar cross-check");
    o.detail << " F_" << p << ": " << classes(m) << " (Tor_1 = " << bar.groups[1].to_string(F) << ")";
  }
  if (std::getenv("DIAGTOR_EXTENDED")) {
    try {
      auto m = induced_tor_map(Algebra(Family::JonesAnnular, 8), CoefficientRing::prime_field(2, 0), 1);
      o.detail << "; extended J_8 over F_2: " << classes(m);
    } catch (const Error& e) {
      o.detail << "; extended J_8 not completed: " << e.what();
    }
  }
}

void criterion4(Outcome& o) {
  Algebra p3(Family::Partition, 3);
  for (int delta : {0, 1})
    for (auto ring : {CoefficientRing::prime_field(2, delta), CoefficientRing::prime_field(3, delta),
                      CoefficientRing::integers(delta)}) {
      auto m = induced_tor_map(p3, ring, 1);
      o.require(iso_then_surjection(m) && m.pass(), "P_3 over " + ring.spec() + " delta " + std::to_string(delta));
      o.detail << " " << ring.spec() << "/" << delta << ": " << classes(m) << ";";
    }
  if (std::getenv("DIAGTOR_EXTENDED")) {
    try {
      auto m = induced_tor_map(Algebra(Family::Partition, 4), CoefficientRing::prime_field(2, 0), 2, resolution());
      o.detail << " extended P_4 over F_2: " << classes(m);
    } catch (const Error& e) {
      o.detail << " extended P_4 not completed: " << e.what();
    }
  }
}

struct AuditCase {
  Family family;
  unsigned n;
  unsigned height;
};

std::vector<AuditCase> audit_cases() {
  std::vector<AuditCase> cases{{Family::Partition, 2, 1}, {Family::Partition, 3, 2}};
  for (unsigned n = 3; n <= 8; ++n) cases.push_back({Family::JonesAnnular, n, n % 2 == 1 ? n : n / 2 - 1});
  return cases;
}

Algebra tabled(const Algebra& a) {
  const std::size_t cells = static_cast<std::size_t>(a.dim()) * a.dim();
  return cells <= 50'000'000 ? a.with_table(build_table(a)) : a;
}

void criterion5(Outcome& o) {
  const auto Z = CoefficientRing::integers(0);
  std::size_t subsets = 0, certified = 0;
  for (const auto& c : audit_cases()) {
    Algebra a = tabled(Algebra(c.family, c.n));
    auto cover = standard_cover(a, c.height);
    auto r = verify_cover(a, cover, Z);
    const std::string name = a.id().to_string();
    o.require(r.height_valid, name + " height");
    o.require(r.union_matches, name + " union equals the ideal below the top");
    for (const auto& s : r.subsets) {
      ++subsets;
      if (s.outcome.status == SynthesisStatus::Certified) ++certified;
      o.require(s.passed, name + " subset " + s.tag.to_string());
    }
  }
  o.detail << subsets << " subsets over P_2, P_3, J_3..J_8; " << certified << " certified idempotents, the rest zero";
}

void criterion6(Outcome& o) {
  const auto Z = CoefficientRing::integers();
  for (const auto& c : audit_cases()) {
    Algebra a = tabled(Algebra(c.family, c.n));
    auto cover = standard_cover(a, c.height);
    auto mv = build_mv(a, cover, static_cast<unsigned>(cover.width()));
    const std::string name = a.id().to_string();
    o.require(composes_to_zero(mv), name + " d^2 = 0");
    o.require(check_acyclic(mv, Z).acyclic, name + " acyclic over Z");
    o.require(simplex_decomposition_check(mv), name + " simplex decomposition");
    o.detail << " " << name << "(w=" << cover.width() << ")";
  }
  o.detail << ": d^2 = 0, acyclic over Z, simplex check";
}

void criterion7(Outcome& o) {
  std::size_t runs = 0;
  for (auto [f, n] : {std::pair{Family::TemperleyLieb, 2u}, std::pair{Family::TemperleyLieb, 3u},
                      std::pair{Family::JonesAnnular, 2u}, std::pair{Family::JonesAnnular, 3u},
                      std::pair{Family::JonesAnnular, 4u}, std::pair{Family::Partition, 2u}}) {
    Algebra a(f, n);
    for (std::uint32_t p : {2u, 3u})
      for (int delta : {0, 1}) {
        const auto F = CoefficientRing::prime_field(p, delta);
        auto bar = tor_bar(a, F, 3);
        auto betti = minimal_resolution_betti(a, F, 3);
        for (unsigned q = 0; q <= 3; ++q)
          o.require(bar.groups[q].free_rank == betti[q],
                    a.id().to_string() + " over " + F.spec() + " delta " + std::to_string(delta));
        ++runs;
      }
  }
  for (unsigned n = 1; n <= 12; ++n) {
    auto h = group_homology_cyclic(n, CoefficientRing::integers(), 9);
    for (unsigned q = 0; q <= 9; ++q) o.require(h[q] == cyclic_oracle(n, q), "cyclic closed form");
  }
  for (unsigned n = 2; n <= 4; ++n) {
    auto h = group_homology_symmetric(n, CoefficientRing::integers(), 1);
    HomologyGroup z2;
    z2.torsion.push_back(Integer(2));
    o.require(h[1] == z2, "H_1(Sigma_" + std::to_string(n) + ")");
  }
  o.detail << runs << " bar/resolution comparisons at q<=3; C_n closed form n<=12, q<=9; H_1(Sigma_n;Z)=Z/2, n=2..4";
}

void criterion8(Outcome& o) {
  // Associativity with loop bookkeeping.
  auto assoc = [](const SetPartition& x, const SetPartition& y, const SetPartition& z) {
    auto xy = compose(x, y), yz = compose(y, z);
    auto l = compose(xy.underlying, z), r = compose(x, yz.underlying);
    return l.underlying == r.underlying && l.loops + xy.loops == r.loops + yz.loops;
  };
  std::size_t triples = 0, bad = 0;
  for (auto [f, n] : {std::pair{Family::Partition, 2u}, std::pair{Family::JonesAnnular, 3u}}) {
    auto b = enumerate_basis(f, n);
    for (const auto& x : b)
      for (const auto& y : b)
        for (const auto& z : b) {
          ++triples;
          if (!assoc(x, y, z)) ++bad;
        }
  }
  std::mt19937 rng(20261016);
  for (auto [f, n] : {std::pair{Family::Partition, 3u}, std::pair{Family::JonesAnnular, 4u}}) {
    auto b = enumerate_basis(f, n);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    for (int t = 0; t < 1000; ++t) {
      ++triples;
      if (!assoc(b[pick(rng)], b[pick(rng)], b[pick(rng)])) ++bad;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " non-associative triples");

  // Annular build/decompose round trip, both directions.
  std::size_t round = 0;
  for (unsigned n = 1; n <= 5; ++n) {
    for (const auto& d : enumerate_basis(Family::JonesAnnular, n)) {
      auto dec = decompose_annular(d);
      ++round;
      o.require(dec && build_annular(dec->bottom, dec->top, dec->rotation) == d, "decompose then build");
    }
    for (unsigned t = n % 2; t <= n; t += 2)
      for (const auto& p : link_states(n, t))
        for (const auto& q : link_states(n, t))
          for (unsigned s = 0; s < std::max(t, 1u); ++s) {
            auto dec = decompose_annular(build_annular(p, q, s));
            ++round;
            o.require(dec && dec->bottom == p && dec->top == q && dec->rotation == s, "build then decompose");
          }
  }

  // Innermost sets versus nonzero intersections, every nonempty T.
  std::size_t sets = 0;
  std::vector<std::string> mismatches;
  for (unsigned n = 2; n <= 8; ++n) {
    Algebra j(Family::JonesAnnular, n);
    std::vector<LeftIdealSpan> J;
    for (unsigned i = 1; i <= n; ++i) J.push_back(ideal_J(j, i));
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::set<unsigned> T;
      std::vector<LeftIdealSpan> fam;
      for (unsigned i = 1; i <= n; ++i)
        if (mask & (1u << (i - 1))) {
          T.insert(i);
          fam.push_back(J[i - 1]);
        }
      ++sets;
      const bool nonzero = intersect(j, fam).size() > 0;
      if (nonzero != is_innermost(T, n)) {
        std::string s = "n=" + std::to_string(n) + " T={";
        for (auto i : T) s += std::to_string(i) + (i == *T.rbegin() ? "" : ",");
        mismatches.push_back(s + "} nonzero=" + (nonzero ? "yes" : "no"));
      }
    }
  }
  for (const auto& m : mismatches) o.require(false, "innermost mismatch " + m);
  o.detail << triples << " associativity triples; " << round << " annular round trips; " << sets
           << " subsets T for 2<=n<=8";
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"Jones odd n: Tor over Z equals H_*(C_n) and the map is an isomorphism", criterion1},
      {"Jones invertible delta: J_4(1) over F_2, q<=3", criterion2},
      {"Jones range: J_6(0) over F_2, F_3, iso at 0 and onto at 1", criterion3},
      {"Partition range: P_3 over F_2, F_3, Z with delta 0, 1", criterion4},
      {"Cover and idempotent audits", criterion5},
      {"Mayer-Vietoris complexes", criterion6},
      {"Oracle cross-validation", criterion7},
      {"Combinatorial property suites", criterion8},
  };
  int failures = 0;
  std::set<std::size_t> only;
  for (int k = 1; k < argc; ++k) only.insert(std::stoul(argv[k]));
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures += std::string(" [exception: ") + e.what() + "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " - " << criteria[i].first << " | "
              << o.detail.str() << o.failures << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
