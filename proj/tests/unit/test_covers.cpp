#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagtor/covers.hpp"
#include "diagtor/errors.hpp"

using namespace diagtor;

namespace {

Algebra tabled(Family f, unsigned n) {
  Algebra a(f, n);
  return a.with_table(build_table(a));
}

std::set<unsigned> subset_of(unsigned mask, unsigned n) {
  std::set<unsigned> s;
  for (unsigned i = 0; i < n; ++i)
    if (mask >> i & 1) s.insert(i + 1);
  return s;
}

}  // namespace

TEST_CASE("partition ideals K and L") {
  Algebra p2(Family::Partition, 2);
  auto k1 = ideal_K(p2, 1);
  CHECK(k1.contains(*p2.index_of(SetPartition::parse("{1,2,2'}{1'}"))));
  CHECK_FALSE(k1.contains(p2.identity_index()));
  auto l12 = ideal_L(p2, 1, 2);
  CHECK(l12.size() == 5);
  CHECK_THROWS_AS(ideal_L(p2, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(ideal_K(p2, 3), InvalidArgument);
  CHECK_THROWS_AS(ideal_K(Algebra(Family::JonesAnnular, 2), 1), InvalidArgument);

  // i' singleton: partitions of the remaining 2n-1 vertices, B(5) = 52 for n = 3.
  Algebra p3 = tabled(Family::Partition, 3);
  CHECK(ideal_K(p3, 1).size() == 52);
  // i' ~ j': merge two vertices, B(5) = 52 again.
  CHECK(ideal_L(p3, 1, 3).size() == 52);

  for (unsigned n = 1; n <= 3; ++n) {
    Algebra p = tabled(Family::Partition, n);
    auto cover = standard_cover(p, 1);
    for (const auto& I : cover.ideals) {
      CHECK(is_left_closed(p, I));
      for (auto k : I.basis) CHECK(cover.target.contains(k));
    }
    CHECK(is_left_closed(p, cover.target));
  }
}

TEST_CASE("Jones ideals J") {
  Algebra j2(Family::JonesAnnular, 2);
  auto J1 = ideal_J(j2, 1);
  REQUIRE(J1.size() == 1);
  CHECK(j2.diagram(J1.basis[0]) == SetPartition::parse("{1,2}{1',2'}"));
  CHECK(ideal_J(j2, 2).basis == J1.basis);

  Algebra j3(Family::JonesAnnular, 3);
  std::vector<std::uint32_t> uni;
  std::set<std::uint32_t> u;
  for (unsigned i = 1; i <= 3; ++i)
    for (auto k : ideal_J(j3, i).basis) u.insert(k);
  CHECK(std::vector<std::uint32_t>(u.begin(), u.end()) == ideal_below_top(j3).basis);
  CHECK(ideal_below_top(j3).size() == 12 - 3);

  for (unsigned n = 2; n <= 6; ++n) {
    Algebra j = tabled(Family::JonesAnnular, n);
    auto cover = standard_cover(j, 1);
    for (const auto& I : cover.ideals) {
      CHECK(is_left_closed(j, I));
      for (auto k : I.basis) CHECK(cover.target.contains(k));
    }
  }
}

TEST_CASE("intersections agree with the closed-form criteria") {
  Algebra p2(Family::Partition, 2);
  CHECK(intersect(p2, {ideal_K(p2, 1), ideal_L(p2, 1, 2)}).zero);

  Algebra p3(Family::Partition, 3);
  auto cover = standard_cover(p3, 6);
  for (unsigned mask = 0; mask < (1u << cover.width()); ++mask) {
    std::vector<LeftIdealSpan> fam;
    for (unsigned k = 0; k < cover.width(); ++k)
      if (mask >> k & 1) fam.push_back(cover.ideals[k]);
    auto I = intersect(p3, fam);
    CHECK(I.zero == I.basis.empty());
  }

  Algebra j6(Family::JonesAnnular, 6);
  CHECK(intersect(j6, {ideal_J(j6, 1), ideal_J(j6, 2)}).zero);
  auto odd = intersect(j6, {ideal_J(j6, 1), ideal_J(j6, 3), ideal_J(j6, 5)});
  CHECK_FALSE(odd.zero);
  auto q = AnnularLinkState::from_arcs(6, {{1, 2}, {3, 4}, {5, 6}});
  REQUIRE(q.has_value());
  CHECK(odd.contains(*j6.index_of(build_annular(*q, *q, 0))));

  Algebra j2(Family::JonesAnnular, 2);
  CHECK(intersect(j2, {ideal_J(j2, 1), ideal_J(j2, 2)}).size() == 1);
  for (unsigned n = 3; n <= 8; ++n) {
    Algebra j(Family::JonesAnnular, n);
    std::vector<LeftIdealSpan> J;
    for (unsigned i = 1; i <= n; ++i) J.push_back(ideal_J(j, i));
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<LeftIdealSpan> fam;
      for (unsigned i = 0; i < n; ++i)
        if (mask >> i & 1) fam.push_back(J[i]);
      CHECK(intersect(j, fam).zero == !is_innermost(subset_of(mask, n), n));
    }
  }
}

TEST_CASE("innermost, moral support and pick_a") {
  std::set<unsigned> t{1, 3};
  CHECK(is_innermost(t, 6));
  CHECK(moral_support(t, 6) == std::set<unsigned>{1, 2, 3, 4});
  CHECK(pick_a(t, 6) == 3u);
  CHECK_FALSE(is_innermost({1, 2}, 6));
  CHECK_FALSE(is_innermost({1, 6}, 6));
  std::set<unsigned> odd{1, 3, 5, 7};
  CHECK(is_innermost(odd, 8));
  CHECK(moral_support(odd, 8).size() == 8);
  CHECK_FALSE(pick_a(odd, 8).has_value());
  CHECK_FALSE(pick_a({}, 5).has_value());
  // The picked a always lies in T and a+2 avoids MS(T).
  for (unsigned n = 3; n <= 9; ++n)
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      auto T = subset_of(mask, n);
      if (!is_innermost(T, n)) continue;
      auto a = pick_a(T, n);
      auto ms = moral_support(T, n);
      CHECK(a.has_value() == (ms.size() < n));
      if (!a) continue;
      CHECK(T.count(*a));
      CHECK_FALSE(ms.count((*a + 1) % n + 1));
    }
}

TEST_CASE("retraction elements") {
  CHECK(build_mu({}, {}, 1, 2, 4) == SetPartition::parse("{1'}{1,2,2'}{3,3'}{4,4'}", 4));
  CHECK(build_nu(1, 3, 3) == SetPartition::parse("{1,3,1',3'}{2,2'}", 3));
  CHECK(build_omega(3, 8) ==
        SetPartition::parse("{5,4}{3,5'}{4',3'}{6,6'}{7,7'}{8,8'}{1,1'}{2,2'}", 8));
  CHECK(in_family(Family::JonesAnnular, build_omega(3, 8)));
  CHECK(build_omega(7, 8) == SetPartition::parse("{1,8}{7,1'}{8',7'}{2,2'}{3,3'}{4,4'}{5,5'}{6,6'}", 8));
  CHECK_THROWS_AS(build_mu({1}, {}, 1, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(build_mu({1, 2}, {}, 3, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(build_mu({}, {}, 1, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(build_nu(2, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(build_omega(1, 2), InvalidArgument);
}

TEST_CASE("idempotent synthesis") {
  auto ring = CoefficientRing::integers(0);
  Algebra j4(Family::JonesAnnular, 4);
  auto out = synthesize_jones(j4, {1}, ring);
  REQUIRE(out.status == SynthesisStatus::Certified);
  REQUIRE(out.certificate->chain.size() == 1);
  CHECK(out.certificate->chain[0].a == 1);
  CHECK(out.certificate->generator == AlgebraElement::basis(j4.id(), *j4.index_of(build_omega(1, 4))));

  Algebra p3(Family::Partition, 3);
  auto k = synthesize_partition(p3, {1}, {}, ring);
  REQUIRE(k.status == SynthesisStatus::Certified);
  CHECK(k.certificate->chain.size() == 1);
  CHECK(k.certificate->chain[0].kind == RetractionStep::Kind::Mu);
  CHECK(k.certificate->chain[0].b == 2);
  CHECK(k.ideal.size() == 52);

  CHECK(synthesize_jones(j4, {1, 3}, ring).status == SynthesisStatus::Impossible);
  CHECK(synthesize_jones(j4, {1, 2}, ring).status == SynthesisStatus::Zero);
  CHECK(synthesize_partition(p3, {1, 2, 3}, {}, ring).status == SynthesisStatus::Impossible);
  CHECK(synthesize_partition(p3, {1}, {{1, 2}}, ring).status == SynthesisStatus::Zero);
  auto whole = synthesize_partition(p3, {}, {}, ring);
  REQUIRE(whole.status == SynthesisStatus::Certified);
  CHECK(whole.certificate->generator == AlgebraElement::basis(p3.id(), p3.identity_index()));

  // With delta a unit the obstructed case becomes a scaled projection.
  for (auto r : {CoefficientRing::integers(1), CoefficientRing::integers(-1), CoefficientRing::rationals(2),
                 CoefficientRing::prime_field(5, 3)}) {
    auto s = synthesize_jones(j4, {1, 3}, r);
    REQUIRE(s.status == SynthesisStatus::Certified);
    CHECK(s.certificate->chain[0].loops == 2);
  }
  CHECK(synthesize_jones(j4, {2, 4}, CoefficientRing::integers(2)).status == SynthesisStatus::Impossible);
  CHECK(synthesize_jones(Algebra(Family::JonesAnnular, 2), {1}, ring).status == SynthesisStatus::Impossible);
  CHECK(synthesize_jones(Algebra(Family::JonesAnnular, 2), {1, 2}, CoefficientRing::integers(1)).status ==
        SynthesisStatus::Certified);

  // Every nonzero intersection below the obstruction is certified.
  for (unsigned n = 3; n <= 6; ++n) {
    Algebra j(Family::JonesAnnular, n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      auto T = subset_of(mask, n);
      auto s = synthesize_jones(j, T, ring);
      bool obstructed = is_innermost(T, n) && moral_support(T, n).size() == n;
      CHECK((s.status == SynthesisStatus::Zero) == !is_innermost(T, n));
      CHECK((s.status == SynthesisStatus::Impossible) == obstructed);
    }
  }
  for (unsigned n = 1; n <= 3; ++n) {
    Algebra p(Family::Partition, n);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned i = 1; i <= n; ++i)
      for (unsigned j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
    for (unsigned sm = 0; sm < (1u << n); ++sm)
      for (unsigned tm = 0; tm < (1u << pairs.size()); ++tm) {
        auto S = subset_of(sm, n);
        PairSet T;
        for (unsigned k = 0; k < pairs.size(); ++k)
          if (tm >> k & 1) T.insert(pairs[k]);
        auto s = synthesize_partition(p, S, T, CoefficientRing::integers(3));
        if (S.size() == n && T.empty()) CHECK(s.status == SynthesisStatus::Impossible);
        else CHECK((s.status == SynthesisStatus::Zero) == s.ideal.zero);
      }
  }
}

TEST_CASE("certificate verification rejects wrong generators") {
  auto ring = CoefficientRing::integers(0);
  Algebra j4(Family::JonesAnnular, 4);
  auto out = synthesize_jones(j4, {1}, ring);
  auto bad = *out.certificate;
  bad.generator = AlgebraElement::basis(j4.id(), j4.identity_index());
  CHECK_THROWS_AS(verify_certificate(j4, bad, ring), VerificationFailure);
  bad.generator = scale(out.certificate->generator, 2, ring);
  CHECK_THROWS_AS(verify_certificate(j4, bad, ring), VerificationFailure);
}

TEST_CASE("standard covers") {
  auto ring = CoefficientRing::integers(0);
  Algebra p3(Family::Partition, 3);
  auto rp = verify_cover(p3, standard_cover(p3, 2), ring, 2);
  CHECK(rp.ok());
  CHECK(rp.subsets.size() == 6 + 15);

  Algebra j6(Family::JonesAnnular, 6);
  auto rj = verify_cover(j6, standard_cover(j6, 2), ring);
  CHECK(rj.ok());
  CHECK(rj.subsets.size() == 6 + 15);

  Algebra j5(Family::JonesAnnular, 5);
  auto r5 = verify_cover(j5, standard_cover(j5, 5), ring, 3);
  CHECK(r5.ok());
  CHECK(r5.subsets.size() == 31);

  // Height n/2 reaches the obstructed pair in J_4.
  Algebra j4(Family::JonesAnnular, 4);
  auto r4 = verify_cover(j4, standard_cover(j4, 2), ring);
  CHECK(r4.union_matches);
  CHECK_FALSE(r4.ok());
  CHECK(verify_cover(j4, standard_cover(j4, 2), CoefficientRing::integers(1)).ok());

  auto broken = standard_cover(p3, 1);
  broken.ideals.pop_back();
  CHECK_FALSE(verify_cover(p3, broken, ring).union_matches);
  CHECK_FALSE(verify_cover(p3, standard_cover(p3, 0), ring).height_valid);

  auto j = to_json(j6, rj, ring);
  CHECK(j["overall"] == "pass");
  CHECK(j["subsets"].size() == 21);
}

TEST_CASE("certificate json") {
  auto ring = CoefficientRing::integers(0);
  Algebra p3(Family::Partition, 3);
  auto s = synthesize_partition(p3, {2}, {{1, 3}}, ring);
  REQUIRE(s.status == SynthesisStatus::Certified);
  auto j = to_json(p3, s, ring);
  CHECK(j["status"] == "idempotent");
  auto chain = j["certificate"]["chain"];
  REQUIRE(chain.size() == 2);
  CHECK(chain[0]["kind"] == "nu");
  CHECK(chain[1]["kind"] == "mu");
  CHECK(chain[1]["a"] == 2);
  CHECK(chain[1]["b"] == 1);
  auto gen = j["certificate"]["generator"];
  REQUIRE(gen.size() == 1);
  CHECK(gen.begin().value() == "1");
}
