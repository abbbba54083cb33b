#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagtor/errors.hpp"
#include "diagtor/torlab.hpp"

using namespace diagtor;

namespace {

HomologyGroup Z(std::size_t r, std::vector<int> torsion = {}) {
  HomologyGroup h;
  h.free_rank = r;
  for (int t : torsion) h.torsion.push_back(Integer(t));
  return h;
}

/// H_q(C_n; Z): Z, then Z/n in odd degrees, 0 in positive even degrees.
HomologyGroup cyclic_integral(unsigned n, unsigned q) {
  if (q == 0) return Z(1);
  if (q % 2 == 1 && n > 1) return Z(0, {static_cast<int>(n)});
  return Z(0);
}

}  // namespace

TEST_CASE("augmentation ideal basis and products") {
  Algebra tl(Family::TemperleyLieb, 2);
  AugmentationIdeal I(tl, CoefficientRing::integers(0));
  REQUIRE(I.dim() == 1);
  CHECK_FALSE(I.shifted(0));
  CHECK(I.product(0, 0).empty());
  AugmentationIdeal J(tl, CoefficientRing::integers(3));
  REQUIRE(J.product(0, 0).size() == 1);
  CHECK(J.product(0, 0)[0].value == 3);

  Algebra c3(Family::GroupAlgebraCyclic, 3);
  AugmentationIdeal G(c3, CoefficientRing::integers());
  CHECK(G.dim() == 2);
  CHECK(G.shifted(0));
  // (x - 1)(y - 1) = (xy - 1) - (x - 1) - (y - 1); the first term drops when xy = 1.
  for (std::uint32_t i = 0; i < 2; ++i)
    for (std::uint32_t j = 0; j < 2; ++j) {
      std::int64_t sum = 0;
      for (const auto& e : G.product(i, j)) sum += e.value;
      CHECK(sum == (i == j ? -1 : -2));
    }
  CHECK_THROWS_AS(AugmentationIdeal(tl, CoefficientRing::rationals(Rational(1, 2))), UnsupportedRing);
}

TEST_CASE("bar differential squares to zero") {
  for (auto ring : {CoefficientRing::integers(0), CoefficientRing::integers(2), CoefficientRing::prime_field(3, 1)}) {
    BarComplex b(Algebra(Family::JonesAnnular, 3), ring);
    for (unsigned q = 1; q <= 3; ++q) CHECK((b.differential(q) * b.differential(q + 1)).reduced(ring).is_zero());
  }
  BarComplex p(Algebra(Family::Partition, 2), CoefficientRing::integers(1));
  CHECK((p.differential(2) * p.differential(3)).is_zero());
  CHECK(p.rank(3) == 14u * 14u * 14u);
  BarComplex tiny(Algebra(Family::Partition, 2), CoefficientRing::integers(), 100);
  CHECK_THROWS_AS(tiny.require_budget(2), BudgetExceeded);
  CHECK_THROWS_AS(tor_bar(Algebra(Family::Partition, 2), CoefficientRing::integers(), 1, 100), BudgetExceeded);
}

TEST_CASE("Tor of small algebras") {
  // TL_2(0): e^2 = 0, so the bar complex has zero differential.
  auto tl0 = tor_bar(Algebra(Family::TemperleyLieb, 2), CoefficientRing::prime_field(2, 0), 5);
  for (const auto& h : tl0.groups) CHECK(h == Z(1));
  // TL_2(1): e is idempotent and Tor vanishes above degree 0.
  auto tl1 = tor_bar(Algebra(Family::TemperleyLieb, 2), CoefficientRing::integers(1), 5);
  CHECK(tl1.groups[0] == Z(1));
  for (unsigned q = 1; q <= 5; ++q) CHECK(tl1.groups[q].is_zero());
  // R C_2 over F_2 is one-dimensional in every degree.
  auto c2 = tor_bar(Algebra(Family::GroupAlgebraCyclic, 2), CoefficientRing::prime_field(2), 8);
  for (const auto& h : c2.groups) CHECK(h == Z(1));
}

TEST_CASE("cyclic group homology closed form") {
  for (unsigned n = 1; n <= 12; ++n) {
    auto h = group_homology_cyclic(n, CoefficientRing::integers(), 9);
    for (unsigned q = 0; q <= 9; ++q) CHECK(h[q] == cyclic_integral(n, q));
    auto f = group_homology_cyclic(n, CoefficientRing::prime_field(3), 9);
    for (unsigned q = 0; q <= 9; ++q) CHECK(f[q].free_rank == (q == 0 || n % 3 == 0 ? 1u : 0u));
  }
  // The bar complex of Z C_n agrees with the periodic resolution.
  for (unsigned n = 2; n <= 4; ++n) {
    auto bar = tor_bar(Algebra(Family::GroupAlgebraCyclic, n), CoefficientRing::integers(), 4);
    for (unsigned q = 0; q <= 4; ++q) CHECK(bar.groups[q] == cyclic_integral(n, q));
  }
}

TEST_CASE("symmetric group homology") {
  auto z = group_homology_symmetric(3, CoefficientRing::integers(), 3);
  CHECK(z[1] == Z(0, {2}));
  CHECK(z[2].is_zero());
  CHECK(z[3] == Z(0, {6}));
  auto f3 = group_homology_symmetric(3, CoefficientRing::prime_field(3), 3);
  CHECK(f3[1].is_zero());
  CHECK(f3[3].free_rank == 1);
  auto z4 = group_homology_symmetric(4, CoefficientRing::integers(), 1);
  CHECK(z4[1] == Z(0, {2}));
}

TEST_CASE("resolution agrees with the bar complex") {
  struct Case {
    Family family;
    unsigned n;
    CoefficientRing ring;
    unsigned q_max;
  };
  for (const auto& c : {Case{Family::JonesAnnular, 3, CoefficientRing::integers(0), 3},
                        Case{Family::JonesAnnular, 3, CoefficientRing::integers(2), 2},
                        Case{Family::JonesAnnular, 4, CoefficientRing::prime_field(2, 0), 2},
                        Case{Family::Partition, 2, CoefficientRing::integers(0), 2},
                        Case{Family::GroupAlgebraCyclic, 4, CoefficientRing::integers(), 4},
                        Case{Family::TemperleyLieb, 3, CoefficientRing::integers(0), 3}}) {
    Algebra a(c.family, c.n);
    auto bar = tor_bar(a, c.ring, c.q_max);
    auto res = tor_resolution(a, c.ring, c.q_max);
    CAPTURE(a.id().to_string());
    CHECK(bar.groups == res.groups);
  }
  // Jones with n odd: Tor matches the cyclic group.
  auto j3 = tor_resolution(Algebra(Family::JonesAnnular, 3), CoefficientRing::integers(0), 5);
  for (unsigned q = 0; q <= 5; ++q) CHECK(j3.groups[q] == cyclic_integral(3, q));
  auto z6 = tor_resolution(Algebra(Family::JonesAnnular, 3), CoefficientRing::modular(6, 0), 3);
  CHECK(z6.groups[1] == Z(0, {3}));
  CHECK(z6.groups[2] == Z(0, {3}));
  auto betti = minimal_resolution_betti(Algebra(Family::JonesAnnular, 3), CoefficientRing::prime_field(3, 0), 4);
  CHECK(betti == std::vector<std::size_t>{1, 1, 1, 1, 1});
}

TEST_CASE("resolution structure") {
  Algebra j3(Family::JonesAnnular, 3);
  FreeResolution f(j3, 0, 3);
  CHECK(f.generators(0) == 1);
  for (unsigned q = 1; q <= 3; ++q) {
    CHECK(f.generators(q) > 0);
    auto d = f.reduced_differential(q);
    CHECK(d.rows() == f.generators(q - 1));
    if (q >= 2) CHECK((f.reduced_differential(q - 1) * d).is_zero());
    // Each generator image is a cycle that lifts to its own basis vector.
    auto t = f.lift(q, f.generator(q, 0));
    REQUIRE(t);
  }
  CHECK_THROWS_AS(f.reduced_differential(4), InvalidArgument);
}

TEST_CASE("claims") {
  auto z = CoefficientRing::integers(0);
  AlgebraId p4{Family::Partition, 4};
  CHECK(theorem_claim(p4, z, 1) == Claim::Isomorphism);
  CHECK(theorem_claim(p4, z, 2) == Claim::Surjection);
  CHECK(theorem_claim(p4, z, 3) == Claim::None);
  AlgebraId j8{Family::JonesAnnular, 8};
  CHECK(theorem_claim(j8, z, 1) == Claim::Isomorphism);
  CHECK(theorem_claim(j8, z, 2) == Claim::Surjection);
  CHECK(theorem_claim(j8, z, 3) == Claim::None);
  CHECK(theorem_claim(j8, CoefficientRing::integers(-1), 7) == Claim::Isomorphism);
  CHECK(theorem_claim({Family::JonesAnnular, 5}, z, 9) == Claim::Isomorphism);
  CHECK(parse_theorem("jones-global") == Theorem::JonesGlobal);
  CHECK_THROWS_AS(parse_theorem("nope"), InvalidArgument);
  CHECK(parse_tor_method("resolution") == TorMethod::Resolution);
}

TEST_CASE("induced maps") {
  // P_2: surjection claimed at q = 0 only.
  auto p2 = induced_tor_map(Algebra(Family::Partition, 2), CoefficientRing::integers(0), 1);
  CHECK(p2.method == "bar");
  CHECK(p2.degrees[0].map.classification == MapClass::Isomorphism);
  CHECK(p2.pass());

  // J_3 is an isomorphism in every degree; both engines agree.
  TorOptions bar{TorMethod::Bar}, res{TorMethod::Resolution};
  auto a = induced_tor_map(Algebra(Family::JonesAnnular, 3), CoefficientRing::integers(0), 2, bar);
  auto b = induced_tor_map(Algebra(Family::JonesAnnular, 3), CoefficientRing::integers(0), 2, res);
  REQUIRE(a.degrees.size() == 3);
  for (unsigned q = 0; q <= 2; ++q) {
    CHECK(a.degrees[q].map.classification == MapClass::Isomorphism);
    CHECK(b.degrees[q].map.classification == MapClass::Isomorphism);
    CHECK(a.degrees[q].map.target == cyclic_integral(3, q));
  }
  CHECK(a.pass());
  CHECK(b.pass());

  // Bar quotient map is a chain map.
  BarComplex src(Algebra(Family::JonesAnnular, 3), CoefficientRing::integers(0));
  BarComplex tgt(Algebra(Family::GroupAlgebraCyclic, 3), CoefficientRing::integers(0));
  for (unsigned q = 2; q <= 3; ++q)
    CHECK(tgt.differential(q) * bar_quotient_map(src.ideal(), tgt.ideal(), q) ==
          bar_quotient_map(src.ideal(), tgt.ideal(), q - 1) * src.differential(q));
  // Functoriality: the quotient of a group algebra onto itself is the identity.
  for (unsigned n : {2u, 3u}) {
    AugmentationIdeal g(Algebra(Family::GroupAlgebraSymmetric, n), CoefficientRing::integers());
    for (unsigned q = 1; q <= 2; ++q) {
      auto f = bar_quotient_map(g, g, q);
      CHECK(f == SparseMatrix::identity(f.rows()));
    }
  }
  CHECK_THROWS_AS(induced_tor_map(Algebra(Family::TemperleyLieb, 3), CoefficientRing::integers(), 1),
                  InvalidArgument);
  CHECK_THROWS_AS(induced_tor_map(Algebra(Family::JonesAnnular, 3), CoefficientRing::modular(4), 1),
                  UnsupportedRing);
}

TEST_CASE("theorem verdicts") {
  auto v = verify_theorem(Theorem::Jones, 4, CoefficientRing::prime_field(2, 0), 1);
  CHECK(v.pass());
  auto s = verify_theorem(Theorem::JonesGlobal, 4, CoefficientRing::integers(0), 1);
  CHECK_FALSE(s.pass());
  CHECK(s.json["checks"][0]["status"] == "fail");
  auto m = verify_theorem(Theorem::MainPartition, 2, CoefficientRing::integers(0), 0);
  CHECK(m.pass());
  CHECK(to_json(tor_bar(Algebra(Family::GroupAlgebraCyclic, 2), CoefficientRing::integers(), 1),
                CoefficientRing::integers())["groups"][1]["text"] == "Z/2");
}
