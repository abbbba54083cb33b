#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagtor/algebra.hpp"
#include "diagtor/errors.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace diagtor;

namespace {

std::vector<CoefficientRing> rings() {
  return {CoefficientRing::integers(0), CoefficientRing::integers(2), CoefficientRing::integers(-3),
          CoefficientRing::rationals(Rational(1, 2)), CoefficientRing::prime_field(3, 1),
          CoefficientRing::prime_field(5, 0), CoefficientRing::modular(4, 2)};
}

AlgebraElement random_element(const Algebra& a, std::mt19937& rng, const CoefficientRing& ring) {
  std::uniform_int_distribution<std::uint32_t> pick(0, a.dim() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  AlgebraElement x = AlgebraElement::zero(a.id());
  for (int k = 0; k < 3; ++k) add_term(x, pick(rng), coeff(rng), ring);
  return x;
}

}  // namespace

TEST_CASE("unit and loop exponent") {
  Algebra p2(Family::Partition, 2);
  auto ring = CoefficientRing::integers(0);
  auto e = *p2.index_of(SetPartition::parse("{1,2}{1',2'}"));
  auto one = AlgebraElement::basis(p2.id(), p2.identity_index());
  auto ee = AlgebraElement::basis(p2.id(), e);
  CHECK(multiply(p2, ee, one, ring) == ee);
  CHECK(multiply(p2, one, ee, ring) == ee);
  CHECK(multiply(p2, ee, ee, ring).is_zero());
  auto ring2 = CoefficientRing::integers(5);
  CHECK(multiply(p2, ee, ee, ring2) == AlgebraElement::basis(p2.id(), e, 5));

  Algebra j2(Family::JonesAnnular, 2);
  auto ej = *j2.index_of(SetPartition::parse("{1,2}{1',2'}"));
  CHECK(multiply(j2, AlgebraElement::basis(j2.id(), ej), AlgebraElement::basis(j2.id(), ej), ring).is_zero());
  CHECK(augmentation(j2, AlgebraElement::basis(j2.id(), ej), ring) == 0);
  CHECK(augmentation(j2, AlgebraElement::basis(j2.id(), j2.identity_index()), ring) == 1);

  auto table = build_table(p2);
  CHECK(table->size() == 15);
  CHECK((*table)(e, e) == Product{e, 1});
}

TEST_CASE("cyclic group table") {
  for (unsigned n = 1; n <= 7; ++n) {
    Algebra c(Family::GroupAlgebraCyclic, n);
    auto t = build_table(c);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) CHECK((*t)(i, j) == Product{(i + j) % n, 0});
    CHECK(c.identity_index() == 0);
  }
  Algebra s(Family::GroupAlgebraSymmetric, 4);
  auto t = build_table(s);
  for (auto e : t->entries()) CHECK(e.loops == 0);
}

TEST_CASE("associative and unital over several rings") {
  auto exhaustive = [](Family f, unsigned n) {
    Algebra a = Algebra(f, n);
    a = a.with_table(build_table(a));
    for (std::uint32_t i = 0; i < a.dim(); ++i) {
      CHECK(a.product(i, a.identity_index()) == Product{i, 0});
      CHECK(a.product(a.identity_index(), i) == Product{i, 0});
      for (std::uint32_t j = 0; j < a.dim(); ++j)
        for (std::uint32_t k = 0; k < a.dim(); ++k) {
          auto ij = a.product(i, j), jk = a.product(j, k);
          auto l = a.product(ij.index, k), r = a.product(i, jk.index);
          CHECK(l.index == r.index);
          CHECK(l.loops + ij.loops == r.loops + jk.loops);
        }
    }
  };
  exhaustive(Family::Partition, 2);
  exhaustive(Family::TemperleyLieb, 3);
  exhaustive(Family::JonesAnnular, 3);

  std::mt19937 rng(11);
  for (auto [f, n] : {std::pair{Family::Partition, 3u}, std::pair{Family::JonesAnnular, 4u}}) {
    Algebra a(f, n);
    for (const auto& ring : rings()) {
      auto one = AlgebraElement::basis(a.id(), a.identity_index());
      for (int trial = 0; trial < 1000 / 7 + 1; ++trial) {
        auto x = random_element(a, rng, ring), y = random_element(a, rng, ring), z = random_element(a, rng, ring);
        CHECK(multiply(a, multiply(a, x, y, ring), z, ring) == multiply(a, x, multiply(a, y, z, ring), ring));
        CHECK(multiply(a, x, one, ring) == x);
        CHECK(multiply(a, one, x, ring) == x);
      }
    }
  }
}

TEST_CASE("augmentation and quotient are homomorphisms") {
  for (auto [f, n] : {std::pair{Family::Partition, 2u}, std::pair{Family::JonesAnnular, 3u},
                      std::pair{Family::Partition, 3u}, std::pair{Family::Brauer, 3u}}) {
    Algebra a(f, n);
    Algebra g(quotient_target(a.id()));
    for (std::uint32_t i = 0; i < a.dim(); ++i) {
      for (std::uint32_t j = 0; j < a.dim(); ++j) {
        auto p = a.product(i, j);
        bool full = a.is_full_propagation(i) && a.is_full_propagation(j);
        CHECK(a.is_full_propagation(p.index) == full);
        if (full) CHECK(p.loops == 0);
        auto qi = quotient_index(a, g, i), qj = quotient_index(a, g, j), qp = quotient_index(a, g, p.index);
        if (qi && qj) {
          REQUIRE(qp.has_value());
          CHECK(g.product(*qi, *qj).index == *qp);
        } else {
          CHECK_FALSE(qp.has_value());
        }
      }
    }
    for (const auto& ring : rings()) {
      std::mt19937 rng(3);
      for (int trial = 0; trial < 40; ++trial) {
        auto x = random_element(a, rng, ring), y = random_element(a, rng, ring);
        auto xy = multiply(a, x, y, ring);
        CHECK(augmentation(a, xy, ring) == ring.mul(augmentation(a, x, ring), augmentation(a, y, ring)));
        auto qx = quotient_map(a, g, x, ring);
        CHECK(quotient_map(a, g, xy, ring) == multiply(g, qx, quotient_map(a, g, y, ring), ring));
        CHECK(augmentation(g, qx, ring) == augmentation(a, x, ring));
      }
    }
  }
}

TEST_CASE("full propagation annular diagrams biject with the cyclic group") {
  for (unsigned n = 1; n <= 7; ++n) {
    Algebra j(Family::JonesAnnular, n);
    Algebra c(Family::GroupAlgebraCyclic, n);
    CHECK(j.full_propagation_indices().size() == n);
    std::set<std::uint32_t> image;
    for (auto i : j.full_propagation_indices()) image.insert(*quotient_index(j, c, i));
    CHECK(image.size() == n);
  }
  Algebra p(Family::Partition, 3);
  CHECK(p.full_propagation_indices().size() == 6);
}

TEST_CASE("mismatched algebras rejected") {
  Algebra a(Family::Partition, 2), b(Family::JonesAnnular, 2);
  auto ring = CoefficientRing::integers();
  auto x = AlgebraElement::basis(a.id(), 0);
  auto y = AlgebraElement::basis(b.id(), 0);
  CHECK_THROWS_AS(multiply(a, x, y, ring), DimensionMismatch);
  CHECK_THROWS_AS(build_table(Algebra(Family::Partition, 3), 1, 100), BudgetExceeded);
}

TEST_CASE("parallel table equals serial table") {
  Algebra a(Family::JonesAnnular, 4);
  CHECK(build_table(a, 1)->entries() == build_table(a, 3)->entries());
}

TEST_CASE("table cache round trip and integrity") {
  auto dir = std::filesystem::temp_directory_path() / ("diagtor-cache-test-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  Algebra a(Family::JonesAnnular, 3);
  auto cached = with_cached_table(a, dir.string());
  auto path = table_cache_path(a.id(), dir.string());
  REQUIRE(std::filesystem::exists(path));
  REQUIRE(std::filesystem::exists(path + ".json"));
  auto loaded = load_table(a, path);
  CHECK(loaded->entries() == build_table(a)->entries());
  CHECK_THROWS_AS(load_table(Algebra(Family::TemperleyLieb, 3), path), VerificationFailure);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('\x07');
  }
  CHECK_THROWS_AS(load_table(a, path), VerificationFailure);
  auto rebuilt = with_cached_table(a, dir.string());
  CHECK(load_table(a, path)->entries() == build_table(a)->entries());
  std::filesystem::remove_all(dir);
  CHECK(a.digest().size() == 64);
  CHECK(a.digest() != Algebra(Family::TemperleyLieb, 3).digest());
}
