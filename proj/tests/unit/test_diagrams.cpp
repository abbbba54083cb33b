#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagtor/diagrams.hpp"
#include "diagtor/errors.hpp"

#include <random>
#include <set>

using namespace diagtor;

namespace {

std::uint64_t binom(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Brute-force annular test: draw vertices 1..n on the inner circle and
// 1'..n' on the outer one, and require every pairing to be realizable.
// Independent of the link-state machinery: a pairing is annular iff it is
// planar when the boundary is cut at some point between n and 1 on both
// circles after applying a common rotation shift to the top row.
bool annular_brute(const SetPartition& rho) {
  const unsigned n = rho.n();
  if (!rho.is_pairing()) return false;
  for (unsigned shift = 0; shift < n; ++shift) {
    // Relabel top row by the cyclic shift and test TL planarity.
    std::vector<unsigned> labels(2 * n);
    for (unsigned v = 0; v < n; ++v) labels[v] = rho.block_of(v);
    for (unsigned v = 0; v < n; ++v) labels[n + (v + shift) % n] = rho.block_of(n + v);
    auto shifted = SetPartition::from_labels(n, labels);
    for (unsigned cut = 0; cut < n; ++cut) {
      // rotate both rows by cut as well
      std::vector<unsigned> l2(2 * n);
      for (unsigned v = 0; v < n; ++v) {
        l2[(v + cut) % n] = shifted.block_of(v);
        l2[n + (v + cut) % n] = shifted.block_of(n + v);
      }
      if (is_temperley_lieb(SetPartition::from_labels(n, l2))) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("parse and print") {
  auto r = SetPartition::parse("{1,2'}{2,1'}");
  CHECK(r.n() == 2);
  CHECK(r.to_string() == "{1,2'}{2,1'}");
  CHECK(SetPartition::parse(r.to_string()) == r);
  CHECK_THROWS_AS(SetPartition::parse("{1,1}{2,1',2'}"), InvalidArgument);
  CHECK_THROWS_AS(SetPartition::parse("{1,2'}"), InvalidArgument);
}

TEST_CASE("basis sizes") {
  CHECK(enumerate_basis(Family::Partition, 1).size() == 2);
  CHECK(enumerate_basis(Family::Partition, 2).size() == 15);
  CHECK(enumerate_basis(Family::Partition, 3).size() == 203);
  CHECK(enumerate_basis(Family::Partition, 4).size() == 4140);
  CHECK(enumerate_basis(Family::Brauer, 3).size() == 15);
  CHECK(enumerate_basis(Family::Brauer, 4).size() == 105);
  CHECK(enumerate_basis(Family::TemperleyLieb, 3).size() == 5);
  CHECK(enumerate_basis(Family::TemperleyLieb, 4).size() == 14);
  CHECK(enumerate_basis(Family::TemperleyLieb, 5).size() == 42);
  CHECK(enumerate_basis(Family::GroupAlgebraSymmetric, 4).size() == 24);
  CHECK(enumerate_basis(Family::GroupAlgebraCyclic, 5).size() == 5);
  const std::size_t jones[] = {0, 1, 3, 12, 40, 180, 625, 2800, 9996};
  for (unsigned n = 1; n <= 8; ++n) CHECK(enumerate_basis(Family::JonesAnnular, n).size() == jones[n]);
}

TEST_CASE("link state counts") {
  CHECK(link_states(4, 2).size() == 4);
  CHECK(link_states(3, 2).empty());
  CHECK(link_states(4, 0).size() == 2);
  CHECK(link_states(6, 0).size() == 5);
  for (unsigned n = 1; n <= 8; ++n)
    for (unsigned t = (n % 2); t <= n; t += 2) {
      auto expected = t == 0 ? binom(n, n / 2) / (n / 2 + 1) : binom(n, (n - t) / 2);
      CHECK(link_states(n, t).size() == expected);
    }
}

TEST_CASE("annular basis agrees with brute force membership") {
  for (unsigned n = 1; n <= 5; ++n) {
    auto jones = enumerate_basis(Family::JonesAnnular, n);
    std::set<SetPartition> js(jones.begin(), jones.end());
    CHECK(js.size() == jones.size());
    for (const auto& b : enumerate_basis(Family::Brauer, n)) {
      bool brute = annular_brute(b);
      CHECK(brute == (js.count(b) == 1));
      CHECK(in_family(Family::JonesAnnular, b) == brute);
    }
  }
  // The transposition is a Brauer diagram but not annular.
  auto swap = SetPartition::parse("{1,2'}{2,1'}{3,3'}");
  CHECK(in_family(Family::Brauer, swap));
  CHECK_FALSE(in_family(Family::JonesAnnular, swap));
}

TEST_CASE("annular decomposition round trip") {
  for (unsigned n = 1; n <= 6; ++n) {
    for (const auto& d : enumerate_basis(Family::JonesAnnular, n)) {
      auto dec = decompose_annular(d);
      REQUIRE(dec.has_value());
      CHECK(build_annular(dec->bottom, dec->top, dec->rotation) == d);
    }
  }
  CHECK_FALSE(decompose_annular(SetPartition::parse("{1,2'}{2,1'}{3,3'}")).has_value());
}

TEST_CASE("composition with loops") {
  auto e = SetPartition::parse("{1,2}{1',2'}");
  auto c = compose(e, e);
  CHECK(c.underlying == e);
  CHECK(c.loops == 1);
  auto id = SetPartition::identity(2);
  CHECK(compose(id, e).underlying == e);
  CHECK(compose(e, id).loops == 0);
  CHECK(propagating_number(e) == 0);
  CHECK(propagating_number(id) == 2);
}

TEST_CASE("annular product example on eleven strands") {
  auto alpha = SetPartition::parse(
      "{1,11}{2,10}{4,5}{6,7}{3,7'}{8,1'}{9,4'}{5',6'}{2',3'}{8',11'}{9',10'}", 11);
  auto beta = SetPartition::parse(
      "{1,11}{2,10}{4,7}{5,6}{8,9}{3,1'}{4',5'}{2',3'}{6',11'}{7',8'}{9',10'}", 11);
  auto expected = SetPartition::parse(
      "{1,11}{2,10}{3,9}{4,5}{6,7}{8,1'}{2',3'}{4',5'}{6',11'}{7',8'}{9',10'}", 11);
  CHECK(in_family(Family::JonesAnnular, alpha));
  CHECK(in_family(Family::JonesAnnular, beta));
  auto c = compose(alpha, beta);
  CHECK(c.underlying == expected);
  CHECK(c.loops == 1);
  CHECK(propagating_number(alpha) == 3);
}

TEST_CASE("composition is associative") {
  auto check_all = [](Family f, unsigned n) {
    auto b = enumerate_basis(f, n);
    for (const auto& x : b)
      for (const auto& y : b)
        for (const auto& z : b) {
          auto xy = compose(x, y);
          auto l = compose(xy.underlying, z);
          auto yz = compose(y, z);
          auto r = compose(x, yz.underlying);
          CHECK(l.underlying == r.underlying);
          CHECK(l.loops + xy.loops == r.loops + yz.loops);
        }
  };
  check_all(Family::Partition, 2);
  check_all(Family::JonesAnnular, 3);
  std::mt19937 rng(7);
  for (auto [f, n] : {std::pair{Family::Partition, 3u}, std::pair{Family::JonesAnnular, 4u}}) {
    auto b = enumerate_basis(f, n);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto &x = b[pick(rng)], &y = b[pick(rng)], &z = b[pick(rng)];
      auto xy = compose(x, y);
      auto yz = compose(y, z);
      auto l = compose(xy.underlying, z);
      auto r = compose(x, yz.underlying);
      CHECK(l.underlying == r.underlying);
      CHECK(l.loops + xy.loops == r.loops + yz.loops);
    }
  }
}

TEST_CASE("families are closed and nested") {
  for (unsigned n = 1; n <= 4; ++n) {
    for (Family f : {Family::Brauer, Family::TemperleyLieb, Family::JonesAnnular}) {
      auto b = enumerate_basis(f, n);
      for (const auto& x : b) {
        CHECK(in_family(Family::Partition, x));
        CHECK(in_family(f, x));
        for (const auto& y : b) CHECK(in_family(f, compose(x, y).underlying));
      }
    }
    for (const auto& x : enumerate_basis(Family::TemperleyLieb, n)) CHECK(in_family(Family::JonesAnnular, x));
    for (const auto& x : enumerate_basis(Family::JonesAnnular, n)) CHECK(in_family(Family::Brauer, x));
  }
}

TEST_CASE("annular construction is injective") {
  for (unsigned n = 1; n <= 6; ++n) {
    std::set<SetPartition> seen;
    std::size_t count = 0;
    for (unsigned t = n % 2; t <= n; t += 2) {
      auto states = link_states(n, t);
      for (const auto& p : states)
        for (const auto& q : states)
          for (unsigned s = 0; s < std::max(t, 1u); ++s) {
            seen.insert(build_annular(p, q, s));
            ++count;
          }
    }
    CHECK(seen.size() == count);
  }
}

TEST_CASE("keys are injective") {
  auto b = enumerate_basis(Family::Partition, 3);
  std::set<std::uint64_t> keys;
  for (const auto& x : b) keys.insert(x.key());
  CHECK(keys.size() == b.size());
}
