#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagtor/errors.hpp"
#include "diagtor/linalg.hpp"
#include "diagtor/mv.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace diagtor;

TEST_CASE("sign count") {
  CHECK(sign_count({2, 5, 7}, 2) == 0);
  CHECK(sign_count({2, 5, 7}, 5) == 1);
  CHECK(sign_count({2, 5, 7}, 7) == 2);
  CHECK_THROWS_AS(sign_count({2, 5, 7}, 3), InvalidArgument);
  // (-1)^{#(S-j,i)+#(S,j)} = -(-1)^{#(S-i,j)+#(S,i)} for i < j.
  for (unsigned w = 1; w <= 6; ++w)
    for (unsigned p = 2; p <= std::min(w, 5u); ++p)
      for (const auto& S : subsets_of_size(w, p))
        for (auto i : S)
          for (auto j : S) {
            if (i >= j) continue;
            auto minus = [&](unsigned x) {
              std::vector<unsigned> t;
              for (auto y : S)
                if (y != x) t.push_back(y);
              return t;
            };
            int lhs = (sign_count(minus(j), i) + sign_count(S, j)) % 2;
            int rhs = (sign_count(minus(i), j) + sign_count(S, i)) % 2;
            CHECK(lhs != rhs);
          }
}

TEST_CASE("Jones n = 4 summands and ranks") {
  Algebra j4(Family::JonesAnnular, 4);
  auto c = build_mv(j4, standard_cover(j4, 1), 4);
  CHECK(c.full());
  const auto& d2 = c.degree(2);
  REQUIRE(d2.summands.size() == 2);
  CHECK(d2.summands[0].subset == std::vector<unsigned>{1, 3});
  CHECK(d2.summands[1].subset == std::vector<unsigned>{2, 4});
  CHECK(c.degree(3).summands.empty());
  CHECK(c.rank(-1) == 4);
  CHECK(c.rank(0) == 40);
  CHECK(composes_to_zero(c));
  CHECK(simplex_decomposition_check(c));
  for (auto ring : {CoefficientRing::integers(0), CoefficientRing::prime_field(2, 0), CoefficientRing::rationals(0)})
    CHECK(check_acyclic(c, ring).acyclic);
}

TEST_CASE("rank bookkeeping on the partition algebra") {
  for (unsigned n = 1; n <= 3; ++n) {
    Algebra p(Family::Partition, n);
    auto cover = standard_cover(p, 1);
    auto c = build_mv(p, cover, static_cast<unsigned>(cover.width()));
    for (int q = 1; q <= c.max_degree; ++q) {
      std::size_t expected = 0;
      for (const auto& S : subsets_of_size(static_cast<unsigned>(cover.width()), static_cast<unsigned>(q))) {
        std::vector<LeftIdealSpan> fam;
        for (auto i : S) fam.push_back(cover.ideals[i - 1]);
        expected += intersect(p, fam).size();
      }
      CHECK(c.rank(q) == expected);
    }
    CHECK(composes_to_zero(c));
    CHECK(simplex_decomposition_check(c));
    if (n <= 2) CHECK(check_acyclic(c, CoefficientRing::integers()).acyclic);
  }
}

TEST_CASE("acyclicity of the Jones covers") {
  for (unsigned n = 3; n <= 6; ++n) {
    Algebra j(Family::JonesAnnular, n);
    auto c = build_mv(j, standard_cover(j, 1), n, 2);
    CHECK(composes_to_zero(c));
    CHECK(simplex_decomposition_check(c));
    auto r = check_acyclic(c, n <= 5 ? CoefficientRing::integers() : CoefficientRing::prime_field(3));
    CHECK(r.acyclic);
    CHECK(r.homology.size() == n + 2);
  }
  Algebra p3(Family::Partition, 3);
  CHECK(check_acyclic(build_mv(p3, standard_cover(p3, 1), 6), CoefficientRing::prime_field(2)).acyclic);
}

TEST_CASE("single ideal cover is a short exact sequence") {
  Algebra j3(Family::JonesAnnular, 3);
  CoverDescriptor c{j3.id(), {ideal_below_top(j3)}, ideal_below_top(j3), 1};
  auto mv = build_mv(j3, c, 1);
  CHECK(mv.rank(1) == mv.rank(0) - mv.rank(-1));
  CHECK(check_acyclic(mv, CoefficientRing::integers()).acyclic);
  CHECK(simplex_decomposition_check(mv));
}

TEST_CASE("truncation and failure detection") {
  Algebra j5(Family::JonesAnnular, 5);
  auto cover = standard_cover(j5, 2);
  auto t = build_mv(j5, cover, 2);
  CHECK(t.max_degree == 2);
  CHECK_FALSE(t.full());
  auto r = check_acyclic(t, CoefficientRing::integers());
  CHECK(r.acyclic);
  CHECK(r.homology.count(2) == 0);

  // Dropping an ideal breaks the cover identity: H_0 appears.
  auto broken = cover;
  broken.ideals.pop_back();
  auto b = build_mv(j5, broken, 4);
  CHECK(composes_to_zero(b));
  CHECK_FALSE(check_acyclic(b, CoefficientRing::integers()).acyclic);
  CHECK_FALSE(simplex_decomposition_check(b));
  CHECK_THROWS_AS(build_mv(j5, cover, 5, 1, 100), BudgetExceeded);
}

TEST_CASE("export round trip") {
  Algebra j4(Family::JonesAnnular, 4);
  auto c = build_mv(j4, standard_cover(j4, 1), 4);
  auto dir = std::filesystem::temp_directory_path() / ("diagtor-mv-" + std::to_string(::getpid()));
  export_mv(c, dir.string());
  for (int p = 0; p <= c.max_degree; ++p) {
    std::ifstream in(dir / ("d_" + std::to_string(p) + ".tri"));
    CHECK(read_triplets(in) == c.differentials[static_cast<std::size_t>(p)]);
  }
  std::ifstream in(dir / "manifest.json");
  auto m = nlohmann::json::parse(in);
  CHECK(m["degrees"][3]["summands"][0]["ideals"][1] == "J(3)");
  std::filesystem::remove_all(dir);

  std::istringstream bad("2 2 1\n0 5 1\n");
  CHECK_THROWS_AS(read_triplets(bad), InvalidArgument);
  std::istringstream trunc("2 2 2\n0 0 1\n");
  CHECK_THROWS_AS(read_triplets(trunc), InvalidArgument);
}
