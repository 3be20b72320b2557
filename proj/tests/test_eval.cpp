#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "wshr/error.hpp"
#include "wshr/eval.hpp"

using namespace wshr;

namespace {

struct Instance {
  ScoreMap scores;
  GroundTruthMask truth;
  std::vector<double> s;
  std::vector<int> l;
};

Instance random_instance(std::size_t n, std::uint64_t seed, double positive_rate = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in{ScoreMap(n, 1), GroundTruthMask(n, 1), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i < 2 || (i >= 4 && u(rng) < positive_rate);  // at least 2 of each
    in.truth.set(i, 0, pos);
    in.scores[i] = u(rng) + (pos ? 0.3 : 0.0);
    in.s.push_back(in.scores[i]);
    in.l.push_back(pos ? 1 : 0);
  }
  return in;
}

}  // namespace

TEST_CASE("roc: perfect detector passes through (0,1) with AUC 1") {
  GroundTruthMask t(6, 1, {1, 1, 0, 0, 0, 0});
  const ScoreMap s(6, 1, {0.9, 0.8, 0.3, 0.2, 0.1, 0.0});
  const auto c = roc(s, t);
  bool corner = false;
  for (const auto& p : c.points) corner = corner || (p.far == 0.0 && p.pd == 1.0);
  CHECK(corner);
  CHECK(auc(c) == 1.0);
}

TEST_CASE("roc: scores equal to labels give (0,0),(0,1),(1,1)") {
  GroundTruthMask t(5, 1, {0, 1, 0, 1, 0});
  const ScoreMap s(5, 1, {0.0, 1.0, 0.0, 1.0, 0.0});
  const auto c = roc(s, t);
  REQUIRE(c.points.size() == 3);
  CHECK(std::isinf(c.points[0].threshold));
  CHECK((c.points[0].far == 0.0 && c.points[0].pd == 0.0));
  CHECK((c.points[1].far == 0.0 && c.points[1].pd == 1.0));
  CHECK((c.points[2].far == 1.0 && c.points[2].pd == 1.0));
}

TEST_CASE("roc: 6-pixel hand case with ties matches the all-thresholds oracle") {
  const std::vector<double> s = {0.9, 0.4, 0.4, 0.7, 0.1, 0.4};
  const std::vector<int> l = {1, 0, 1, 0, 0, 1};
  GroundTruthMask t(3, 2, {1, 0, 1, 0, 0, 1});
  const auto c = roc(ScoreMap(3, 2, s), t);
  const auto ref = oracle::all_threshold_roc(s, l);
  REQUIRE(c.points.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(c.points[i].far == ref[i].first);
    CHECK(c.points[i].pd == ref[i].second);
  }
  // Hand values: thresholds inf, 0.9, 0.7, 0.4, 0.1.
  CHECK(c.points[3].far == doctest::Approx(2.0 / 3.0));
  CHECK(c.points[3].pd == 1.0);
  CHECK(std::abs(auc(c) - oracle::mann_whitney_auc(s, l)) < 1e-12);
}

TEST_CASE("auc: Mann-Whitney agreement, negation and monotone invariance") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = random_instance(60 + seed % 40, seed);
    const auto c = roc(in.scores, in.truth);
    const double a = auc(c);
    CHECK(std::abs(a - oracle::mann_whitney_auc(in.s, in.l)) < 1e-12);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      CHECK(c.points[i].far >= c.points[i - 1].far);
      CHECK(c.points[i].pd >= c.points[i - 1].pd);
    }
    CHECK(c.points.back().far == 1.0);
    CHECK(c.points.back().pd == 1.0);

    ScoreMap neg = in.scores, warped = in.scores;
    for (auto& v : neg.values()) v = -v;
    for (auto& v : warped.values()) v = std::exp(3.0 * v) + v * v * v;
    CHECK(std::abs(a + auc(roc(neg, in.truth)) - 1.0) < 1e-12);
    CHECK(std::abs(a - auc(roc(warped, in.truth))) < 1e-12);
  }
}

TEST_CASE("auc: random scores with balanced labels average 0.5") {
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(500 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScoreMap s(400, 1);
    GroundTruthMask t(400, 1);
    for (std::size_t i = 0; i < 400; ++i) {
      s[i] = u(rng);
      t.set(i, 0, i % 2 == 0);
    }
    mean += auc(roc(s, t)) / 20.0;
  }
  CHECK(std::abs(mean - 0.5) < 0.05);
}

TEST_CASE("roc: preconditions") {
  const ScoreMap s(3, 1, {0.1, 0.2, 0.3});
  CHECK_THROWS_AS(roc(s, GroundTruthMask(3, 1)), InvalidArgument);
  CHECK_THROWS_AS(roc(s, GroundTruthMask(3, 1, {1, 1, 1})), InvalidArgument);
  CHECK_THROWS_AS(roc(s, GroundTruthMask(2, 1, {1, 0})), DimensionError);
  const ScoreMap bad(3, 1, {0.1, std::nan(""), 0.3});
  CHECK_THROWS_AS(roc(bad, GroundTruthMask(3, 1, {1, 0, 0})), NumericError);
}

TEST_CASE("compare: sorted by AUC, identical maps tie, files written") {
  const auto in = random_instance(80, 3);
  ScoreMap perfect(80, 1), reversed(80, 1);
  for (std::size_t i = 0; i < 80; ++i) {
    perfect[i] = in.l[i];
    reversed[i] = -in.l[i];
  }
  const auto results = compare({{"rand", in.scores}, {"worst", reversed}, {"best", perfect}, {"copy", in.scores}},
                               in.truth);
  REQUIRE(results.size() == 4);
  CHECK(results[0].method == "best");
  CHECK(results[1].method == "copy");
  CHECK(results[2].method == "rand");
  CHECK(results[3].method == "worst");
  CHECK(results[1].auc == results[2].auc);
  CHECK(results[3].auc == 0.0);

  const auto dir = testutil::scratch_dir("compare");
  write_comparison(results, dir);
  const auto table = testutil::slurp(dir / "auc.csv");
  CHECK(table.rfind("method,auc\nbest,1\ncopy,", 0) == 0);
  for (const char* m : {"best", "copy", "rand", "worst"})
    CHECK(std::filesystem::exists(dir / (std::string("roc_") + m + ".csv")));
  CHECK(testutil::slurp(dir / "roc_best.csv").rfind("threshold,far,pd\ninf,0,0\n", 0) == 0);
  CHECK(testutil::slurp(dir / "roc.svg").find("<polyline") != std::string::npos);

  const auto again = testutil::scratch_dir("compare2");
  write_comparison(compare({{"rand", in.scores}, {"worst", reversed}, {"best", perfect}, {"copy", in.scores}},
                           in.truth),
                   again);
  CHECK(testutil::slurp(again / "auc.csv") == table);
  CHECK(testutil::slurp(again / "roc_rand.csv") == testutil::slurp(dir / "roc_rand.csv"));
}
