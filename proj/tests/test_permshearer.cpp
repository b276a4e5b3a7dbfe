#include "doctest.h"

#include "permchal/permshearer.hpp"

#include <cmath>

using namespace permchal;
using namespace permchal::shearer;

TEST_SUITE("permshearer") {

TEST_CASE("bijection distribution validation") {
  CHECK_THROWS_AS(BijectionDistribution(3, Eigen::VectorXd::Constant(5, 0.2)), ValidationError);
  CHECK_THROWS_AS(BijectionDistribution(9, Eigen::VectorXd::Ones(1)), ValidationError);
  CHECK_THROWS_AS(BijectionDistribution(2, Eigen::Vector2d(0.5, 0.5), {4, 4}), ValidationError);
  Rng rng(1);
  const auto d = BijectionDistribution::dirichlet(4, rng);
  CHECK(d.mass().sum() == doctest::Approx(1.0));
  CHECK((d.mass().array() > 0.0).all());
}

TEST_CASE("cover multiplicity") {
  CoverFamily c(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(c.k() == 2);
  CHECK(CoverFamily(3, {{0}, {}, {0}}, 4).k() == 4);
  CHECK_THROWS_AS(CoverFamily(3, {{0, 1}, {0}}, 1), ValidationError);
  CHECK_THROWS_AS(CoverFamily(3, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(CoverFamily(3, {{1, 1}}), ValidationError);
  CHECK(CoverFamily::singletons(4).k() == 1);
}

TEST_CASE("marginals") {
  const auto u3 = BijectionDistribution::uniform(3);
  const auto pair = marginal(u3, {0, 1});
  REQUIRE(pair.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(pair[i] == doctest::Approx(1.0 / 6));

  const auto empty = marginal(u3, {});
  REQUIRE(empty.size() == 1);
  CHECK(empty.support()[0].empty());
  CHECK(empty[0] == 1.0);

  Rng rng(9);
  const auto p = BijectionDistribution::dirichlet(4, rng);
  const auto full = marginal(p, {0, 1, 2, 3});
  CHECK((full.mass() - p.mass()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(full.support() == p.toFinite().support());

  // Reordered coordinates give the transposed marginal.
  const auto ab = marginalMass(p, {0, 2});
  const auto ba = marginalMass(p, {2, 0});
  for (std::uint32_t x = 0; x < 4; ++x) {
    for (std::uint32_t y = 0; y < 4; ++y) {
      if (x == y) continue;
      const std::uint32_t xy[] = {x, y};
      const std::uint32_t yx[] = {y, x};
      CHECK(ab(rankInjectiveTuple(4, xy)) == doctest::Approx(ba(rankInjectiveTuple(4, yx))));
    }
  }
  CHECK_THROWS_AS(marginal(u3, {3}), ValidationError);

  const BijectionDistribution labelled(2, Eigen::Vector2d(0.25, 0.75), {10, 20});
  const auto first = marginal(labelled, {0});
  CHECK(first.support()[1] == info::Label{20});
  CHECK(first[1] == doctest::Approx(0.75));
}

TEST_CASE("bijection shearer reference values") {
  const auto singles2 = CoverFamily::singletons(2);
  CHECK(bijectionShearerGap(BijectionDistribution::pointMass(2, 0), singles2, 2.0) == 0.0);
  CHECK(bijectionShearerGap(BijectionDistribution::pointMass(3, 0), CoverFamily::singletons(3), 2.0) ==
        doctest::Approx(0.287682072451780927).epsilon(1e-13));
  CoverFamily any(4, {{0, 1}, {1, 2, 3}, {}});
  for (double c : {0.5, 2.0, 9.0}) {
    CHECK(bijectionShearerGap(BijectionDistribution::uniform(4), any, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("bijection shearer over random instances") {
  Rng rng(77);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto p = BijectionDistribution::dirichlet(n, rng);
      const double total = klToUniform(p);
      const auto cover = CoverFamily::random(n, 2 * n, rng);
      CHECK(bijectionShearerGap(p, cover, 2.0) >= -1e-9);
      CHECK(bijectionShearerGap(p, cover, 9.0) >= -1e-9);
      for (const auto& u : cover.sets()) {
        // Data processing: a marginal never carries more divergence.
        CHECK(info::klToUniform(marginalMass(p, u)) <= total + 1e-12);
      }
    }
  }
}

TEST_CASE("product shearer") {
  info::Axis bit{"", {0, 1}};
  auto axes = [&](int n) {
    std::vector<info::Axis> a;
    for (int i = 0; i < n; ++i) a.push_back({"x" + std::to_string(i), bit.values});
    return a;
  };
  const info::JointDistribution point(axes(2), Eigen::Vector4d(1, 0, 0, 0));
  CHECK(productShearerGap(point, CoverFamily::singletons(2)) == doctest::Approx(0.0).epsilon(1e-15));
  const info::JointDistribution flat(axes(2), Eigen::Vector4d::Constant(0.25));
  CHECK(productShearerGap(flat, CoverFamily::singletons(2)) == doctest::Approx(0.0));

  Rng rng(4);
  const CoverFamily triangle(3, {{0, 1}, {1, 2}, {0, 2}});
  REQUIRE(triangle.k() == 2);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd m(8);
    for (Eigen::Index i = 0; i < 8; ++i) m(i) = rng.exponential();
    const info::JointDistribution p(axes(3), m / m.sum());
    CHECK(productShearerGap(p, triangle) >= -1e-9);
  }
  CHECK_THROWS_AS(productShearerGap(point, CoverFamily::singletons(3)), ValidationError);
}

TEST_CASE("read-k concentration") {
  SUBCASE("single indicator at n = 2") {
    const auto fam = ReadKFamily::fromCallable(
        2, {{0}}, [](std::size_t, std::span<const std::uint32_t> x) { return x[0] == 0 ? 1.0 : 0.0; });
    CHECK(fam.k() == 1);
    CHECK(readKConcentrationGap(BijectionDistribution::pointMass(2, 0), fam) ==
          doctest::Approx(std::log(2.0)));
  }
  SUBCASE("uniform P") {
    Rng rng(8);
    const auto fam = ReadKFamily::random(4, 6, rng);
    CHECK(readKConcentrationGap(BijectionDistribution::uniform(4), fam) == doctest::Approx(0.0));
  }
  SUBCASE("fixed-point indicators at n = 4") {
    std::vector<IndexSet> deps{{0}, {1}, {2}, {3}};
    const auto fam = ReadKFamily::fromCallable(
        4, deps, [](std::size_t j, std::span<const std::uint32_t> x) { return x[0] == j ? 1.0 : 0.0; });
    Rng rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
      CHECK(readKConcentrationGap(BijectionDistribution::dirichlet(4, rng), fam) >= -1e-9);
    }
  }
  SUBCASE("random families") {
    Rng rng(13);
    for (int n = 2; n <= 5; ++n) {
      for (int trial = 0; trial < 50; ++trial) {
        const auto fam = ReadKFamily::random(n, 2 * n, rng);
        CHECK(readKConcentrationGap(BijectionDistribution::dirichlet(n, rng), fam) >= -1e-9);
      }
    }
  }
  SUBCASE("evaluate reads the dependency images") {
    const auto fam = ReadKFamily::fromCallable(
        3, {{2, 0}}, [](std::size_t, std::span<const std::uint32_t> x) { return x[0] * 0.25 + x[1] * 0.1; });
    CHECK(fam.evaluate(0, Permutation{1, 0, 2}) == doctest::Approx(0.6));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(ReadKFamily(2, {{{0}, Eigen::Vector2d(0.5, 1.5)}}), ValidationError);
    CHECK_THROWS_AS(ReadKFamily(2, {{{0}, Eigen::Vector3d(0.5, 0.5, 0.5)}}), ValidationError);
    CHECK_THROWS_AS(ReadKFamily(2, {{{0}, Eigen::Vector2d(0, 1)}, {{0}, Eigen::Vector2d(0, 1)}}, 1),
                    ValidationError);
  }
}

TEST_CASE("indicator vector variant") {
  const auto support = indicatorVectors(2);
  const auto point = FiniteDistribution::pointMass(support, 0);
  CHECK(indicatorShearerGap(point, CoverFamily::singletons(2)) ==
        doctest::Approx(7.0 * std::log(2.0)));
  CHECK(indicatorShearerGap(FiniteDistribution::uniform(indicatorVectors(5)),
                            CoverFamily(5, {{0, 1}, {2}})) == doctest::Approx(0.0));
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd m(4);
    for (Eigen::Index i = 0; i < 4; ++i) m(i) = rng.exponential();
    const FiniteDistribution p(indicatorVectors(4), m / m.sum());
    CoverFamily cover = CoverFamily::random(4, 3, rng);
    REQUIRE(cover.k() <= 3);
    CHECK(indicatorShearerGap(p, cover) >= -1e-9);
  }
  CHECK_THROWS_AS(indicatorShearerGap(FiniteDistribution::uniform(FiniteDistribution::range(2)),
                                      CoverFamily::singletons(2)),
                  ValidationError);
}

TEST_CASE("technical lemma") {
  const double flat[] = {1.0 / 8, 1.0 / 8};
  CHECK(technicalLemmaGap(8, flat) == doctest::Approx(0.0).epsilon(1e-12));
  const double skewed[] = {0.3, 0.05};
  CHECK(technicalLemmaGap(8, skewed) >= 0.0);

  Rng rng(100);
  std::vector<double> p(25);
  for (int trial = 0; trial < 10000; ++trial) {
    // First 25 coordinates of a Dirichlet(1) draw on 26 points, sometimes
    // shrunk toward the uniform value 1/n.
    double total = 0.0;
    std::vector<double> e(26);
    for (auto& x : e) total += (x = rng.exponential());
    const double shrink = rng.uniform();
    for (std::size_t i = 0; i < 25; ++i) {
      p[i] = shrink * e[i] / total + (1 - shrink) * 0.01;
    }
    CHECK(technicalLemmaGap(100, p) >= -1e-12);
  }

  const double tooMany[] = {0.1, 0.1, 0.1};
  CHECK_THROWS_AS(technicalLemmaGap(8, tooMany), ValidationError);
  const double outOfRange[] = {1.0};
  CHECK_THROWS_AS(technicalLemmaGap(8, outOfRange), ValidationError);
}

TEST_CASE("conditioning does not decrease divergence") {
  Rng rng(31);
  info::Axis x{"X", {0, 1, 2}};
  info::Axis y{"Y", {0, 1, 2}};
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::VectorXd pm(9), qx(3), qy(3);
    for (Eigen::Index i = 0; i < 9; ++i) pm(i) = rng.exponential();
    for (Eigen::Index i = 0; i < 3; ++i) {
      qx(i) = rng.exponential();
      qy(i) = rng.exponential();
    }
    qx /= qx.sum();
    qy /= qy.sum();
    Eigen::VectorXd qm(9);
    for (Eigen::Index i = 0; i < 3; ++i) qm.segment(i * 3, 3) = qx(i) * qy;
    const info::JointDistribution p({x, y}, pm / pm.sum());
    const info::JointDistribution q({x, y}, qm / qm.sum());
    CHECK(info::klDivergence(p.marginal({"Y"}).table(), q.marginal({"Y"}).table()) <=
          info::conditionalKl(p, q, {"Y"}, {"X"}) + 1e-10);
  }
}

TEST_CASE("extremal ratio") {
  const auto two = extremalRatioSearch(2, CoverFamily::singletons(2), 20, 1);
  CHECK(two.bestRatio == 2.0);
  CHECK(two.witness.mass().maxCoeff() == 1.0);

  const auto three = extremalRatioSearch(3, CoverFamily::singletons(3), 20, 1);
  CHECK(three.bestRatio >= 1.5 - 0.01);
  CHECK(three.bestRatio == doctest::Approx(1.83944157829637524).epsilon(1e-12));

  const auto four = extremalRatioSearch(4, CoverFamily::singletons(4), 10, 1);
  CHECK(four.bestRatio >= 4.0 / 3 - 0.01);
  CHECK(four.bestRatio <= 2.0 + 1e-12);

  CHECK(extremalRatioSearch(3, CoverFamily(3, {{}, {}}), 5, 1).bestRatio == 0.0);
  CHECK_THROWS_AS(extremalRatioSearch(7, CoverFamily::singletons(7), 1, 1), ValidationError);
}

}  // TEST_SUITE
