#include "doctest.h"

#include "permchal/infotheory.hpp"
#include "permchal/random.hpp"

#include <cmath>

using namespace permchal;
using namespace permchal::info;

namespace {

Eigen::VectorXd randomMass(Rng& rng, Eigen::Index k) {
  Eigen::VectorXd m(k);
  for (Eigen::Index i = 0; i < k; ++i) m(i) = rng.exponential();
  return m / m.sum();
}

Axis axis(const std::string& name, int size) {
  Axis a{name, {}};
  for (int i = 0; i < size; ++i) a.values.push_back(i);
  return a;
}

JointDistribution randomJoint(Rng& rng, int nx, int ny) {
  return {{axis("X", nx), axis("Y", ny)}, randomMass(rng, nx * ny)};
}

FiniteDistribution vec(std::initializer_list<double> m) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(m.size()));
  Eigen::Index i = 0;
  for (double x : m) v(i++) = x;
  return {FiniteDistribution::range(m.size()), v};
}

}  // namespace

TEST_SUITE("infotheory") {

TEST_CASE("entropy reference values") {
  CHECK(entropy(FiniteDistribution::uniform(FiniteDistribution::range(4))) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(entropy(FiniteDistribution::pointMass(FiniteDistribution::range(3), 1)) == 0.0);
  CHECK(entropy(vec({0.5, 0.25, 0.25})) == doctest::Approx(1.03972077083991796).epsilon(1e-14));
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(vec({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(vec({1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({{0}, {0}}, Eigen::Vector2d(0.5, 0.5)), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({{0}}, Eigen::Vector2d(0.5, 0.5)), ValidationError);
  CHECK_THROWS_AS(JointDistribution({axis("X", 2), axis("X", 2)}, Eigen::Vector4d::Constant(0.25)),
                  ValidationError);
  CHECK_THROWS_AS(JointDistribution({axis("X", 2), axis("Y", 3)}, Eigen::Vector4d::Constant(0.25)),
                  ValidationError);
}

TEST_CASE("conditional entropy") {
  SUBCASE("worked joint") {
    JointDistribution j({axis("X", 2), axis("Y", 2)}, Eigen::Vector4d(0.5, 0.25, 0.0, 0.25));
    CHECK(conditionalEntropy(j, {"X"}, {"Y"}) ==
          doctest::Approx(0.346573590279972655).epsilon(1e-14));
  }
  SUBCASE("independent uniform pair") {
    JointDistribution j({axis("X", 5), axis("Y", 5)}, Eigen::VectorXd::Constant(25, 1.0 / 25));
    CHECK(conditionalEntropy(j, {"X"}, {"Y"}) == doctest::Approx(std::log(5.0)));
  }
  SUBCASE("deterministic copy") {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(9);
    for (int i = 0; i < 3; ++i) m(i * 3 + i) = 1.0 / 3;
    JointDistribution j({axis("X", 3), axis("Y", 3)}, m);
    CHECK(conditionalEntropy(j, {"X"}, {"Y"}) == doctest::Approx(0.0));
    CHECK(mutualInformation(j, {"X"}, {"Y"}) == doctest::Approx(std::log(3.0)));
  }
  SUBCASE("errors") {
    JointDistribution j({axis("X", 2), axis("Y", 2)}, Eigen::Vector4d::Constant(0.25));
    CHECK_THROWS_AS(conditionalEntropy(j, {"X"}, {"X"}), ValidationError);
    CHECK_THROWS_AS(conditionalEntropy(j, {}, {"Y"}), ValidationError);
    CHECK_THROWS_AS(conditionalEntropy(j, {"Z"}, {"Y"}), ValidationError);
    CHECK_THROWS_AS(mutualInformation(j, {"X"}, {"X"}), ValidationError);
  }
}

TEST_CASE("kl divergence reference values") {
  const auto u2 = FiniteDistribution::uniform(FiniteDistribution::range(2));
  CHECK(klDivergence(u2, u2) == 0.0);
  CHECK(klDivergence(FiniteDistribution::pointMass(FiniteDistribution::range(2), 0), u2) ==
        doctest::Approx(std::log(2.0)));
  CHECK(klDivergence(vec({0.4, 0.6}), vec({0.5, 0.5})) ==
        doctest::Approx(0.0201355135506888734).epsilon(1e-13));
  CHECK(isInfinite(klDivergence(u2, FiniteDistribution::pointMass(FiniteDistribution::range(2), 0))));
  CHECK(klDivergence(u2, FiniteDistribution::pointMass(FiniteDistribution::range(2), 0)) > 1e300);
  FiniteDistribution swapped({{1}, {0}}, Eigen::Vector2d(0.5, 0.5));
  CHECK_THROWS_AS(klDivergence(u2, swapped), ValidationError);
}

TEST_CASE("klBernoulli") {
  CHECK(klBernoulli(0.3, 0.3) == 0.0);
  CHECK(klBernoulli(0.6, 0.5) == doctest::Approx(0.0201355135506888734).epsilon(1e-13));
  CHECK(klBernoulli(0.6, 0.5) >= 2 * 0.1 * 0.1);
  CHECK(klBernoulli(1.0, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(isInfinite(klBernoulli(0.5, 0.0)));
  CHECK(isInfinite(klBernoulli(0.5, 1.0)));
  CHECK(klBernoulli(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(klBernoulli(-0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(klBernoulli(0.5, 1.5), ValidationError);
}

TEST_CASE("conditional kl") {
  Rng rng(11);
  const auto p = randomJoint(rng, 2, 2);
  const auto q = randomJoint(rng, 2, 2);
  CHECK(conditionalKl(p, p, {"Y"}, {"X"}) == doctest::Approx(0.0));
  CHECK(conditionalKl(p, q, {"X"}, {}) ==
        doctest::Approx(klDivergence(p.marginal({"X"}).mass(), q.marginal({"X"}).mass())));
  // Chain rule on a random 2x2 joint.
  const double whole = klDivergence(p.table(), q.table());
  const double parts = klDivergence(p.marginal({"X"}).table(), q.marginal({"X"}).table()) +
                       conditionalKl(p, q, {"Y"}, {"X"});
  CHECK(whole == doctest::Approx(parts).epsilon(1e-12));

  JointDistribution zeroRow({axis("X", 2), axis("Y", 2)}, Eigen::Vector4d(0.5, 0.5, 0.0, 0.0));
  JointDistribution pinned({axis("X", 2), axis("Y", 2)}, Eigen::Vector4d(1.0, 0.0, 0.0, 0.0));
  CHECK(isInfinite(conditionalKl(zeroRow, pinned, {"Y"}, {"X"})));
  CHECK(conditionalKl(pinned, zeroRow, {"Y"}, {"X"}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("mutual information on random joints") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto j = randomJoint(rng, 3, 3);
    const double mi = mutualInformation(j, {"X"}, {"Y"});
    const double hx = entropy(j, {"X"});
    const double hy = entropy(j, {"Y"});
    CHECK(mi == doctest::Approx(hx - conditionalEntropy(j, {"X"}, {"Y"})).epsilon(1e-10));
    CHECK(mi == doctest::Approx(hy - conditionalEntropy(j, {"Y"}, {"X"})).epsilon(1e-10));
    CHECK(mi == doctest::Approx(hx + hy - entropy(j, {"X", "Y"})).epsilon(1e-10));
    CHECK(mi <= hx + 1e-12);
  }
  JointDistribution indep({axis("X", 2), axis("Y", 3)},
                          (Eigen::VectorXd(6) << 0.1, 0.1, 0.2, 0.15, 0.15, 0.3).finished());
  CHECK(mutualInformation(indep, {"X"}, {"Y"}) == doctest::Approx(0.0));
}

TEST_CASE("marginal ordering and three axes") {
  Rng rng(3);
  JointDistribution j({axis("A", 2), axis("B", 3), axis("C", 2)}, randomMass(rng, 12));
  const auto cb = j.marginal({"C", "B"});
  CHECK(cb.axes()[0].name == "C");
  // P(C = 1, B = 2) summed by hand.
  double expected = 0.0;
  for (int a = 0; a < 2; ++a) expected += j.mass()(a * 6 + 2 * 2 + 1);
  CHECK(cb.mass()(1 * 3 + 2) == doctest::Approx(expected));
  CHECK(entropy(j, {"A", "B", "C"}) ==
        doctest::Approx(entropy(j, {"A"}) + conditionalEntropy(j, {"B", "C"}, {"A"})));
}

TEST_CASE("properties over random distributions") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto j = randomJoint(rng, 3, 4);
    // Property (1) and (2).
    CHECK(entropy(j, {"X"}) >= conditionalEntropy(j, {"X"}, {"Y"}) - 1e-12);
    CHECK(entropy(j, {"X", "Y"}) ==
          doctest::Approx(entropy(j, {"X"}) + conditionalEntropy(j, {"Y"}, {"X"})).epsilon(1e-10));
    // Property (3).
    CHECK(entropy(j.table()) <= std::log(12.0) + 1e-12);

    const Eigen::VectorXd p = randomMass(rng, 6);
    const Eigen::VectorXd p2 = randomMass(rng, 6);
    const Eigen::VectorXd q = randomMass(rng, 6);
    const Eigen::VectorXd q2 = randomMass(rng, 6);
    CHECK(klDivergence(p, q) >= 0.0);
    // Property (5): joint convexity.
    for (int l = 1; l <= 9; ++l) {
      const double lambda = l / 10.0;
      const double lhs = klDivergence((lambda * p + (1 - lambda) * p2).eval(),
                                      (lambda * q + (1 - lambda) * q2).eval());
      CHECK(lhs <= lambda * klDivergence(p, q) + (1 - lambda) * klDivergence(p2, q2) + 1e-10);
    }
    // Property (6).
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(6, 1.0 / 6);
    CHECK(klDivergence(p, u) == doctest::Approx(entropy(u) - entropy(p)).epsilon(1e-10));
    CHECK(klToUniform(p) == doctest::Approx(klDivergence(p, u)).epsilon(1e-10));

    // Property (8) for a random function onto 3 values.
    std::vector<std::int64_t> f(6);
    for (auto& v : f) v = static_cast<std::int64_t>(rng.below(3));
    const FiniteDistribution pd(FiniteDistribution::range(6), p);
    const FiniteDistribution qd(FiniteDistribution::range(6), q);
    auto map = [&f](const Label& l) { return Label{f[static_cast<std::size_t>(l[0])]}; };
    CHECK(klDivergence(pd, qd) >= klDivergence(pushforward(pd, map), pushforward(qd, map)) - 1e-10);

    // Prop 2.3 with uniform Q.
    std::vector<double> g(6);
    for (auto& v : g) v = rng.uniform();
    double ep = 0.0, eq = 0.0;
    for (int i = 0; i < 6; ++i) {
      ep += p(i) * g[static_cast<std::size_t>(i)];
      eq += g[static_cast<std::size_t>(i)] / 6.0;
    }
    CHECK(klDivergence(p, u) >= klBernoulli(ep, eq) - 1e-10);
  }
}

TEST_CASE("mixture and projection") {
  const auto a = vec({1.0, 0.0});
  const auto b = vec({0.0, 1.0});
  CHECK(mixture(0.25, a, b)[0] == doctest::Approx(0.25));
  CHECK_THROWS_AS(mixture(1.5, a, b), ValidationError);

  FiniteDistribution pairs({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
  const std::size_t second[] = {1};
  const auto proj = project(pairs, second);
  REQUIRE(proj.size() == 2);
  CHECK(proj.support()[0] == Label{0});
  CHECK(proj[0] == doctest::Approx(0.4));
}

}  // TEST_SUITE
