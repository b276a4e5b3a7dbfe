#include "doctest.h"

#include "permchal/attacks.hpp"
#include "permchal/numtheory.hpp"

#include <cmath>

using namespace permchal;
using namespace permchal::attacks;
using pc::GameKind;

namespace {

AttackConfig config(std::uint32_t n, std::uint64_t s, std::uint64_t t, std::uint64_t seed = 1) {
  AttackConfig c;
  c.n = n;
  c.sBits = s;
  c.tBudget = t;
  c.seed = seed;
  return c;
}

int successesOverSecrets(const pc::PCGame& game, const Adversary& adv, const Permutation& sigma) {
  int wins = 0;
  game.secrets.forEach([&](const pc::Secret& d) { wins += pc::playGame(game, adv, sigma, d).success; });
  return wins;
}

}  // namespace

TEST_SUITE("attacks") {
  TEST_CASE("bsgs solves every secret at n=101, m=11") {
    const auto game = pc::buildGame(GameKind::Dlog, 101);
    AttackConfig c = config(101, 2 * 11 * 7, 11);
    c.m = 11;
    const auto adv = bsgsAdversary(c);
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
      const Permutation sigma = pc::samplePermutation(101, rng);
      CHECK(successesOverSecrets(game, *adv, sigma) == 101);
    }
  }

  TEST_CASE("bsgs is exact for every prime up to 101") {
    Rng rng(11);
    for (std::uint32_t n = 2; n <= 101; ++n) {
      if (!nt::isPrime(n)) continue;
      const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      const int w = std::max(1, nt::ceilLog2(n));
      AttackConfig c = config(n, 2 * m * w, m);
      c.m = m;
      const auto game = pc::buildGame(GameKind::Dlog, n);
      const auto adv = bsgsAdversary(c);
      CAPTURE(n);
      CHECK(successesOverSecrets(game, *adv, pc::samplePermutation(n, rng)) == static_cast<int>(n));
    }
  }

  TEST_CASE("bsgs with one baby step covers a single secret") {
    const auto game = pc::buildGame(GameKind::Dlog, 5);
    AttackConfig c = config(5, 6, 1);
    c.m = 1;
    const auto adv = bsgsAdversary(c);
    for (const Permutation& sigma : allPermutations(5)) {
      REQUIRE(successesOverSecrets(game, *adv, sigma) == 1);
    }
  }

  TEST_CASE("bsgs decodes the matching giant step") {
    const auto game = pc::buildGame(GameKind::Dlog, 5);
    AttackConfig c = config(5, 18, 2);
    c.m = 3;
    const auto adv = bsgsAdversary(c);
    const auto tr = pc::playGame(game, *adv, identityPermutation(5), pc::Secret{3});
    CHECK(tr.output == pc::Answer{3});
    CHECK(tr.t2 == 2);
    CHECK(tr.advice.size() == 18);
  }

  TEST_CASE("bsgs rejects a table larger than the declared advice") {
    AttackConfig c = config(101, 100, 11);
    c.m = 11;
    CHECK_THROWS_AS(bsgsAdversary(c), pc::ValidationError);
  }

  TEST_CASE("pollard rho succeeds for every secret at n=5") {
    const auto game = pc::buildGame(GameKind::Dlog, 5);
    const auto adv = pollardRhoAdversary(config(5, 0, 25));
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      const Permutation sigma = pc::samplePermutation(5, rng);
      for (std::uint32_t d = 0; d < 5; ++d) {
        const auto tr = pc::playGame(game, *adv, sigma, pc::Secret{d}, mix64(rep * 5 + d));
        CHECK(tr.success);
        CHECK(tr.t1 + tr.t2 <= 25);
      }
    }
  }

  TEST_CASE("pollard rho at n=101 with 8 sqrt(n) steps") {
    const auto game = pc::buildGame(GameKind::Dlog, 101);
    const auto adv = pollardRhoAdversary(config(101, 0, 88));
    Rng rng(17);
    int wins = 0;
    const int trials = 2000;
    for (int i = 0; i < trials; ++i) {
      const Permutation sigma = pc::samplePermutation(101, rng);
      const pc::Secret d{static_cast<std::uint32_t>(rng.below(101))};
      wins += pc::playGame(game, *adv, sigma, d, rng.next(), false).success;
    }
    CHECK(static_cast<double>(wins) / trials >= 0.5);
  }

  TEST_CASE("chain attack without queries is a pure guess") {
    const auto game = pc::buildGame(GameKind::Dlog, 101);
    AttackConfig c = config(101, 14 * 10, 0);
    const auto adv = chainPreprocessingDlog(c);
    Rng rng(8);
    int wins = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
      const auto tr = pc::playGame(game, *adv, pc::samplePermutation(101, rng),
                                   pc::Secret{static_cast<std::uint32_t>(rng.below(101))}, rng.next(), false);
      REQUIRE(tr.t1 + tr.t2 == 0);
      wins += tr.success;
    }
    // 1/101 with a generous band
    CHECK(wins < 100);
  }

  TEST_CASE("chain attack at S T^2 = 8n") {
    const auto game = pc::buildGame(GameKind::Dlog, 1009);
    AttackConfig c = config(1009, 126 * 20, 8);
    const auto adv = chainPreprocessingDlog(c);
    Rng rng(21);
    int wins = 0;
    const int trials = 400;
    for (int i = 0; i < trials; ++i) {
      const auto tr = pc::playGame(game, *adv, pc::samplePermutation(1009, rng),
                                   pc::Secret{static_cast<std::uint32_t>(rng.below(1009))}, rng.next(), false);
      REQUIRE(tr.advice.size() <= c.sBits);
      wins += tr.success;
    }
    CHECK(static_cast<double>(wins) / trials >= 0.5);
  }

  TEST_CASE("daemen recovers planted keys with a full coset table") {
    for (GameKind kind : {GameKind::EvenMansour, GameKind::EvenMansourSingleKey}) {
      const auto game = pc::buildGame(kind, 1024);
      const auto adv = daemenEmAdversary(config(1024, 256 * 40, 4), kind);
      Rng rng(kind == GameKind::EvenMansour ? 1 : 2);
      int ambiguous = 0;
      for (int i = 0; i < 1000; ++i) {
        const Permutation sigma = pc::samplePermutation(1024, rng);
        const pc::Secret k = game.secrets.sample(rng);
        const auto tr = pc::playGame(game, *adv, sigma, k, rng.next(), false);
        REQUIRE(tr.t2 == 4);
        // When sigma XORs to zero on the probed coset, k1 and k1 ^ alpha ^ beta
        // explain the four answers equally well.
        const std::uint32_t u = tr.outerQueries[0][0] ^ k[0];
        const bool tie = (sigma[u] ^ sigma[u ^ 1] ^ sigma[u ^ 2] ^ sigma[u ^ 3]) == 0;
        if (tie && kind == GameKind::EvenMansour) {
          ++ambiguous;
          continue;
        }
        REQUIRE(tr.success);
      }
      CHECK(ambiguous <= 5);
    }
  }

  TEST_CASE("daemen success scales with table and query counts") {
    const auto game = pc::buildGame(GameKind::EvenMansour, 1024);
    auto rate = [&](std::uint64_t cosets, std::uint64_t groups) {
      const auto adv = daemenEmAdversary(config(1024, cosets * 40, 4 * groups));
      Rng rng(cosets * 1000 + groups);
      int wins = 0;
      for (int i = 0; i < 2000; ++i) {
        wins += pc::playGame(game, *adv, pc::samplePermutation(1024, rng), game.secrets.sample(rng), rng.next(),
                             false)
                    .success;
      }
      return wins / 2000.0;
    };
    const double small = rate(8, 8), large = rate(32, 8);
    // one coset hit among 256: 1 - (1 - L/256)^J
    CHECK(small == doctest::Approx(1 - std::pow(1 - 8.0 / 256, 8)).epsilon(0.5));
    CHECK(large > small);
  }

  TEST_CASE("daemen validates its parameters") {
    AttackConfig c = config(1024, 400, 30);
    c.alpha = 0;
    CHECK_THROWS_AS(daemenEmAdversary(c), pc::ValidationError);
    c.alpha = 3;
    c.beta = 3;
    CHECK_THROWS_AS(daemenEmAdversary(c), pc::ValidationError);
    CHECK_THROWS_AS(daemenEmAdversary(config(1000, 400, 30)), pc::ValidationError);
  }

  TEST_CASE("sqddh majority attack with singleton buckets") {
    const std::uint32_t n = 1021;
    const auto game = pc::buildGame(GameKind::SqDdh, n);
    AttackConfig c = config(n, std::uint64_t{n} * 16, 16);
    const auto adv = sqddhNonAdaptiveAdversary(c);
    Rng rng(4);
    int wins = 0;
    const int trials = 3000;
    for (int i = 0; i < trials; ++i) {
      const auto tr = pc::playGame(game, *adv, pc::samplePermutation(n, rng), game.secrets.sample(rng),
                                   rng.next(), false);
      REQUIRE(tr.advice.size() == c.sBits);
      REQUIRE(tr.t2 == 16);
      wins += tr.success;
    }
    // special pair found with probability about 1 - (15/16)^8, then always right when k = 1
    const double p = static_cast<double>(wins) / trials;
    CHECK(p > 0.55);
    CHECK(p < 0.65);
  }

  TEST_CASE("sqddh rejects more buckets than advice bits") {
    AttackConfig c = config(1021, 8, 16);
    c.buckets = 16;
    CHECK_THROWS_AS(sqddhNonAdaptiveAdversary(c), pc::ValidationError);
  }

  TEST_CASE("every attack respects its contract") {
    struct Case {
      std::string attack;
      GameKind kind;
      std::uint32_t n;
      std::uint64_t s, t;
    };
    const std::vector<Case> cases = {
        {"bsgs", GameKind::Dlog, 101, 70, 10},     {"rho", GameKind::Dlog, 101, 0, 40},
        {"chain", GameKind::Dlog, 101, 140, 5},    {"daemen", GameKind::EvenMansour, 64, 96, 14},
        {"daemen", GameKind::EvenMansourSingleKey, 64, 96, 12},
        {"sqddh", GameKind::SqDdh, 101, 32, 8},    {"guess", GameKind::Ddh, 13, 0, 0},
    };
    Rng rng(99);
    for (const auto& c : cases) {
      CAPTURE(c.attack);
      const auto game = pc::buildGame(c.kind, c.n);
      const auto adv = makeAdversary(c.attack, game, config(c.n, c.s, c.t));
      for (int i = 0; i < 200; ++i) {
        const auto tr = pc::playGame(game, *adv, pc::samplePermutation(c.n, rng), game.secrets.sample(rng),
                                     rng.next(), false);
        REQUIRE(tr.advice.size() <= adv->sBits());
        REQUIRE(tr.t1 + tr.t2 <= adv->tBudget());
      }
    }
  }

  TEST_CASE("guess adversary hits the answer space uniformly") {
    const auto game = pc::buildGame(GameKind::Dlog, 13);
    int wins = 0;
    Rng rng(6);
    const int trials = 13000;
    for (int i = 0; i < trials; ++i) {
      const auto adv = guessAdversary(game, config(13, 0, 0, i));
      wins += pc::playGame(game, *adv, pc::samplePermutation(13, rng), game.secrets.sample(rng), 0, false).success;
    }
    CHECK(wins == doctest::Approx(1000).epsilon(0.15));
  }

  TEST_CASE("makeAdversary checks names and games") {
    const auto dlog = pc::buildGame(GameKind::Dlog, 101);
    CHECK_THROWS_AS(makeAdversary("nope", dlog, config(101, 0, 0)), pc::ValidationError);
    CHECK_THROWS_AS(makeAdversary("daemen", dlog, config(101, 0, 0)), pc::ValidationError);
    CHECK_THROWS_AS(makeAdversary("bsgs", dlog, config(103, 70, 10)), pc::ValidationError);
    CHECK(attackNames().size() == 6);
  }

  TEST_CASE("mi multipliers") {
    const auto a = miMultipliers(1009, 60);
    REQUIRE(a.size() == 60);
    const std::uint64_t g = nt::primitiveRoot(1009);
    CHECK(g == 11);
    for (std::uint64_t i = 1; i <= 30; ++i) CHECK(nt::mulmod(a[i - 1], nt::powmod(g, i, 1009), 1009) == 1);
    CHECK(a[30] == nt::powmod(g, 60, 1009));
    CHECK(a[59] == nt::powmod(g, 1800 % 1008, 1009));
    CHECK_THROWS_AS(miMultipliers(1009, 1), pc::ValidationError);
    CHECK_THROWS_AS(miMultipliers(1000, 10), pc::ValidationError);
  }

  TEST_CASE("mi single instance") {
    AttackConfig c = config(1009, 0, 60, 3);
    c.instances = 1;
    const MiResult r = runMiGame(c);
    CHECK(r.instances == 1);
    CHECK(r.threshold == 1);
    CHECK(r.determinedFraction == 0.0);
    CHECK(r.allCorrect);
    c.forceGuesses = false;
    int correct = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      c.seed = s;
      correct += runMiGame(c).allCorrect;
    }
    CHECK(correct < 10);
  }

  TEST_CASE("mi determination by collisions") {
    AttackConfig c = config(1009, 0, 60);
    double total = 0;
    for (std::uint64_t s = 0; s < 40; ++s) {
      c.seed = s;
      const MiResult r = runMiGame(c);
      REQUIRE(r.instances == 4);
      REQUIRE(r.threshold == 2);
      if (r.determinedFraction == 1.0) CHECK(r.allCorrect);
      CHECK(r.windowCoverage <= 1.0);
      CHECK(r.intervalsCovered == (r.windowCoverage == 1.0));
      total += r.determinedFraction;
    }
    CHECK(total / 40 > 0.9);
  }
}
