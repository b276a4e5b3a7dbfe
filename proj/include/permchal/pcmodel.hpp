#pragma once

// Permutation-challenge games, the adversary contract, and the bound
// formulas. Every value the inner permutation sees is a slot in [0, n):
// residues mod n for the group games (the element n is slot 0) and the bit
// value a - 1 of a label a for the Even-Mansour games.

#include "permchal/permutation.hpp"
#include "permchal/random.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace permchal::pc {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An adversary broke its declared contract (advice length, query budget,
/// non-adaptivity, query domain).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Short tuple of slots: secrets, outer queries and answers.
struct Tuple {
  std::array<std::uint32_t, 4> v{};
  std::uint8_t size = 0;

  Tuple() = default;
  Tuple(std::initializer_list<std::uint32_t> values);

  std::uint32_t operator[](std::size_t i) const { return v[i]; }
  std::uint32_t& operator[](std::size_t i) { return v[i]; }
  auto operator<=>(const Tuple&) const = default;
  std::string str() const;
};

using Secret = Tuple;
using OuterQuery = Tuple;
using Answer = Tuple;

/// Cartesian product of [0, radix_i) minus the tuples rejected by exclude.
class TupleSpace {
 public:
  using Predicate = std::function<bool(const Tuple&)>;

  TupleSpace(std::vector<std::uint32_t> radices, Predicate exclude = {},
             std::uint64_t excludedCount = 0);

  const std::vector<std::uint32_t>& radices() const { return radices_; }
  std::uint64_t size() const { return total_ - excluded_; }
  bool contains(const Tuple& t) const;
  /// Uniform over the members.
  Tuple sample(Rng& rng) const;
  void forEach(const std::function<void(const Tuple&)>& visit) const;

 private:
  std::vector<std::uint32_t> radices_;
  Predicate exclude_;
  std::uint64_t total_;
  std::uint64_t excluded_;
};

enum class GameKind { Dlog, Ddh, SqDdh, EvenMansour, EvenMansourSingleKey };

std::string gameToken(GameKind kind);
GameKind parseGameKind(const std::string& token);
bool isGroupGame(GameKind kind);

struct PCGame {
  GameKind kind;
  std::uint32_t n;
  TupleSpace secrets;
  TupleSpace queries;
  std::function<std::uint32_t(const Secret&, const OuterQuery&)> translate;
  std::function<std::uint32_t(const Secret&, std::uint32_t)> postProcess;
  std::function<Answer(const Secret&)> successTarget;
  /// Number of distinct successTarget values, each hit equally often.
  std::uint64_t answerSpaceSize;
  bool allowInverseInner;
  bool trivialPost;
};

/// Group games need n prime; Even-Mansour games need n a power of two.
PCGame buildGame(GameKind kind, std::uint32_t n);

// ---------------------------------------------------------------------------

/// Advice string. Bits are appended and read back in fixed-width fields.
class BitString {
 public:
  void push(std::uint64_t value, int width);
  std::uint64_t read(std::size_t offset, int width) const;
  std::size_t size() const { return bits_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
};

struct InnerQuery {
  std::uint32_t point = 0;
  bool inverse = false;
};

struct QueryPlan {
  std::vector<InnerQuery> inner;
  std::vector<OuterQuery> outer;
};

struct OracleAnswers {
  std::vector<std::uint32_t> inner;
  std::vector<std::uint32_t> outer;
};

/// Accepts one query plan; a second submission is a contract violation.
class NonAdaptiveOracle {
 public:
  virtual ~NonAdaptiveOracle() = default;
  virtual OracleAnswers submit(const QueryPlan& plan) = 0;
};

/// Step-wise oracle for adaptive adversaries.
class AdaptiveOracle {
 public:
  virtual ~AdaptiveOracle() = default;
  virtual std::uint32_t inner(std::uint32_t point, bool inverse = false) = 0;
  virtual std::uint32_t outer(const OuterQuery& query) = 0;
  virtual std::uint64_t remaining() const = 0;
};

enum class Adaptivity { NonAdaptive, Adaptive };

/// Stateless across runs; per-run randomness arrives through the coins
/// argument so one instance can serve concurrent trials.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;
  virtual std::uint64_t sBits() const = 0;
  /// Upper bound on inner plus outer queries.
  virtual std::uint64_t tBudget() const = 0;
  virtual Adaptivity adaptivity() const { return Adaptivity::NonAdaptive; }

  virtual BitString preprocess(std::span<const std::uint32_t> sigma) const = 0;

  // Non-adaptive adversaries implement plan and decide; online glues them.
  virtual QueryPlan plan(const BitString& z, Rng& coins) const;
  virtual Answer decide(const BitString& z, const QueryPlan& plan,
                        const OracleAnswers& answers, Rng& coins) const;
  virtual Answer online(const BitString& z, NonAdaptiveOracle& oracle, Rng& coins) const;

  // Adaptive adversaries implement interact.
  virtual Answer interact(const BitString& z, AdaptiveOracle& oracle, Rng& coins) const;
};

struct GameTranscript {
  Permutation sigma;  // empty unless requested
  Secret secret;
  BitString advice;
  std::vector<InnerQuery> innerQueries;
  std::vector<OuterQuery> outerQueries;
  std::vector<std::uint32_t> innerAnswers;
  std::vector<std::uint32_t> outerAnswers;
  Answer output;
  bool success = false;
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
};

/// Uniform permutation of [0, n) by Fisher-Yates.
Permutation samplePermutation(std::uint32_t n, Rng& rng);

/// Runs preprocessing and the online phase. coinsSeed drives the
/// adversary's own randomness.
GameTranscript playGame(const PCGame& game, const Adversary& adv,
                        std::span<const std::uint32_t> sigma, const Secret& secret,
                        std::uint64_t coinsSeed = 0, bool keepSigma = true);

// ---------------------------------------------------------------------------

struct MidConstraints {
  std::vector<std::uint32_t> inputs;
  std::vector<std::uint32_t> outputs;

  /// Throws ValidationError on repeats or unequal lengths.
  void validate(std::uint32_t n) const;
};

using MidDecide = std::function<Answer(std::span<const std::uint32_t> outerAnswers)>;

/// sigma is sampled uniformly among permutations with sigma(I_j) = O_j and
/// the outer queries are answered from it.
GameTranscript playMidGame(const PCGame& game, const MidConstraints& constraints,
                           std::span<const OuterQuery> outerQueries, const MidDecide& decide,
                           const Secret& secret, std::uint64_t rngSeed);

struct MidSimulation {
  std::vector<std::uint32_t> responses;
  bool w1 = false;
  bool w2 = false;
};

/// Lazily sampled MID oracle with collision flags: w1 when a translated
/// query lands on a pinned input, w2 when a fresh value lands on a pinned
/// output and is resampled.
MidSimulation midSimulationOracle(const PCGame& game, const MidConstraints& constraints,
                                  std::span<const OuterQuery> outerQueries,
                                  const Secret& secret, std::uint64_t rngSeed);

/// Permutation pi with pi(observedO_i) = O_i, completed by matching the
/// remaining points in increasing order.
Permutation trivialPostReduction(const PCGame& game, const MidConstraints& constraints,
                                 std::span<const std::uint32_t> observedO);

// ---------------------------------------------------------------------------

struct Uniformity {
  double u = 0.0;
  OuterQuery worstQuery;
  std::uint32_t worstTarget = 0;
  std::uint64_t maxFiber = 0;
};

/// Exhaustive fiber count over secrets and queries.
Uniformity measureUniformity(const PCGame& game);

/// Uniformity used for bound evaluation at sizes too large to enumerate:
/// n for DLOG and Even-Mansour, n / 2 for DDH and sqDDH.
double analyticUniformity(GameKind kind, std::uint32_t n);

enum class Bound { General, Dlog, Ddh, EvenMansour, TrivialPost };

std::string boundToken(Bound bound);
Bound parseBound(const std::string& token);
Bound defaultBound(GameKind kind);
bool boundApplies(Bound bound, GameKind kind);

/// Success probability of the best T-query algorithm without preprocessing,
/// as plugged into the bounds: T^2/n (plus 1/2 for the decisional games),
/// never below the blind-guess probability.
double shoupMaxS(GameKind kind, double n, double t);

/// Bound value clamped to [0, 1]. u is only read by General and TrivialPost.
double evaluateBound(Bound bound, double n, double sBits, double t, double u, double maxS);

}  // namespace permchal::pc
