#pragma once

// Reference adversaries for the permutation-challenge games and the
// multi-instance DLOG game.

#include "permchal/pcmodel.hpp"

#include <memory>
#include <string>
#include <vector>

namespace permchal::attacks {

using pc::Adversary;
using pc::GameKind;

struct AttackConfig {
  std::uint32_t n = 0;
  std::uint64_t sBits = 0;
  std::uint64_t tBudget = 0;
  std::uint64_t seed = 0;

  /// Baby steps for BSGS; 0 derives it from sBits.
  std::uint64_t m = 0;
  /// Daemen coset generators; both nonzero and distinct.
  std::uint32_t alpha = 1;
  std::uint32_t beta = 2;
  /// sqDDH bucket count; 0 uses sBits.
  std::uint64_t buckets = 0;
  /// Chain count for the adaptive DLOG demo; 0 derives it from sBits.
  std::uint64_t chains = 0;
  /// Multi-instance game.
  std::uint64_t instances = 0;
  bool forceGuesses = true;
  double thresholdConstant = 4.0;
};

/// Sorted table of (sigma(j), j) for j < m; giant steps (1, i m) for
/// i < tBudget. m defaults to sBits / (2 ceil(lg n)).
std::unique_ptr<Adversary> bsgsAdversary(const AttackConfig& cfg);

/// Floyd cycle-finding over the 3-way partition walk. Adaptive, no advice.
std::unique_ptr<Adversary> pollardRhoAdversary(const AttackConfig& cfg);

/// Random-walk chains with stored endpoints; online walk from the challenge.
/// Adaptive.
std::unique_ptr<Adversary> chainPreprocessingDlog(const AttackConfig& cfg);

/// Coset table attack on Even-Mansour (two-key, or single-key when kind is
/// EvenMansourSingleKey).
std::unique_ptr<Adversary> daemenEmAdversary(const AttackConfig& cfg,
                                             GameKind kind = GameKind::EvenMansour);

/// Majority-of-bucket distinguisher for sqDDH.
std::unique_ptr<Adversary> sqddhNonAdaptiveAdversary(const AttackConfig& cfg);

/// Outputs one fixed answer, drawn from the seed, without querying.
std::unique_ptr<Adversary> guessAdversary(const pc::PCGame& game, const AttackConfig& cfg);

/// Names accepted by makeAdversary.
std::vector<std::string> attackNames();
/// Adversary by name for the given game; throws ValidationError if the
/// attack does not play that game.
std::unique_ptr<Adversary> makeAdversary(const std::string& name, const pc::PCGame& game,
                                         const AttackConfig& cfg);

// ---------------------------------------------------------------------------

/// sigma is fixed for the whole run; the secrets are independent.
struct MiGameState {
  Permutation sigma;
  std::vector<std::uint32_t> instanceSecrets;
  std::uint64_t perInstanceQueries = 0;
  /// Encoding -> (instance, query index) for every answer seen so far.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> answersSoFar;
};

struct MiResult {
  bool allCorrect = false;
  /// Share of instances after the guessing threshold solved by a collision.
  double determinedFraction = 0.0;
  std::uint64_t threshold = 0;
  std::uint64_t instances = 0;
  /// Whether every window of T/2 consecutive exponents held a queried point
  /// once the threshold instances were played.
  bool intervalsCovered = false;
  /// Share of those windows holding a queried point.
  double windowCoverage = 0.0;
};

/// Query multipliers of the multi-instance adversary: g^{-i} for
/// i <= T/2, then g^{(i - T/2) T}.
std::vector<std::uint32_t> miMultipliers(std::uint32_t n, std::uint64_t t);

/// cfg.tBudget is the per-instance T; cfg.instances defaults to
/// 4 * ceil(n / T^2).
MiResult runMiGame(const AttackConfig& cfg);

}  // namespace permchal::attacks
