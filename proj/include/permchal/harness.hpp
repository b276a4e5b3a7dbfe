#pragma once

// Seeded Monte Carlo runner, sweeps, report emission, and the inequality
// verification driver.

#include "permchal/attacks.hpp"
#include "permchal/pcmodel.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace permchal::harness {

/// splitmix-style avalanche over (masterSeed, trialIndex).
std::uint64_t deriveTrialSeed(std::uint64_t masterSeed, std::uint64_t trialIndex);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval at 95%.
Interval wilson95(std::uint64_t successes, std::uint64_t trials);

enum class Format { Csv, Json };
Format parseFormat(const std::string& token);

struct ExperimentSpec {
  pc::GameKind game = pc::GameKind::Dlog;
  std::string attack = "guess";
  std::uint32_t n = 101;
  std::uint64_t sBits = 0;
  std::uint64_t tBudget = 0;
  std::uint64_t trials = 1000;
  std::uint64_t masterSeed = 0;
  /// Defaults to the game's own bound.
  std::optional<pc::Bound> bound;

  // Attack-specific; 0 keeps the attack's default.
  std::uint64_t m = 0;
  std::uint32_t alpha = 1;
  std::uint32_t beta = 2;
  std::uint64_t buckets = 0;
  std::uint64_t chains = 0;

  pc::Bound boundOrDefault() const { return bound.value_or(pc::defaultBound(game)); }
  attacks::AttackConfig attackConfig() const;
  /// Throws pc::ValidationError.
  void validate() const;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::uint64_t successes = 0;
  double pHat = 0.0;
  Interval ci;
  pc::Bound bound = pc::Bound::General;
  double boundValue = 0.0;
  bool adaptive = false;
  double seconds = 0.0;
  std::string seedDerivation;
};

struct RunOptions {
  unsigned jobs = 1;
  /// Record wall-clock time; off keeps reports byte-identical across runs.
  bool timing = false;
};

ExperimentReport runTrials(const ExperimentSpec& spec, const RunOptions& options = {});

/// Runs specs in order. onReport sees each report as soon as it is done, so
/// a failure part-way leaves the earlier rows written.
std::vector<ExperimentReport> sweepGrid(const std::vector<ExperimentSpec>& specs,
                                        const RunOptions& options = {},
                                        const std::function<void(const ExperimentReport&)>& onReport = {});

/// The grid behind the `sweep` subcommand when no config file is given.
std::vector<ExperimentSpec> defaultSweep(std::uint64_t masterSeed);

/// Blank-line separated blocks of `key = value` lines; `#` starts a comment.
/// Keys mirror the CLI flags.
std::vector<ExperimentSpec> parseSweepConfig(std::istream& in);

// ---------------------------------------------------------------------------

void writeCsvHeader(std::ostream& out);
void writeCsvRow(std::ostream& out, const ExperimentReport& r);
void writeCsv(std::ostream& out, const std::vector<ExperimentReport>& reports);
void writeJson(std::ostream& out, const std::vector<ExperimentReport>& reports);

// ---------------------------------------------------------------------------

struct InequalitySummary {
  int n = 0;
  std::uint64_t trials = 0;
  std::optional<double> minShearerGap2;
  std::optional<double> minShearerGap9;
  std::optional<double> minReadKGap;
  std::optional<double> minIndicatorGap;
  std::optional<double> minTechnicalGap;
  std::optional<double> extremalRatio;

  bool empty() const { return !minShearerGap2.has_value(); }
  /// Every recorded gap is at least -tolerance.
  bool holds(double tolerance = 1e-9) const;
};

/// Random distributions, covers and read-k families; point masses with the
/// singleton cover are always included. n <= 6.
InequalitySummary verifyInequalities(int n, std::uint64_t randomTrials, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct MiSummary {
  std::uint64_t runs = 0;
  std::uint64_t allCorrectRuns = 0;
  /// Runs whose determinedFraction reached 0.95.
  std::uint64_t wellDeterminedRuns = 0;
  double meanDeterminedFraction = 0.0;
  /// Share of runs where every window of T/2 exponents held a queried point
  /// once the threshold instances were played.
  double intervalCoverageRate = 0.0;
  double meanWindowCoverage = 0.0;
  std::uint64_t instances = 0;
  std::uint64_t threshold = 0;
};

/// Runs runMiGame under per-run seeds derived from masterSeed.
MiSummary runMiExperiment(const attacks::AttackConfig& cfg, std::uint64_t runs, std::uint64_t masterSeed);

}  // namespace permchal::harness
