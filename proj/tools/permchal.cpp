// Command-line front end: single experiments, sweeps, uniformity counts,
// inequality checks, the multi-instance game, and bound tables.

#include "permchal/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace permchal;
using namespace permchal::harness;

namespace {

constexpr int kValidation = 2;
constexpr int kContract = 3;
constexpr int kAssertion = 4;

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// stdout unless --out names a file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw pc::ValidationError("cannot open '" + path + "' for writing");
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
  std::string format = "csv";
  bool timing = false;
  bool check = false;
};

void addCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--timing", c.timing, "Fill the seconds column");
  cmd->add_flag("--assert", c.check, "Exit 4 when a report exceeds its bound");
}

/// pHat <= bound + Wilson half-width + 0.01 for non-adaptive attacks.
bool withinBound(const ExperimentReport& r) {
  if (r.adaptive) return true;
  const double half = (r.ci.high - r.ci.low) / 2.0;
  return r.pHat <= r.boundValue + half + 0.01;
}

void emit(const std::vector<ExperimentReport>& reports, const Common& c) {
  Sink sink(c.out);
  if (parseFormat(c.format) == Format::Json) {
    writeJson(sink.out(), reports);
  } else {
    writeCsv(sink.out(), reports);
  }
}

void assertAll(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports) {
    if (!withinBound(r)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s/%s n=%u S=%llu T=%llu: p_hat %.6f above bound %.6f",
                    pc::gameToken(r.spec.game).c_str(), r.spec.attack.c_str(), r.spec.n,
                    static_cast<unsigned long long>(r.spec.sBits), static_cast<unsigned long long>(r.spec.tBudget),
                    r.pHat, r.boundValue);
      throw AssertionFailure(buf);
    }
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-challenge experiments"};
  app.require_subcommand(1);

  // game
  Common gameOpts;
  ExperimentSpec spec;
  std::string gameToken = "dlog", boundToken;
  auto* game = app.add_subcommand("game", "Run one experiment");
  game->add_option("--game", gameToken, "dlog, ddh, sqddh, em or em1k");
  game->add_option("--attack", spec.attack, "bsgs, rho, chain, daemen, sqddh or guess");
  game->add_option("--n", spec.n, "Group order or permutation size");
  game->add_option("--s-bits", spec.sBits, "Advice bits");
  game->add_option("--t", spec.tBudget, "Online query budget");
  game->add_option("--trials", spec.trials, "Trials");
  game->add_option("--bound", boundToken, "general, dlog, ddh, em or trivial-post");
  game->add_option("--m", spec.m, "BSGS baby steps");
  game->add_option("--alpha", spec.alpha, "Daemen coset generator");
  game->add_option("--beta", spec.beta, "Daemen validation offset");
  game->add_option("--buckets", spec.buckets, "sqDDH buckets");
  game->add_option("--chains", spec.chains, "Chain count for the adaptive DLOG attack");
  addCommon(game, gameOpts);

  // sweep
  Common sweepOpts;
  std::string configPath;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of experiments");
  sweep->add_option("--config", configPath, "Config file; the default grid when absent");
  addCommon(sweep, sweepOpts);

  // uniformity
  std::string uniGame = "dlog";
  std::uint32_t uniN = 13;
  auto* uniformity = app.add_subcommand("uniformity", "Exhaustive uniformity count");
  uniformity->add_option("--game", uniGame, "Game");
  uniformity->add_option("--n", uniN, "Size");

  // shearer
  int shearerN = 4;
  std::uint64_t shearerTrials = 1000, shearerSeed = 1;
  bool shearerAssert = false;
  auto* shearerCmd = app.add_subcommand("shearer", "Check the entropy inequalities on random instances");
  shearerCmd->add_option("--n", shearerN, "Permutation size (2 to 6)");
  shearerCmd->add_option("--trials", shearerTrials, "Random instances");
  shearerCmd->add_option("--seed", shearerSeed, "Seed");
  shearerCmd->add_flag("--assert", shearerAssert, "Exit 4 on a negative gap");

  // mi
  attacks::AttackConfig mi;
  mi.n = 1009;
  mi.tBudget = 60;
  std::uint64_t miRuns = 100, miSeed = 1;
  bool miGuess = false, miAssert = false;
  auto* miCmd = app.add_subcommand("mi", "Multi-instance DLOG game");
  miCmd->add_option("--n", mi.n, "Prime group order");
  miCmd->add_option("--t", mi.tBudget, "Queries per instance");
  miCmd->add_option("--instances", mi.instances, "Instances per run (default 4 ceil(n/T^2))");
  miCmd->add_option("--threshold-constant", mi.thresholdConstant, "c in c n / T^2");
  miCmd->add_option("--trials", miRuns, "Runs");
  miCmd->add_option("--seed", miSeed, "Master seed");
  miCmd->add_flag("--guess", miGuess, "Guess the early secrets instead of forcing them correct");
  miCmd->add_flag("--assert", miAssert, "Exit 4 unless 90% of runs reach 0.95 and coverage reaches 0.95");

  // bounds
  std::string bGame = "dlog";
  double bN = 1009, bS = 0, bT = 0;
  auto* bounds = app.add_subcommand("bounds", "Evaluate every applicable bound");
  bounds->add_option("--game", bGame, "Game");
  bounds->add_option("--n", bN, "Size");
  bounds->add_option("--s-bits", bS, "Advice bits");
  bounds->add_option("--t", bT, "Queries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*game) {
      spec.game = pc::parseGameKind(gameToken);
      spec.masterSeed = gameOpts.seed;
      if (!boundToken.empty()) spec.bound = pc::parseBound(boundToken);
      const auto r = runTrials(spec, {gameOpts.jobs, gameOpts.timing});
      emit({r}, gameOpts);
      if (gameOpts.check) assertAll({r});
    } else if (*sweep) {
      std::vector<ExperimentSpec> specs;
      if (configPath.empty()) {
        specs = defaultSweep(sweepOpts.seed);
      } else {
        std::ifstream in(configPath);
        if (!in) throw pc::ValidationError("cannot read '" + configPath + "'");
        specs = parseSweepConfig(in);
      }
      const bool csv = parseFormat(sweepOpts.format) == Format::Csv;
      std::vector<ExperimentReport> reports;
      if (csv) {
        Sink sink(sweepOpts.out);
        writeCsvHeader(sink.out());
        reports = sweepGrid(specs, {sweepOpts.jobs, sweepOpts.timing}, [&](const ExperimentReport& r) {
          writeCsvRow(sink.out(), r);
          sink.out().flush();
        });
      } else {
        reports = sweepGrid(specs, {sweepOpts.jobs, sweepOpts.timing});
        emit(reports, sweepOpts);
      }
      if (sweepOpts.check) assertAll(reports);
    } else if (*uniformity) {
      const pc::GameKind kind = pc::parseGameKind(uniGame);
      const auto u = pc::measureUniformity(pc::buildGame(kind, uniN));
      std::cout << "game " << uniGame << "\nn " << uniN << "\nu " << fmt(u.u) << "\nmax_fiber " << u.maxFiber
                << "\nworst_query " << u.worstQuery.str() << "\nworst_target " << u.worstTarget
                << "\nanalytic_u " << fmt(pc::analyticUniformity(kind, uniN)) << '\n';
    } else if (*shearerCmd) {
      const auto s = verifyInequalities(shearerN, shearerTrials, shearerSeed);
      auto line = [](const char* name, const std::optional<double>& v) {
        std::cout << name << ' ' << (v ? fmt(*v) : std::string("-")) << '\n';
      };
      std::cout << "n " << s.n << "\ntrials " << s.trials << '\n';
      line("min_gap_shearer_c2", s.minShearerGap2);
      line("min_gap_shearer_c9", s.minShearerGap9);
      line("min_gap_read_k", s.minReadKGap);
      line("min_gap_indicator", s.minIndicatorGap);
      line("min_gap_technical", s.minTechnicalGap);
      line("extremal_ratio", s.extremalRatio);
      if (shearerAssert && !s.holds()) throw AssertionFailure("a gap fell below -1e-9");
    } else if (*miCmd) {
      mi.forceGuesses = !miGuess;
      const auto s = runMiExperiment(mi, miRuns, miSeed);
      std::cout << "n " << mi.n << "\nt " << mi.tBudget << "\ninstances " << s.instances << "\nthreshold "
                << s.threshold << "\nruns " << s.runs << "\nall_correct_runs " << s.allCorrectRuns
                << "\nruns_determined_0.95 " << s.wellDeterminedRuns << "\nmean_determined_fraction "
                << fmt(s.meanDeterminedFraction) << "\ninterval_coverage_rate " << fmt(s.intervalCoverageRate)
                << "\nmean_window_coverage " << fmt(s.meanWindowCoverage) << '\n';
      if (miAssert && (s.wellDeterminedRuns * 10 < s.runs * 9 || s.intervalCoverageRate < 0.95)) {
        throw AssertionFailure("multi-instance determination criteria not met");
      }
    } else if (*bounds) {
      const pc::GameKind kind = pc::parseGameKind(bGame);
      const double u = pc::analyticUniformity(kind, static_cast<std::uint32_t>(bN));
      const double maxS = pc::shoupMaxS(kind, bN, bT);
      std::cout << "bound,value\n";
      for (pc::Bound b : {pc::Bound::General, pc::Bound::Dlog, pc::Bound::Ddh, pc::Bound::EvenMansour,
                          pc::Bound::TrivialPost}) {
        if (!pc::boundApplies(b, kind)) continue;
        std::cout << pc::boundToken(b) << ',' << fmt(pc::evaluateBound(b, bN, bS, bT, u, maxS)) << '\n';
      }
    }
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << '\n';
    return kAssertion;
  } catch (const pc::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kContract;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
