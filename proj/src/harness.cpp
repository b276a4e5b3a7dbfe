#include "permchal/harness.hpp"

#include "permchal/permshearer.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <thread>

namespace permchal::harness {

using pc::ValidationError;

std::uint64_t deriveTrialSeed(std::uint64_t masterSeed, std::uint64_t trialIndex) {
  return mix64(masterSeed ^ mix64(trialIndex + kGoldenGamma));
}

Interval wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (successes > trials) throw ValidationError("wilson95: successes exceed trials");
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::clamp(std::min(centre - half, p), 0.0, 1.0), std::clamp(std::max(centre + half, p), 0.0, 1.0)};
}

Format parseFormat(const std::string& token) {
  if (token == "csv") return Format::Csv;
  if (token == "json") return Format::Json;
  throw ValidationError("unknown format '" + token + "'");
}

attacks::AttackConfig ExperimentSpec::attackConfig() const {
  attacks::AttackConfig c;
  c.n = n;
  c.sBits = sBits;
  c.tBudget = tBudget;
  c.seed = masterSeed;
  c.m = m;
  c.alpha = alpha;
  c.beta = beta;
  c.buckets = buckets;
  c.chains = chains;
  return c;
}

void ExperimentSpec::validate() const {
  if (trials == 0) throw ValidationError("trials must be at least 1");
  const pc::Bound b = boundOrDefault();
  if (!pc::boundApplies(b, game)) {
    throw ValidationError("bound '" + pc::boundToken(b) + "' does not apply to " + pc::gameToken(game));
  }
  const pc::PCGame g = pc::buildGame(game, n);
  attacks::makeAdversary(attack, g, attackConfig());
}

// ---------------------------------------------------------------------------

namespace {

struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t failedAt = ~std::uint64_t{0};
  std::exception_ptr error;
};

void runRange(const pc::PCGame& game, const pc::Adversary& adv, std::uint64_t master, std::uint64_t begin,
              std::uint64_t end, Tally& tally) {
  for (std::uint64_t i = begin; i < end; ++i) {
    try {
      Rng rng(deriveTrialSeed(master, i));
      const Permutation sigma = pc::samplePermutation(game.n, rng);
      const pc::Secret secret = game.secrets.sample(rng);
      const std::uint64_t coins = rng.next();
      tally.successes += pc::playGame(game, adv, sigma, secret, coins, false).success;
    } catch (...) {
      tally.failedAt = i;
      tally.error = std::current_exception();
      return;
    }
  }
}

}  // namespace

ExperimentReport runTrials(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const pc::PCGame game = pc::buildGame(spec.game, spec.n);
  const auto adv = attacks::makeAdversary(spec.attack, game, spec.attackConfig());

  const std::uint64_t jobs = std::clamp<std::uint64_t>(options.jobs, 1, spec.trials);
  std::vector<Tally> tallies(jobs);
  if (jobs == 1) {
    runRange(game, *adv, spec.masterSeed, 0, spec.trials, tallies[0]);
  } else {
    std::vector<std::thread> workers;
    for (std::uint64_t c = 0; c < jobs; ++c) {
      workers.emplace_back([&, c] {
        runRange(game, *adv, spec.masterSeed, c * spec.trials / jobs, (c + 1) * spec.trials / jobs, tallies[c]);
      });
    }
    for (auto& w : workers) w.join();
  }

  ExperimentReport r;
  r.spec = spec;
  const Tally* first = nullptr;
  for (const Tally& t : tallies) {
    r.successes += t.successes;
    if (t.error && (!first || t.failedAt < first->failedAt)) first = &t;
  }
  if (first) std::rethrow_exception(first->error);

  r.pHat = static_cast<double>(r.successes) / static_cast<double>(spec.trials);
  r.ci = wilson95(r.successes, spec.trials);
  r.bound = spec.boundOrDefault();
  const double n = spec.n;
  const double t = static_cast<double>(adv->tBudget());
  r.boundValue = pc::evaluateBound(r.bound, n, static_cast<double>(adv->sBits()), t,
                                   pc::analyticUniformity(spec.game, spec.n), pc::shoupMaxS(spec.game, n, t));
  r.adaptive = adv->adaptivity() == pc::Adaptivity::Adaptive;
  r.seedDerivation = "trial i uses mix64(seed ^ mix64(i + 0x9e3779b97f4a7c15))";
  if (options.timing) {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::vector<ExperimentReport> sweepGrid(const std::vector<ExperimentSpec>& specs, const RunOptions& options,
                                        const std::function<void(const ExperimentReport&)>& onReport) {
  if (specs.empty()) throw ValidationError("sweep grid is empty");
  std::vector<ExperimentReport> reports;
  reports.reserve(specs.size());
  for (const auto& s : specs) {
    reports.push_back(runTrials(s, options));
    if (onReport) onReport(reports.back());
  }
  return reports;
}

std::vector<ExperimentSpec> defaultSweep(std::uint64_t masterSeed) {
  using pc::GameKind;
  std::vector<ExperimentSpec> grid;
  auto add = [&](GameKind game, const std::string& attack, std::uint32_t n, std::uint64_t s, std::uint64_t t,
                 std::uint64_t trials) -> ExperimentSpec& {
    ExperimentSpec e;
    e.game = game;
    e.attack = attack;
    e.n = n;
    e.sBits = s;
    e.tBudget = t;
    e.trials = trials;
    e.masterSeed = deriveTrialSeed(masterSeed, grid.size());
    grid.push_back(e);
    return grid.back();
  };

  // BSGS: advice m * 2 ceil(lg n) bits, T giant steps.
  for (auto [n, w, steps] : {std::tuple{101u, 7u, std::array<std::uint64_t, 3>{4, 8, 11}},
                             std::tuple{1009u, 10u, std::array<std::uint64_t, 3>{8, 16, 32}}}) {
    for (std::uint64_t m : steps) {
      for (std::uint64_t t : steps) add(GameKind::Dlog, "bsgs", n, m * 2 * w, t, 10000);
    }
  }
  for (std::uint64_t cosets : {16, 32, 64}) add(GameKind::EvenMansour, "daemen", 1024, cosets * 40, 64, 10000);
  add(GameKind::EvenMansourSingleKey, "daemen", 1024, 32 * 40, 64, 10000);
  for (std::uint64_t s : {8, 32, 128}) add(GameKind::SqDdh, "sqddh", 1021, s, 16, 10000);
  add(GameKind::Dlog, "guess", 101, 0, 0, 10000);
  add(GameKind::Ddh, "guess", 13, 0, 0, 10000);
  add(GameKind::SqDdh, "guess", 101, 0, 0, 10000);
  add(GameKind::EvenMansour, "guess", 16, 0, 0, 10000);
  add(GameKind::EvenMansourSingleKey, "guess", 64, 0, 0, 10000);
  add(GameKind::Dlog, "rho", 101, 0, 88, 10000);
  add(GameKind::Dlog, "chain", 1009, 126 * 20, 8, 1000);
  return grid;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parseNumber(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ValidationError("config line " + std::to_string(line) + ": '" + key + "' needs an unsigned integer, got '" +
                          value + "'");
  }
  return out;
}

}  // namespace

std::vector<ExperimentSpec> parseSweepConfig(std::istream& in) {
  std::vector<ExperimentSpec> specs;
  ExperimentSpec current;
  bool open = false;
  std::string raw;
  std::size_t lineNo = 0;
  auto close = [&] {
    if (open) specs.push_back(current);
    current = ExperimentSpec{};
    open = false;
  };
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) {
      if (trim(raw).empty()) close();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineNo) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    open = true;
    if (key == "game") current.game = pc::parseGameKind(value);
    else if (key == "attack") current.attack = value;
    else if (key == "n") current.n = parseNumber<std::uint32_t>(key, value, lineNo);
    else if (key == "s-bits") current.sBits = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "t") current.tBudget = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "trials") current.trials = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "seed") current.masterSeed = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "bound") current.bound = pc::parseBound(value);
    else if (key == "m") current.m = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "alpha") current.alpha = parseNumber<std::uint32_t>(key, value, lineNo);
    else if (key == "beta") current.beta = parseNumber<std::uint32_t>(key, value, lineNo);
    else if (key == "buckets") current.buckets = parseNumber<std::uint64_t>(key, value, lineNo);
    else if (key == "chains") current.chains = parseNumber<std::uint64_t>(key, value, lineNo);
    else throw ValidationError("config line " + std::to_string(lineNo) + ": unknown key '" + key + "'");
  }
  close();
  return specs;
}

// ---------------------------------------------------------------------------

namespace {

std::string real(double v, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

void writeCsvHeader(std::ostream& out) {
  out << "#permchal-v1\n"
      << "game,attack,n,s_bits,t,trials,successes,p_hat,ci_low,ci_high,bound_theorem,bound_value,seed,seconds\n";
}

void writeCsvRow(std::ostream& out, const ExperimentReport& r) {
  const auto& s = r.spec;
  out << pc::gameToken(s.game) << ',' << s.attack << ',' << s.n << ',' << s.sBits << ',' << s.tBudget << ','
      << s.trials << ',' << r.successes << ',' << real(r.pHat) << ',' << real(r.ci.low) << ','
      << real(r.ci.high) << ',' << pc::boundToken(r.bound) << ',' << real(r.boundValue) << ',' << s.masterSeed
      << ',' << real(r.seconds, "%.3f") << '\n';
}

void writeCsv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  writeCsvHeader(out);
  for (const auto& r : reports) writeCsvRow(out, r);
}

void writeJson(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    const auto& s = r.spec;
    rows.push_back({{"game", pc::gameToken(s.game)},
                    {"attack", s.attack},
                    {"n", s.n},
                    {"s_bits", s.sBits},
                    {"t", s.tBudget},
                    {"trials", s.trials},
                    {"successes", r.successes},
                    {"p_hat", r.pHat},
                    {"ci_low", r.ci.low},
                    {"ci_high", r.ci.high},
                    {"bound_theorem", pc::boundToken(r.bound)},
                    {"bound_value", r.boundValue},
                    {"adaptive", r.adaptive},
                    {"seed", s.masterSeed},
                    {"seconds", r.seconds},
                    {"seed_derivation", r.seedDerivation}});
  }
  out << nlohmann::ordered_json{{"format", "permchal-v1"}, {"reports", rows}}.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

bool InequalitySummary::holds(double tolerance) const {
  for (const auto* g : {&minShearerGap2, &minShearerGap9, &minReadKGap, &minIndicatorGap, &minTechnicalGap}) {
    if (g->has_value() && **g < -tolerance) return false;
  }
  return true;
}

InequalitySummary verifyInequalities(int n, std::uint64_t randomTrials, std::uint64_t seed) {
  if (n < 2 || n > shearer::kMaxEnumeration || n > 6) throw ValidationError("verifyInequalities: need 2 <= n <= 6");
  InequalitySummary s;
  s.n = n;
  s.trials = randomTrials;
  if (randomTrials == 0) return s;

  auto lower = [](std::optional<double>& slot, double v) { slot = slot ? std::min(*slot, v) : v; };
  const auto singletons = shearer::CoverFamily::singletons(n);
  for (std::uint64_t rank = 0; rank < factorial(n); ++rank) {
    const auto p = shearer::BijectionDistribution::pointMass(n, rank);
    lower(s.minShearerGap2, shearer::bijectionShearerGap(p, singletons, 2.0));
    lower(s.minShearerGap9, shearer::bijectionShearerGap(p, singletons, 9.0));
  }

  Rng rng(seed);
  const auto support = shearer::indicatorVectors(n);
  for (std::uint64_t t = 0; t < randomTrials; ++t) {
    const auto p = shearer::BijectionDistribution::dirichlet(n, rng);
    const auto cover = shearer::CoverFamily::random(n, 2 * n, rng);
    lower(s.minShearerGap2, shearer::bijectionShearerGap(p, cover, 2.0));
    lower(s.minShearerGap9, shearer::bijectionShearerGap(p, cover, 9.0));
    lower(s.minReadKGap, shearer::readKConcentrationGap(p, shearer::ReadKFamily::random(n, 2 * n, rng)));

    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.exponential();
    lower(s.minIndicatorGap, shearer::indicatorShearerGap(info::FiniteDistribution(support, w / w.sum()), cover));

    if (n >= 4) {
      double q = rng.uniform();
      while (q <= 0.0) q = rng.uniform();
      const double probs[] = {q};
      lower(s.minTechnicalGap, shearer::technicalLemmaGap(n, probs));
    }
  }
  const int starts = static_cast<int>(std::min<std::uint64_t>(randomTrials, 64));
  s.extremalRatio = shearer::extremalRatioSearch(n, singletons, starts, seed).bestRatio;
  return s;
}

// ---------------------------------------------------------------------------

MiSummary runMiExperiment(const attacks::AttackConfig& cfg, std::uint64_t runs, std::uint64_t masterSeed) {
  if (runs == 0) throw ValidationError("mi: runs must be at least 1");
  MiSummary s;
  s.runs = runs;
  std::uint64_t covered = 0;
  for (std::uint64_t i = 0; i < runs; ++i) {
    attacks::AttackConfig c = cfg;
    c.seed = deriveTrialSeed(masterSeed, i);
    const attacks::MiResult r = attacks::runMiGame(c);
    s.instances = r.instances;
    s.threshold = r.threshold;
    s.allCorrectRuns += r.allCorrect;
    s.wellDeterminedRuns += r.determinedFraction >= 0.95;
    s.meanDeterminedFraction += r.determinedFraction;
    covered += r.intervalsCovered;
    s.meanWindowCoverage += r.windowCoverage;
  }
  const double k = static_cast<double>(runs);
  s.meanDeterminedFraction /= k;
  s.meanWindowCoverage /= k;
  s.intervalCoverageRate = static_cast<double>(covered) / k;
  return s;
}

}  // namespace permchal::harness
