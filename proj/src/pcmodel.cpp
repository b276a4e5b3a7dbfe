#include "permchal/pcmodel.hpp"

#include "permchal/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace permchal::pc {

Tuple::Tuple(std::initializer_list<std::uint32_t> values) {
  if (values.size() > v.size()) throw ValidationError("Tuple: at most 4 entries");
  for (std::uint32_t x : values) v[size++] = x;
}

std::string Tuple::str() const {
  std::ostringstream out;
  out << '(';
  for (std::uint8_t i = 0; i < size; ++i) out << (i ? "," : "") << v[i];
  out << ')';
  return out.str();
}

TupleSpace::TupleSpace(std::vector<std::uint32_t> radices, Predicate exclude,
                       std::uint64_t excludedCount)
    : radices_(std::move(radices)), exclude_(std::move(exclude)), total_(1), excluded_(excludedCount) {
  if (radices_.empty() || radices_.size() > 4) throw ValidationError("TupleSpace: 1 to 4 coordinates");
  for (std::uint32_t r : radices_) {
    if (r == 0) throw ValidationError("TupleSpace: empty coordinate range");
    total_ *= r;
  }
  if (excluded_ >= total_) throw ValidationError("TupleSpace: no members");
}

bool TupleSpace::contains(const Tuple& t) const {
  if (t.size != radices_.size()) return false;
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    if (t[i] >= radices_[i]) return false;
  }
  return !(exclude_ && exclude_(t));
}

Tuple TupleSpace::sample(Rng& rng) const {
  Tuple t;
  t.size = static_cast<std::uint8_t>(radices_.size());
  do {
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      t[i] = static_cast<std::uint32_t>(rng.below(radices_[i]));
    }
  } while (exclude_ && exclude_(t));
  return t;
}

void TupleSpace::forEach(const std::function<void(const Tuple&)>& visit) const {
  Tuple t;
  t.size = static_cast<std::uint8_t>(radices_.size());
  for (;;) {
    if (!(exclude_ && exclude_(t))) visit(t);
    std::size_t i = radices_.size();
    while (i-- > 0) {
      if (++t[i] < radices_[i]) break;
      t[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

// ---------------------------------------------------------------------------

std::string gameToken(GameKind kind) {
  switch (kind) {
    case GameKind::Dlog: return "dlog";
    case GameKind::Ddh: return "ddh";
    case GameKind::SqDdh: return "sqddh";
    case GameKind::EvenMansour: return "em";
    case GameKind::EvenMansourSingleKey: return "em1k";
  }
  return "?";
}

GameKind parseGameKind(const std::string& token) {
  for (GameKind k : {GameKind::Dlog, GameKind::Ddh, GameKind::SqDdh, GameKind::EvenMansour,
                     GameKind::EvenMansourSingleKey}) {
    if (gameToken(k) == token) return k;
  }
  throw ValidationError("unknown game '" + token + "'");
}

bool isGroupGame(GameKind kind) {
  return kind == GameKind::Dlog || kind == GameKind::Ddh || kind == GameKind::SqDdh;
}

PCGame buildGame(GameKind kind, std::uint32_t n) {
  if (isGroupGame(kind)) {
    if (!nt::isPrime(n)) throw ValidationError(gameToken(kind) + " needs a prime n, got " + std::to_string(n));
  } else if (n < 2 || !nt::isPowerOfTwo(n)) {
    throw ValidationError(gameToken(kind) + " needs n a power of two, got " + std::to_string(n));
  }
  const std::uint64_t N = n;
  auto identityPost = [](const Secret&, std::uint32_t j) { return j; };

  switch (kind) {
    case GameKind::Dlog:
      return PCGame{
          kind, n, TupleSpace({n}),
          TupleSpace({n, n}, [](const Tuple& q) { return q[0] == 0; }, N),
          [N](const Secret& d, const OuterQuery& q) {
            return static_cast<std::uint32_t>((std::uint64_t{q[0]} * d[0] + q[1]) % N);
          },
          identityPost, [](const Secret& d) { return Answer{d[0]}; }, N, false, true};
    case GameKind::Ddh:
      return PCGame{
          kind, n, TupleSpace({n, n, n, 2}),
          TupleSpace({n, n, n, n}, [](const Tuple& q) { return q[0] == 0 && q[1] == 0 && q[2] == 0; }, N),
          [N](const Secret& d, const OuterQuery& q) {
            const std::uint64_t third = d[3] ? std::uint64_t{d[0]} * d[1] % N : d[2];
            const std::uint64_t v = (std::uint64_t{q[0]} * d[0] % N + std::uint64_t{q[1]} * d[1] % N +
                                     q[2] * third % N + q[3]) % N;
            return static_cast<std::uint32_t>(v);
          },
          identityPost, [](const Secret& d) { return Answer{d[3]}; }, 2, false, true};
    case GameKind::SqDdh:
      return PCGame{
          kind, n, TupleSpace({n, n, 2}),
          TupleSpace({n, n, n}, [](const Tuple& q) { return q[0] == 0 && q[1] == 0; }, N),
          [N](const Secret& d, const OuterQuery& q) {
            const std::uint64_t second = d[2] ? std::uint64_t{d[0]} * d[0] % N : d[1];
            const std::uint64_t v = (std::uint64_t{q[0]} * d[0] % N + q[1] * second % N + q[2]) % N;
            return static_cast<std::uint32_t>(v);
          },
          identityPost, [](const Secret& d) { return Answer{d[2]}; }, 2, false, true};
    case GameKind::EvenMansour:
      return PCGame{
          kind, n, TupleSpace({n, n}), TupleSpace({n}),
          [](const Secret& k, const OuterQuery& m) { return m[0] ^ k[0]; },
          [](const Secret& k, std::uint32_t j) { return j ^ k[1]; },
          [](const Secret& k) { return Answer{k[0], k[1]}; }, N * N, true, false};
    case GameKind::EvenMansourSingleKey:
      return PCGame{
          kind, n, TupleSpace({n}), TupleSpace({n}),
          [](const Secret& k, const OuterQuery& m) { return m[0] ^ k[0]; },
          [](const Secret& k, std::uint32_t j) { return j ^ k[0]; },
          [](const Secret& k) { return Answer{k[0]}; }, N, true, false};
  }
  throw ValidationError("unknown game kind");
}

// ---------------------------------------------------------------------------

void BitString::push(std::uint64_t value, int width) {
  if (width < 0 || width > 64) throw ValidationError("BitString: width must lie in [0, 64]");
  for (int i = 0; i < width; ++i) {
    if (bits_ % 64 == 0) words_.push_back(0);
    if ((value >> i) & 1u) words_.back() |= std::uint64_t{1} << (bits_ % 64);
    ++bits_;
  }
}

std::uint64_t BitString::read(std::size_t offset, int width) const {
  if (width < 0 || width > 64 || offset + static_cast<std::size_t>(width) > bits_) {
    throw ValidationError("BitString: read past the end");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < width; ++i) {
    const std::size_t bit = offset + static_cast<std::size_t>(i);
    if ((words_[bit / 64] >> (bit % 64)) & 1u) value |= std::uint64_t{1} << i;
  }
  return value;
}

// ---------------------------------------------------------------------------

QueryPlan Adversary::plan(const BitString&, Rng&) const {
  throw std::logic_error(name() + " does not implement plan");
}

Answer Adversary::decide(const BitString&, const QueryPlan&, const OracleAnswers&, Rng&) const {
  throw std::logic_error(name() + " does not implement decide");
}

Answer Adversary::online(const BitString& z, NonAdaptiveOracle& oracle, Rng& coins) const {
  const QueryPlan p = plan(z, coins);
  const OracleAnswers a = oracle.submit(p);
  return decide(z, p, a, coins);
}

Answer Adversary::interact(const BitString&, AdaptiveOracle&, Rng&) const {
  throw std::logic_error(name() + " does not implement interact");
}

Permutation samplePermutation(std::uint32_t n, Rng& rng) {
  Permutation p = identityPermutation(n);
  rng.shuffle(std::span<std::uint32_t>(p));
  return p;
}

namespace {

/// Shared answering logic and bookkeeping for both oracle flavours.
class GameOracle {
 public:
  GameOracle(const PCGame& game, const Adversary& adv, std::span<const std::uint32_t> sigma,
             const Secret& secret, GameTranscript& record)
      : game_(game), adv_(adv), sigma_(sigma), secret_(secret), record_(record) {}

  std::uint32_t inner(std::uint32_t point, bool inverse) {
    charge();
    if (point >= game_.n) throw ContractViolation(adv_.name() + ": inner query out of range");
    if (inverse && !game_.allowInverseInner) {
      throw ContractViolation(adv_.name() + ": inverse inner query in a game that forbids it");
    }
    if (inverse && inverse_.empty()) inverse_ = inversePermutation(sigma_);
    const std::uint32_t a = inverse ? inverse_[point] : sigma_[point];
    record_.innerQueries.push_back({point, inverse});
    record_.innerAnswers.push_back(a);
    ++record_.t1;
    return a;
  }

  std::uint32_t outer(const OuterQuery& q) {
    charge();
    if (!game_.queries.contains(q)) {
      throw ContractViolation(adv_.name() + ": outer query " + q.str() + " outside the query space");
    }
    const std::uint32_t a = game_.postProcess(secret_, sigma_[game_.translate(secret_, q)]);
    record_.outerQueries.push_back(q);
    record_.outerAnswers.push_back(a);
    ++record_.t2;
    return a;
  }

  std::uint64_t remaining() const { return adv_.tBudget() - used_; }

 private:
  void charge() {
    if (used_ >= adv_.tBudget()) {
      throw ContractViolation(adv_.name() + ": query budget of " + std::to_string(adv_.tBudget()) +
                              " exceeded");
    }
    ++used_;
  }

  const PCGame& game_;
  const Adversary& adv_;
  std::span<const std::uint32_t> sigma_;
  const Secret& secret_;
  GameTranscript& record_;
  Permutation inverse_;
  std::uint64_t used_ = 0;
};

class OneShotOracle final : public NonAdaptiveOracle {
 public:
  OneShotOracle(GameOracle& core, const Adversary& adv) : core_(core), adv_(adv) {}

  OracleAnswers submit(const QueryPlan& plan) override {
    if (submitted_) throw ContractViolation(adv_.name() + ": non-adaptive plan submitted twice");
    submitted_ = true;
    if (plan.inner.size() + plan.outer.size() > adv_.tBudget()) {
      throw ContractViolation(adv_.name() + ": plan exceeds the query budget");
    }
    OracleAnswers a;
    a.inner.reserve(plan.inner.size());
    a.outer.reserve(plan.outer.size());
    for (const auto& q : plan.inner) a.inner.push_back(core_.inner(q.point, q.inverse));
    for (const auto& q : plan.outer) a.outer.push_back(core_.outer(q));
    return a;
  }

 private:
  GameOracle& core_;
  const Adversary& adv_;
  bool submitted_ = false;
};

class StepOracle final : public AdaptiveOracle {
 public:
  explicit StepOracle(GameOracle& core) : core_(core) {}
  std::uint32_t inner(std::uint32_t point, bool inverse) override { return core_.inner(point, inverse); }
  std::uint32_t outer(const OuterQuery& q) override { return core_.outer(q); }
  std::uint64_t remaining() const override { return core_.remaining(); }

 private:
  GameOracle& core_;
};

}  // namespace

GameTranscript playGame(const PCGame& game, const Adversary& adv,
                        std::span<const std::uint32_t> sigma, const Secret& secret,
                        std::uint64_t coinsSeed, bool keepSigma) {
  if (sigma.size() != game.n) throw ValidationError("playGame: permutation has the wrong size");
  if (!game.secrets.contains(secret)) throw ValidationError("playGame: secret outside the secret space");

  GameTranscript record;
  if (keepSigma) record.sigma.assign(sigma.begin(), sigma.end());
  record.secret = secret;
  record.advice = adv.preprocess(sigma);
  if (record.advice.size() > adv.sBits()) {
    throw ContractViolation(adv.name() + ": advice of " + std::to_string(record.advice.size()) +
                            " bits exceeds the declared " + std::to_string(adv.sBits()));
  }

  Rng coins(coinsSeed);
  GameOracle core(game, adv, sigma, secret, record);
  if (adv.adaptivity() == Adaptivity::NonAdaptive) {
    OneShotOracle oracle(core, adv);
    record.output = adv.online(record.advice, oracle, coins);
  } else {
    StepOracle oracle(core);
    record.output = adv.interact(record.advice, oracle, coins);
  }
  record.success = record.output == game.successTarget(secret);
  return record;
}

// ---------------------------------------------------------------------------

void MidConstraints::validate(std::uint32_t n) const {
  if (inputs.size() != outputs.size()) throw ValidationError("MidConstraints: |I| != |O|");
  for (const auto* seq : {&inputs, &outputs}) {
    std::vector<bool> seen(n, false);
    for (std::uint32_t x : *seq) {
      if (x >= n) throw ValidationError("MidConstraints: value out of range");
      if (seen[x]) throw ValidationError("MidConstraints: repeated value");
      seen[x] = true;
    }
  }
}

GameTranscript playMidGame(const PCGame& game, const MidConstraints& constraints,
                           std::span<const OuterQuery> outerQueries, const MidDecide& decide,
                           const Secret& secret, std::uint64_t rngSeed) {
  constraints.validate(game.n);
  if (!game.secrets.contains(secret)) throw ValidationError("playMidGame: secret outside the secret space");
  Rng rng(rngSeed);

  constexpr std::uint32_t kUnset = UINT32_MAX;
  Permutation sigma(game.n, kUnset);
  std::vector<bool> outputTaken(game.n, false);
  for (std::size_t j = 0; j < constraints.inputs.size(); ++j) {
    sigma[constraints.inputs[j]] = constraints.outputs[j];
    outputTaken[constraints.outputs[j]] = true;
  }
  std::vector<std::uint32_t> freeOutputs;
  for (std::uint32_t v = 0; v < game.n; ++v) {
    if (!outputTaken[v]) freeOutputs.push_back(v);
  }
  rng.shuffle(std::span<std::uint32_t>(freeOutputs));
  std::size_t next = 0;
  for (auto& s : sigma) {
    if (s == kUnset) s = freeOutputs[next++];
  }

  GameTranscript record;
  record.sigma = sigma;
  record.secret = secret;
  for (std::size_t j = 0; j < constraints.inputs.size(); ++j) {
    record.innerQueries.push_back({constraints.inputs[j], false});
    record.innerAnswers.push_back(constraints.outputs[j]);
  }
  record.t1 = constraints.inputs.size();
  for (const auto& q : outerQueries) {
    if (!game.queries.contains(q)) throw ValidationError("playMidGame: outer query outside the query space");
    record.outerQueries.push_back(q);
    record.outerAnswers.push_back(game.postProcess(secret, sigma[game.translate(secret, q)]));
  }
  record.t2 = outerQueries.size();
  record.output = decide(record.outerAnswers);
  record.success = record.output == game.successTarget(secret);
  return record;
}

MidSimulation midSimulationOracle(const PCGame& game, const MidConstraints& constraints,
                                  std::span<const OuterQuery> outerQueries, const Secret& secret,
                                  std::uint64_t rngSeed) {
  constraints.validate(game.n);
  if (!game.secrets.contains(secret)) throw ValidationError("midSimulationOracle: secret outside the secret space");
  Rng rng(rngSeed);

  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> pinnedIndex(game.n, kNone);
  std::vector<bool> pinnedOutput(game.n, false);
  for (std::size_t j = 0; j < constraints.inputs.size(); ++j) {
    pinnedIndex[constraints.inputs[j]] = static_cast<std::int64_t>(j);
    pinnedOutput[constraints.outputs[j]] = true;
  }
  std::vector<std::int64_t> assigned(game.n, kNone);
  std::vector<bool> used(game.n, false);

  auto draw = [&](auto&& allowed) {
    for (;;) {
      const auto v = static_cast<std::uint32_t>(rng.below(game.n));
      if (allowed(v)) return v;
    }
  };

  MidSimulation out;
  for (const auto& q : outerQueries) {
    if (!game.queries.contains(q)) throw ValidationError("midSimulationOracle: outer query outside the query space");
    const std::uint32_t x = game.translate(secret, q);
    std::uint32_t v;
    if (pinnedIndex[x] != kNone) {
      v = constraints.outputs[static_cast<std::size_t>(pinnedIndex[x])];
      out.w1 = true;
    } else if (assigned[x] != kNone) {
      v = static_cast<std::uint32_t>(assigned[x]);
    } else {
      v = draw([&](std::uint32_t c) { return !used[c]; });
      if (pinnedOutput[v]) {
        out.w2 = true;
        v = draw([&](std::uint32_t c) { return !used[c] && !pinnedOutput[c]; });
      }
      assigned[x] = v;
    }
    used[v] = true;
    out.responses.push_back(game.postProcess(secret, v));
  }
  return out;
}

Permutation trivialPostReduction(const PCGame& game, const MidConstraints& constraints,
                                 std::span<const std::uint32_t> observedO) {
  if (!game.trivialPost) throw ValidationError("trivialPostReduction: game has a non-trivial post-processing map");
  constraints.validate(game.n);
  if (observedO.size() != constraints.outputs.size()) {
    throw ValidationError("trivialPostReduction: observed outputs differ in length from O");
  }
  MidConstraints observed{std::vector<std::uint32_t>(observedO.begin(), observedO.end()), constraints.outputs};
  observed.validate(game.n);

  constexpr std::uint32_t kUnset = UINT32_MAX;
  Permutation pi(game.n, kUnset);
  std::vector<bool> hit(game.n, false);
  for (std::size_t i = 0; i < observedO.size(); ++i) {
    pi[observedO[i]] = constraints.outputs[i];
    hit[constraints.outputs[i]] = true;
  }
  std::uint32_t target = 0;
  for (std::uint32_t x = 0; x < game.n; ++x) {
    if (pi[x] != kUnset) continue;
    while (hit[target]) ++target;
    pi[x] = target++;
  }
  return pi;
}

// ---------------------------------------------------------------------------

Uniformity measureUniformity(const PCGame& game) {
  Uniformity best;
  std::vector<std::uint64_t> fiber(game.n);
  std::vector<Secret> secrets;
  game.secrets.forEach([&](const Tuple& d) { secrets.push_back(d); });
  bool any = false;
  game.queries.forEach([&](const Tuple& m) {
    any = true;
    std::fill(fiber.begin(), fiber.end(), 0);
    for (const auto& d : secrets) ++fiber[game.translate(d, m)];
    const auto it = std::max_element(fiber.begin(), fiber.end());
    if (*it > best.maxFiber) {
      best.maxFiber = *it;
      best.worstQuery = m;
      best.worstTarget = static_cast<std::uint32_t>(it - fiber.begin());
    }
  });
  if (!any) throw ValidationError("measureUniformity: empty query space");
  best.u = static_cast<double>(secrets.size()) / static_cast<double>(best.maxFiber);
  return best;
}

double analyticUniformity(GameKind kind, std::uint32_t n) {
  return kind == GameKind::Ddh || kind == GameKind::SqDdh ? n / 2.0 : static_cast<double>(n);
}

std::string boundToken(Bound bound) {
  switch (bound) {
    case Bound::General: return "general";
    case Bound::Dlog: return "dlog";
    case Bound::Ddh: return "ddh";
    case Bound::EvenMansour: return "em";
    case Bound::TrivialPost: return "trivial-post";
  }
  return "?";
}

Bound parseBound(const std::string& token) {
  for (Bound b : {Bound::General, Bound::Dlog, Bound::Ddh, Bound::EvenMansour, Bound::TrivialPost}) {
    if (boundToken(b) == token) return b;
  }
  throw ValidationError("unknown bound '" + token + "'");
}

Bound defaultBound(GameKind kind) {
  switch (kind) {
    case GameKind::Dlog: return Bound::Dlog;
    case GameKind::Ddh:
    case GameKind::SqDdh: return Bound::Ddh;
    case GameKind::EvenMansour:
    case GameKind::EvenMansourSingleKey: return Bound::EvenMansour;
  }
  return Bound::General;
}

bool boundApplies(Bound bound, GameKind kind) {
  switch (bound) {
    case Bound::General: return true;
    case Bound::TrivialPost: return isGroupGame(kind);
    case Bound::Dlog: return kind == GameKind::Dlog;
    case Bound::Ddh: return kind == GameKind::Ddh || kind == GameKind::SqDdh;
    case Bound::EvenMansour:
      return kind == GameKind::EvenMansour || kind == GameKind::EvenMansourSingleKey;
  }
  return false;
}

double shoupMaxS(GameKind kind, double n, double t) {
  const double collisions = t * t / n;
  switch (kind) {
    case GameKind::Ddh:
    case GameKind::SqDdh: return 0.5 + collisions;
    case GameKind::EvenMansour: return std::max(collisions, 1.0 / (n * n));
    default: return std::max(collisions, 1.0 / n);
  }
}

double evaluateBound(Bound bound, double n, double sBits, double t, double u, double maxS) {
  for (double x : {n, sBits, t, u, maxS}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("evaluateBound: arguments must be finite and non-negative");
  }
  if (u <= 0.0) throw ValidationError("evaluateBound: u must be positive");
  if (n <= 0.0) throw ValidationError("evaluateBound: n must be positive");
  constexpr double ln2 = std::numbers::ln2;
  double v = 0.0;
  switch (bound) {
    case Bound::General:
      v = std::min(2 * maxS + 4 * ln2 * sBits * t / u + t * t / u,
                   maxS + std::sqrt(ln2 * sBits * t / u) + t * t / (2 * u));
      break;
    case Bound::Dlog:
      v = 2 * maxS + 4 * ln2 * sBits * t / n + t * t / n;
      break;
    case Bound::Ddh:
      v = maxS + std::sqrt(2 * ln2 * sBits * t / n) + t * t / n;
      break;
    case Bound::EvenMansour:
      v = 2 * maxS + 4 * ln2 * sBits * (t + 1) / n + t * t / n;
      break;
    case Bound::TrivialPost:
      v = std::min(2 * maxS + 4 * ln2 * sBits * t / u, maxS + std::sqrt(ln2 * sBits * t / u));
      break;
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace permchal::pc
