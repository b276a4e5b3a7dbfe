#include "permchal/attacks.hpp"

#include "permchal/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace permchal::attacks {

using pc::Answer;
using pc::BitString;
using pc::OracleAnswers;
using pc::OuterQuery;
using pc::QueryPlan;
using pc::ValidationError;

namespace {

int fieldWidth(std::uint32_t n) { return std::max(1, nt::ceilLog2(n)); }

void requirePrime(std::uint32_t n, const char* who) {
  if (!nt::isPrime(n)) throw ValidationError(std::string(who) + ": n must be prime");
}

/// (encoding, value) pairs sorted by encoding, as decoded from advice.
using EncodedTable = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

EncodedTable readPairs(const BitString& z, int w) {
  EncodedTable t;
  const std::size_t entries = z.size() / (2 * static_cast<std::size_t>(w));
  t.reserve(entries);
  for (std::size_t i = 0; i < entries; ++i) {
    const std::size_t off = i * 2 * w;
    t.emplace_back(static_cast<std::uint32_t>(z.read(off, w)), static_cast<std::uint32_t>(z.read(off + w, w)));
  }
  return t;
}

std::optional<std::uint32_t> lookup(const EncodedTable& t, std::uint32_t enc) {
  auto it = std::lower_bound(t.begin(), t.end(), std::make_pair(enc, std::uint32_t{0}));
  if (it == t.end() || it->first != enc) return std::nullopt;
  return it->second;
}

std::uint32_t subMod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint32_t>((a % n + n - b % n) % n);
}

// ---------------------------------------------------------------------------

class Bsgs final : public Adversary {
 public:
  explicit Bsgs(const AttackConfig& cfg) : n_(cfg.n), s_(cfg.sBits), t_(cfg.tBudget) {
    requirePrime(n_, "bsgs");
    w_ = fieldWidth(n_);
    m_ = cfg.m ? cfg.m : s_ / (2 * static_cast<std::uint64_t>(w_));
    m_ = std::min<std::uint64_t>(m_, n_);
    if (m_ * 2 * w_ > s_) {
      throw ValidationError("bsgs: table of " + std::to_string(m_) + " entries needs " +
                            std::to_string(m_ * 2 * w_) + " bits, over the " + std::to_string(s_) +
                            " declared");
    }
  }

  std::string name() const override { return "bsgs"; }
  std::uint64_t sBits() const override { return s_; }
  std::uint64_t tBudget() const override { return t_; }

  BitString preprocess(std::span<const std::uint32_t> sigma) const override {
    EncodedTable t;
    t.reserve(m_);
    for (std::uint32_t j = 0; j < m_; ++j) t.emplace_back(sigma[j], j);
    std::sort(t.begin(), t.end());
    BitString z;
    for (auto [enc, j] : t) {
      z.push(enc, w_);
      z.push(j, w_);
    }
    return z;
  }

  QueryPlan plan(const BitString&, Rng&) const override {
    QueryPlan p;
    for (std::uint64_t i = 0; i < t_; ++i) {
      p.outer.push_back(OuterQuery{1, static_cast<std::uint32_t>(i * m_ % n_)});
    }
    return p;
  }

  Answer decide(const BitString& z, const QueryPlan&, const OracleAnswers& a, Rng&) const override {
    const EncodedTable t = readPairs(z, w_);
    for (std::size_t i = 0; i < a.outer.size(); ++i) {
      if (auto j = lookup(t, a.outer[i])) return Answer{subMod(*j, i * m_, n_)};
    }
    return Answer{0};
  }

 private:
  std::uint32_t n_;
  std::uint64_t s_, t_, m_;
  int w_;
};

// ---------------------------------------------------------------------------

class PollardRho final : public Adversary {
 public:
  explicit PollardRho(const AttackConfig& cfg) : n_(cfg.n), t_(cfg.tBudget) { requirePrime(n_, "rho"); }

  std::string name() const override { return "rho"; }
  std::uint64_t sBits() const override { return 0; }
  std::uint64_t tBudget() const override { return t_; }
  pc::Adaptivity adaptivity() const override { return pc::Adaptivity::Adaptive; }

  BitString preprocess(std::span<const std::uint32_t>) const override { return {}; }

  Answer interact(const BitString&, pc::AdaptiveOracle& oracle, Rng& coins) const override {
    const std::uint64_t n = n_;
    std::unordered_map<std::uint64_t, std::uint32_t> memo;
    struct Point {
      std::uint64_t a, b;
    };
    // Encoding of a*d + b; the constant points go through the inner oracle.
    auto encode = [&](Point p) -> std::optional<std::uint32_t> {
      const std::uint64_t key = p.a * n + p.b;
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      if (oracle.remaining() == 0) return std::nullopt;
      const std::uint32_t e = p.a == 0
                                  ? oracle.inner(static_cast<std::uint32_t>(p.b))
                                  : oracle.outer(OuterQuery{static_cast<std::uint32_t>(p.a),
                                                            static_cast<std::uint32_t>(p.b)});
      memo.emplace(key, e);
      return e;
    };

    for (;;) {
      const std::uint64_t salt = coins.below(3);
      auto step = [&](Point p) -> std::optional<Point> {
        auto e = encode(p);
        if (!e) return std::nullopt;
        switch ((*e + salt) % 3) {
          case 0: return Point{2 * p.a % n, 2 * p.b % n};
          case 1: return Point{p.a, (p.b + 1) % n};
          default: return Point{(p.a + 1) % n, p.b};
        }
      };
      const Point start{1 + coins.below(n - 1), coins.below(n)};
      Point tortoise = start, hare = start;
      for (;;) {
        auto t1 = step(tortoise);
        auto h1 = t1 ? step(hare) : std::nullopt;
        auto h2 = h1 ? step(*h1) : std::nullopt;
        if (!h2) return Answer{static_cast<std::uint32_t>(coins.below(n))};
        tortoise = *t1;
        hare = *h2;
        auto et = encode(tortoise);
        auto eh = et ? encode(hare) : std::nullopt;
        if (!eh) return Answer{static_cast<std::uint32_t>(coins.below(n))};
        if (*et != *eh) continue;
        if (tortoise.a == hare.a) break;  // same representation; restart
        const std::uint64_t inv = nt::invmod(subMod(tortoise.a, hare.a, n), n);
        return Answer{static_cast<std::uint32_t>(nt::mulmod(subMod(hare.b, tortoise.b, n), inv, n))};
      }
    }
  }

 private:
  std::uint32_t n_;
  std::uint64_t t_;
};

// ---------------------------------------------------------------------------

class ChainDlog final : public Adversary {
 public:
  explicit ChainDlog(const AttackConfig& cfg)
      : n_(cfg.n), s_(cfg.sBits), t_(cfg.tBudget), key_(mix64(cfg.seed ^ 0x636861696eULL)) {
    requirePrime(n_, "chain");
    if (n_ < 3) throw ValidationError("chain: n must be at least 3");
    w_ = fieldWidth(n_);
    chains_ = cfg.chains ? cfg.chains : s_ / (2 * static_cast<std::uint64_t>(w_));
    if (chains_ * 2 * w_ > s_) {
      throw ValidationError("chain: " + std::to_string(chains_) + " endpoints need " +
                            std::to_string(chains_ * 2 * w_) + " bits, over the " + std::to_string(s_) +
                            " declared");
    }
  }

  std::string name() const override { return "chain"; }
  std::uint64_t sBits() const override { return s_; }
  std::uint64_t tBudget() const override { return t_; }
  pc::Adaptivity adaptivity() const override { return pc::Adaptivity::Adaptive; }
  std::uint64_t chains() const { return chains_; }

  BitString preprocess(std::span<const std::uint32_t> sigma) const override {
    EncodedTable t;
    t.reserve(chains_);
    for (std::uint64_t i = 0; i < chains_; ++i) {
      std::uint32_t x = static_cast<std::uint32_t>(keyedHash(key_, i, 1) % n_);
      for (std::uint64_t k = 0; k < t_; ++k) x = (x + hop(sigma[x])) % n_;
      t.emplace_back(sigma[x], x);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    BitString z;
    for (auto [enc, x] : t) {
      z.push(enc, w_);
      z.push(x, w_);
    }
    return z;
  }

  Answer interact(const BitString& z, pc::AdaptiveOracle& oracle, Rng& coins) const override {
    const EncodedTable t = readPairs(z, w_);
    std::uint32_t offset = 0;
    for (std::uint64_t k = 0; k < t_ && oracle.remaining() > 0; ++k) {
      const std::uint32_t y = oracle.outer(OuterQuery{1, offset});
      if (auto e = lookup(t, y)) return Answer{subMod(*e, offset, n_)};
      offset = (offset + hop(y)) % n_;
    }
    return Answer{static_cast<std::uint32_t>(coins.below(n_))};
  }

 private:
  std::uint32_t hop(std::uint32_t enc) const {
    return static_cast<std::uint32_t>(1 + keyedHash(key_, enc) % (n_ - 1));
  }

  std::uint32_t n_;
  std::uint64_t s_, t_, key_, chains_;
  int w_;
};

// ---------------------------------------------------------------------------

class DaemenEm final : public Adversary {
 public:
  DaemenEm(const AttackConfig& cfg, GameKind kind)
      : n_(cfg.n), s_(cfg.sBits), t_(cfg.tBudget), alpha_(cfg.alpha), beta_(cfg.beta), kind_(kind) {
    if (kind != GameKind::EvenMansour && kind != GameKind::EvenMansourSingleKey) {
      throw ValidationError("daemen: plays em or em1k only");
    }
    if (n_ < 4 || !nt::isPowerOfTwo(n_)) throw ValidationError("daemen: n must be a power of two >= 4");
    if (alpha_ == 0 || beta_ == 0 || alpha_ == beta_ || alpha_ >= n_ || beta_ >= n_) {
      throw ValidationError("daemen: alpha and beta must be distinct nonzero values below n");
    }
    w_ = fieldWidth(n_);
    offsets_ = {0, alpha_, beta_, alpha_ ^ beta_};
    for (std::uint32_t x = 0; x < n_; ++x) {
      if (x == std::min({x ^ offsets_[1], x ^ offsets_[2], x ^ offsets_[3], x})) reps_.push_back(x);
    }
    const std::uint64_t cosets = s_ / (4 * static_cast<std::uint64_t>(w_));
    stored_ = reps_;
    Rng rng(mix64(cfg.seed ^ 0x6461656d656eULL));
    rng.shuffle(std::span<std::uint32_t>(stored_));
    stored_.resize(std::min<std::size_t>(stored_.size(), cosets));
  }

  std::string name() const override { return "daemen"; }
  std::uint64_t sBits() const override { return s_; }
  std::uint64_t tBudget() const override { return t_; }

  BitString preprocess(std::span<const std::uint32_t> sigma) const override {
    BitString z;
    for (std::uint32_t x : stored_) {
      for (std::uint32_t o : offsets_) z.push(sigma[x ^ o], w_);
    }
    return z;
  }

  QueryPlan plan(const BitString&, Rng& coins) const override {
    std::vector<std::uint32_t> ms = reps_;
    coins.shuffle(std::span<std::uint32_t>(ms));
    ms.resize(std::min<std::size_t>(ms.size(), t_ / 4));
    QueryPlan p;
    for (std::uint32_t m : ms) {
      for (std::uint32_t o : offsets_) p.outer.push_back(OuterQuery{m ^ o});
    }
    return p;
  }

  Answer decide(const BitString& z, const QueryPlan& p, const OracleAnswers& a, Rng&) const override {
    struct Entry {
      std::uint32_t key, coset, half;
      auto operator<=>(const Entry&) const = default;
    };
    const std::size_t cosets = z.size() / (4 * static_cast<std::size_t>(w_));
    std::vector<std::array<std::uint32_t, 4>> vals(cosets);
    std::vector<Entry> table;
    for (std::size_t i = 0; i < cosets; ++i) {
      for (int k = 0; k < 4; ++k) vals[i][k] = static_cast<std::uint32_t>(z.read((4 * i + k) * w_, w_));
      table.push_back({vals[i][0] ^ vals[i][1], static_cast<std::uint32_t>(i), 0});
      table.push_back({vals[i][2] ^ vals[i][3], static_cast<std::uint32_t>(i), 1});
    }
    std::sort(table.begin(), table.end());

    auto sigmaAt = [&](std::uint32_t coset, std::uint32_t point) {
      const std::uint32_t rel = point ^ stored_[coset];
      return vals[coset][std::find(offsets_.begin(), offsets_.end(), rel) - offsets_.begin()];
    };

    for (std::size_t j = 0; j + 3 < p.outer.size(); j += 4) {
      const std::uint32_t m = p.outer[j][0];
      const std::uint32_t y0 = a.outer[j], y1 = a.outer[j + 1], y2 = a.outer[j + 2], y3 = a.outer[j + 3];
      const std::uint32_t key = y0 ^ y1;
      for (auto it = std::lower_bound(table.begin(), table.end(), Entry{key, 0, 0});
           it != table.end() && it->key == key; ++it) {
        const std::uint32_t base = stored_[it->coset] ^ (it->half ? beta_ : 0);
        for (std::uint32_t u : {base, base ^ alpha_}) {
          const std::uint32_t k1 = m ^ u;
          const std::uint32_t k2 = y0 ^ sigmaAt(it->coset, u);
          if (y2 != (k2 ^ sigmaAt(it->coset, u ^ beta_))) continue;
          if (y3 != (k2 ^ sigmaAt(it->coset, u ^ alpha_ ^ beta_))) continue;
          if (kind_ == GameKind::EvenMansourSingleKey) {
            if (k1 == k2) return Answer{k1};
          } else {
            return Answer{k1, k2};
          }
        }
      }
    }
    return kind_ == GameKind::EvenMansourSingleKey ? Answer{0} : Answer{0, 0};
  }

 private:
  std::uint32_t n_;
  std::uint64_t s_, t_;
  std::uint32_t alpha_, beta_;
  GameKind kind_;
  int w_;
  std::array<std::uint32_t, 4> offsets_{};
  std::vector<std::uint32_t> reps_;
  std::vector<std::uint32_t> stored_;
};

// ---------------------------------------------------------------------------

class SqDdhMajority final : public Adversary {
 public:
  explicit SqDdhMajority(const AttackConfig& cfg) : n_(cfg.n), s_(cfg.sBits), t_(cfg.tBudget) {
    requirePrime(n_, "sqddh");
    if (n_ < 3) throw ValidationError("sqddh: n must be at least 3");
    buckets_ = cfg.buckets ? cfg.buckets : s_;
    if (buckets_ == 0) throw ValidationError("sqddh: needs at least one bucket");
    if (buckets_ > s_) {
      throw ValidationError("sqddh: " + std::to_string(buckets_) + " buckets exceed the " +
                            std::to_string(s_) + " declared bits");
    }
    if (t_ < 2) throw ValidationError("sqddh: needs T >= 2");
    const std::uint64_t base = mix64(cfg.seed ^ 0x73716464680000ULL);
    keyP_ = mix64(base + 1);
    keyQ_ = mix64(base + 2);
    keyG_ = mix64(base + 3);
    const std::uint64_t keyF = mix64(base + 4);
    walk_.push_back(1);
    for (std::uint64_t i = 1; i < t_ / 2; ++i) {
      walk_.push_back(static_cast<std::uint32_t>(1 + keyedHash(keyF, i) % (n_ - 1)));
    }
  }

  std::string name() const override { return "sqddh"; }
  std::uint64_t sBits() const override { return s_; }
  std::uint64_t tBudget() const override { return t_; }

  BitString preprocess(std::span<const std::uint32_t> sigma) const override {
    std::vector<std::int64_t> vote(buckets_, 0);
    for (std::uint64_t x = 0; x < n_; ++x) {
      const std::uint32_t a = sigma[x], b = sigma[x * x % n_];
      if (!special(a, b)) continue;
      vote[bucket(a, b)] += q(a, b) ? 1 : -1;
    }
    BitString z;
    for (std::int64_t v : vote) z.push(v > 0 ? 1 : 0, 1);
    return z;
  }

  QueryPlan plan(const BitString&, Rng&) const override {
    QueryPlan p;
    for (std::uint32_t f : walk_) {
      p.outer.push_back(OuterQuery{f, 0, 0});
      p.outer.push_back(OuterQuery{0, static_cast<std::uint32_t>(std::uint64_t{f} * f % n_), 0});
    }
    return p;
  }

  Answer decide(const BitString& z, const QueryPlan&, const OracleAnswers& ans, Rng& coins) const override {
    for (std::size_t i = 0; i + 1 < ans.outer.size(); i += 2) {
      const std::uint32_t a = ans.outer[i], b = ans.outer[i + 1];
      if (!special(a, b)) continue;
      const bool maj = z.read(bucket(a, b), 1) != 0;
      return Answer{q(a, b) == maj ? 1u : 0u};
    }
    return Answer{coins.coin() ? 1u : 0u};
  }

 private:
  bool special(std::uint32_t a, std::uint32_t b) const { return keyedHash(keyP_, a, b) % t_ == 0; }
  bool q(std::uint32_t a, std::uint32_t b) const { return (keyedHash(keyQ_, a, b) & 1u) != 0; }
  std::size_t bucket(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::size_t>(keyedHash(keyG_, a, b) % buckets_);
  }

  std::uint32_t n_;
  std::uint64_t s_, t_, buckets_;
  std::uint64_t keyP_, keyQ_, keyG_;
  std::vector<std::uint32_t> walk_;
};

// ---------------------------------------------------------------------------

class Guess final : public Adversary {
 public:
  Guess(const pc::PCGame& game, const AttackConfig& cfg) : s_(cfg.sBits), t_(cfg.tBudget) {
    Rng rng(mix64(cfg.seed ^ 0x6775657373ULL));
    answer_ = game.successTarget(game.secrets.sample(rng));
  }

  std::string name() const override { return "guess"; }
  std::uint64_t sBits() const override { return s_; }
  std::uint64_t tBudget() const override { return t_; }
  BitString preprocess(std::span<const std::uint32_t>) const override { return {}; }
  QueryPlan plan(const BitString&, Rng&) const override { return {}; }
  Answer decide(const BitString&, const QueryPlan&, const OracleAnswers&, Rng&) const override {
    return answer_;
  }

 private:
  std::uint64_t s_, t_;
  Answer answer_;
};

}  // namespace

std::unique_ptr<Adversary> bsgsAdversary(const AttackConfig& cfg) { return std::make_unique<Bsgs>(cfg); }

std::unique_ptr<Adversary> pollardRhoAdversary(const AttackConfig& cfg) {
  return std::make_unique<PollardRho>(cfg);
}

std::unique_ptr<Adversary> chainPreprocessingDlog(const AttackConfig& cfg) {
  return std::make_unique<ChainDlog>(cfg);
}

std::unique_ptr<Adversary> daemenEmAdversary(const AttackConfig& cfg, GameKind kind) {
  return std::make_unique<DaemenEm>(cfg, kind);
}

std::unique_ptr<Adversary> sqddhNonAdaptiveAdversary(const AttackConfig& cfg) {
  return std::make_unique<SqDdhMajority>(cfg);
}

std::unique_ptr<Adversary> guessAdversary(const pc::PCGame& game, const AttackConfig& cfg) {
  return std::make_unique<Guess>(game, cfg);
}

std::vector<std::string> attackNames() { return {"bsgs", "rho", "chain", "daemen", "sqddh", "guess"}; }

std::unique_ptr<Adversary> makeAdversary(const std::string& name, const pc::PCGame& game,
                                         const AttackConfig& cfg) {
  if (cfg.n != game.n) throw ValidationError("attack configured for n=" + std::to_string(cfg.n) +
                                             " but the game has n=" + std::to_string(game.n));
  auto need = [&](std::initializer_list<GameKind> kinds) {
    if (std::find(kinds.begin(), kinds.end(), game.kind) == kinds.end()) {
      throw ValidationError("attack '" + name + "' does not play " + pc::gameToken(game.kind));
    }
  };
  if (name == "bsgs") return need({GameKind::Dlog}), bsgsAdversary(cfg);
  if (name == "rho") return need({GameKind::Dlog}), pollardRhoAdversary(cfg);
  if (name == "chain") return need({GameKind::Dlog}), chainPreprocessingDlog(cfg);
  if (name == "daemen") {
    need({GameKind::EvenMansour, GameKind::EvenMansourSingleKey});
    return daemenEmAdversary(cfg, game.kind);
  }
  if (name == "sqddh") return need({GameKind::SqDdh}), sqddhNonAdaptiveAdversary(cfg);
  if (name == "guess") return guessAdversary(game, cfg);
  throw ValidationError("unknown attack '" + name + "'");
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> miMultipliers(std::uint32_t n, std::uint64_t t) {
  requirePrime(n, "mi");
  if (t < 2 || t >= n - 1) throw ValidationError("mi: need 2 <= T < n - 1");
  const std::uint64_t g = nt::primitiveRoot(n);
  const std::uint64_t ginv = nt::invmod(g, n);
  const std::uint64_t order = n - 1;
  std::vector<std::uint32_t> a;
  a.reserve(t);
  for (std::uint64_t i = 1; i <= t; ++i) {
    const std::uint64_t v = i <= t / 2 ? nt::powmod(ginv, i, n) : nt::powmod(g, (i - t / 2) * t % order, n);
    a.push_back(static_cast<std::uint32_t>(v));
  }
  return a;
}

MiResult runMiGame(const AttackConfig& cfg) {
  const std::uint32_t n = cfg.n;
  const std::uint64_t t = cfg.tBudget;
  const std::vector<std::uint32_t> a = miMultipliers(n, t);
  if (!(cfg.thresholdConstant >= 0.0)) throw ValidationError("mi: threshold constant must be >= 0");
  const double ratio = static_cast<double>(n) / static_cast<double>(t * t);

  MiResult r;
  r.instances = cfg.instances ? cfg.instances : 4 * static_cast<std::uint64_t>(std::ceil(ratio));
  r.threshold = std::min<std::uint64_t>(r.instances,
                                        static_cast<std::uint64_t>(std::ceil(cfg.thresholdConstant * ratio)));

  Rng rng(cfg.seed);
  Rng coins(mix64(cfg.seed ^ kGoldenGamma));
  MiGameState state;
  state.sigma = pc::samplePermutation(n, rng);
  state.perInstanceQueries = t;
  for (std::uint64_t i = 0; i < r.instances; ++i) {
    state.instanceSecrets.push_back(static_cast<std::uint32_t>(rng.below(n)));
  }
  constexpr std::uint32_t kUnseen = ~0u;
  state.answersSoFar.assign(n, {kUnseen, 0});

  // Discrete logs base g, for the coverage statistic only.
  const std::uint64_t g = nt::primitiveRoot(n);
  const std::uint64_t order = n - 1;
  std::vector<std::uint32_t> dlog(n, 0);
  for (std::uint64_t e = 0, x = 1; e < order; ++e, x = x * g % n) dlog[x] = static_cast<std::uint32_t>(e);
  std::vector<char> hit(order, 0);
  auto measureCoverage = [&] {
    const std::uint64_t len = t / 2;
    std::vector<std::uint32_t> prefix(2 * order + 1, 0);
    for (std::uint64_t i = 0; i < 2 * order; ++i) prefix[i + 1] = prefix[i] + hit[i % order];
    std::uint64_t covered = 0;
    for (std::uint64_t s = 0; s < order; ++s) covered += prefix[s + len] > prefix[s];
    r.windowCoverage = static_cast<double>(covered) / static_cast<double>(order);
    r.intervalsCovered = covered == order;
  };
  if (r.threshold == 0) measureCoverage();

  std::vector<std::uint32_t> belief(r.instances);
  std::uint64_t determined = 0;
  for (std::uint64_t i = 0; i < r.instances; ++i) {
    const std::uint32_t d = state.instanceSecrets[i];
    std::vector<std::uint32_t> ys(t);
    for (std::uint64_t j = 0; j < t; ++j) ys[j] = state.sigma[std::uint64_t{a[j]} * d % n];

    bool solved = false;
    for (std::uint64_t j = 0; j < t && !solved; ++j) {
      const auto [prev, pj] = state.answersSoFar[ys[j]];
      if (prev == kUnseen) continue;
      // a_j d_i = a_pj d_prev
      const std::uint64_t factor = nt::mulmod(a[pj], nt::invmod(a[j], n), n);
      belief[i] = static_cast<std::uint32_t>(nt::mulmod(factor, belief[prev], n));
      solved = true;
    }
    if (!solved) {
      belief[i] = cfg.forceGuesses && i < r.threshold ? d : static_cast<std::uint32_t>(coins.below(n));
    } else if (i >= r.threshold) {
      ++determined;
    }

    for (std::uint64_t j = 0; j < t; ++j) {
      if (state.answersSoFar[ys[j]].first == kUnseen) {
        state.answersSoFar[ys[j]] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
      }
      if (d != 0) hit[(dlog[a[j]] + dlog[d]) % order] = 1;
    }
    if (i + 1 == r.threshold) measureCoverage();
  }

  r.allCorrect = std::equal(belief.begin(), belief.end(), state.instanceSecrets.begin());
  const std::uint64_t post = r.instances - r.threshold;
  r.determinedFraction = post ? static_cast<double>(determined) / static_cast<double>(post) : 0.0;
  return r;
}

}  // namespace permchal::attacks
