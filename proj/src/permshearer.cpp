#include "permchal/permshearer.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace permchal::shearer {

namespace {

const std::vector<Permutation>& permutationTable(int n) {
  static const auto tables = [] {
    std::array<std::vector<Permutation>, kMaxEnumeration + 1> t;
    for (int i = 0; i <= kMaxEnumeration; ++i) t[static_cast<std::size_t>(i)] = allPermutations(i);
    return t;
  }();
  return tables[static_cast<std::size_t>(n)];
}

void requireEnumerable(int n) {
  if (n < 1 || n > kMaxEnumeration) {
    throw ValidationError("n must lie in [1, " + std::to_string(kMaxEnumeration) + "]");
  }
}

void validateIndexSet(int n, const IndexSet& u) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i : u) {
    if (i < 0 || i >= n) throw ValidationError("index set out of range");
    if (seen[static_cast<std::size_t>(i)]) throw ValidationError("index set has a repeat");
    seen[static_cast<std::size_t>(i)] = true;
  }
}

/// For each permutation rank, the injective-tuple rank of its restriction
/// to u.
std::vector<std::uint32_t> restrictionIndex(int n, const IndexSet& u) {
  const auto& perms = permutationTable(n);
  std::vector<std::uint32_t> index(perms.size());
  std::vector<std::uint32_t> tuple(u.size());
  for (std::size_t r = 0; r < perms.size(); ++r) {
    for (std::size_t j = 0; j < u.size(); ++j) tuple[j] = perms[r][static_cast<std::size_t>(u[j])];
    index[r] = static_cast<std::uint32_t>(rankInjectiveTuple(n, tuple));
  }
  return index;
}

Eigen::VectorXd aggregate(const Eigen::VectorXd& mass, const std::vector<std::uint32_t>& index,
                          std::uint64_t outSize) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outSize));
  for (std::size_t r = 0; r < index.size(); ++r) {
    out(index[r]) += mass(static_cast<Eigen::Index>(r));
  }
  return out;
}

int multiplicity(int n, const std::vector<IndexSet>& sets) {
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (const auto& s : sets) {
    for (int i : s) ++count[static_cast<std::size_t>(i)];
  }
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

/// Sum of marginal KLs against the uniform distribution on bijections.
double marginalKlSum(const BijectionDistribution& p, const CoverFamily& cover) {
  double sum = 0.0;
  for (const auto& u : cover.sets()) {
    if (u.empty()) continue;
    const auto count = injectiveTupleCount(p.n(), static_cast<int>(u.size()));
    sum += info::klToUniform(aggregate(p.mass(), restrictionIndex(p.n(), u), count));
  }
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------

BijectionDistribution::BijectionDistribution(int n, Eigen::VectorXd mass,
                                             std::vector<std::int64_t> codomain)
    : n_(n), mass_(std::move(mass)), codomain_(std::move(codomain)) {
  requireEnumerable(n_);
  if (static_cast<std::uint64_t>(mass_.size()) != factorial(n_)) {
    throw ValidationError("BijectionDistribution: mass must have n! entries");
  }
  if ((mass_.array() < 0.0).any() || !mass_.allFinite() ||
      std::abs(mass_.sum() - 1.0) > info::kMassTol) {
    throw ValidationError("BijectionDistribution: masses must be >= 0 and sum to 1");
  }
  if (codomain_.empty()) {
    codomain_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) codomain_[static_cast<std::size_t>(i)] = i;
  }
  if (static_cast<int>(codomain_.size()) != n_) {
    throw ValidationError("BijectionDistribution: codomain must have n elements");
  }
  auto sorted = codomain_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("BijectionDistribution: codomain has a repeat");
  }
}

BijectionDistribution BijectionDistribution::uniform(int n) {
  requireEnumerable(n);
  const auto count = static_cast<Eigen::Index>(factorial(n));
  return {n, Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count))};
}

BijectionDistribution BijectionDistribution::pointMass(int n, std::uint64_t rank) {
  requireEnumerable(n);
  if (rank >= factorial(n)) throw ValidationError("pointMass: rank out of range");
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(factorial(n)));
  mass(static_cast<Eigen::Index>(rank)) = 1.0;
  return {n, std::move(mass)};
}

BijectionDistribution BijectionDistribution::dirichlet(int n, Rng& rng) {
  requireEnumerable(n);
  Eigen::VectorXd mass(static_cast<Eigen::Index>(factorial(n)));
  for (Eigen::Index i = 0; i < mass.size(); ++i) mass(i) = rng.exponential();
  mass /= mass.sum();
  return {n, std::move(mass)};
}

FiniteDistribution BijectionDistribution::toFinite() const {
  const auto& perms = permutationTable(n_);
  std::vector<info::Label> labels;
  labels.reserve(perms.size());
  for (const auto& p : perms) {
    info::Label l(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) l[i] = codomain_[p[i]];
    labels.push_back(std::move(l));
  }
  return {std::move(labels), mass_};
}

// ---------------------------------------------------------------------------

CoverFamily::CoverFamily(int n, std::vector<IndexSet> sets, std::optional<int> k)
    : n_(n), k_(0), sets_(std::move(sets)) {
  if (n_ < 1) throw ValidationError("CoverFamily: n must be positive");
  for (const auto& s : sets_) validateIndexSet(n_, s);
  k_ = multiplicity(n_, sets_);
  if (k) {
    if (*k < k_) {
      throw ValidationError("CoverFamily: an index lies in " + std::to_string(k_) +
                            " sets, more than the declared k = " + std::to_string(*k));
    }
    k_ = *k;
  }
}

CoverFamily CoverFamily::singletons(int n) {
  std::vector<IndexSet> sets;
  for (int i = 0; i < n; ++i) sets.push_back({i});
  return {n, std::move(sets)};
}

CoverFamily CoverFamily::random(int n, int maxSets, Rng& rng) {
  if (maxSets < 1) throw ValidationError("CoverFamily::random: maxSets must be positive");
  const auto m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxSets)));
  std::vector<IndexSet> sets(static_cast<std::size_t>(m));
  for (auto& s : sets) {
    for (int i = 0; i < n; ++i) {
      if (rng.coin()) s.push_back(i);
    }
  }
  return {n, std::move(sets)};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<IndexSet> depsOf(const std::vector<ReadKFunction>& fns) {
  std::vector<IndexSet> deps;
  deps.reserve(fns.size());
  for (const auto& f : fns) deps.push_back(f.deps);
  return deps;
}

}  // namespace

ReadKFamily::ReadKFamily(int n, std::vector<ReadKFunction> functions, std::optional<int> k)
    : cover_(n, depsOf(functions), k), functions_(std::move(functions)) {
  requireEnumerable(n);
  for (const auto& f : functions_) {
    const auto expected = injectiveTupleCount(n, static_cast<int>(f.deps.size()));
    if (static_cast<std::uint64_t>(f.values.size()) != expected) {
      throw ValidationError("ReadKFamily: value table has the wrong length");
    }
    if ((f.values.array() < 0.0).any() || (f.values.array() > 1.0).any() ||
        !f.values.allFinite()) {
      throw ValidationError("ReadKFamily: function values must lie in [0, 1]");
    }
  }
}

ReadKFamily ReadKFamily::fromCallable(int n, std::vector<IndexSet> deps, const Callable& f,
                                      std::optional<int> k) {
  requireEnumerable(n);
  std::vector<ReadKFunction> fns;
  fns.reserve(deps.size());
  for (std::size_t j = 0; j < deps.size(); ++j) {
    validateIndexSet(n, deps[j]);
    const int width = static_cast<int>(deps[j].size());
    const auto count = injectiveTupleCount(n, width);
    Eigen::VectorXd values(static_cast<Eigen::Index>(count));
    for (std::uint64_t r = 0; r < count; ++r) {
      values(static_cast<Eigen::Index>(r)) = f(j, unrankInjectiveTuple(n, width, r));
    }
    fns.push_back({std::move(deps[j]), std::move(values)});
  }
  return {n, std::move(fns), k};
}

ReadKFamily ReadKFamily::random(int n, int maxFunctions, Rng& rng) {
  const CoverFamily cover = CoverFamily::random(n, maxFunctions, rng);
  std::vector<ReadKFunction> fns;
  for (const auto& u : cover.sets()) {
    const auto count = injectiveTupleCount(n, static_cast<int>(u.size()));
    Eigen::VectorXd values(static_cast<Eigen::Index>(count));
    for (Eigen::Index r = 0; r < values.size(); ++r) values(r) = rng.uniform();
    fns.push_back({u, std::move(values)});
  }
  return {n, std::move(fns)};
}

double ReadKFamily::evaluate(std::size_t j, std::span<const std::uint32_t> permutation) const {
  const auto& f = functions_.at(j);
  std::vector<std::uint32_t> images;
  images.reserve(f.deps.size());
  for (int i : f.deps) images.push_back(permutation[static_cast<std::size_t>(i)]);
  return f.values(static_cast<Eigen::Index>(rankInjectiveTuple(n(), images)));
}

// ---------------------------------------------------------------------------

Eigen::VectorXd marginalMass(const BijectionDistribution& p, const IndexSet& u) {
  validateIndexSet(p.n(), u);
  const auto count = injectiveTupleCount(p.n(), static_cast<int>(u.size()));
  return aggregate(p.mass(), restrictionIndex(p.n(), u), count);
}

FiniteDistribution marginal(const BijectionDistribution& p, const IndexSet& u) {
  Eigen::VectorXd mass = marginalMass(p, u);
  const int width = static_cast<int>(u.size());
  std::vector<info::Label> labels;
  labels.reserve(static_cast<std::size_t>(mass.size()));
  for (Eigen::Index r = 0; r < mass.size(); ++r) {
    const auto t = unrankInjectiveTuple(p.n(), width, static_cast<std::uint64_t>(r));
    info::Label l(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) l[i] = p.codomain()[t[i]];
    labels.push_back(std::move(l));
  }
  // Aggregation can drift the total by a few ulps.
  mass /= mass.sum();
  return {std::move(labels), std::move(mass)};
}

double klToUniform(const BijectionDistribution& p) { return info::klToUniform(p.mass()); }

double bijectionShearerGap(const BijectionDistribution& p, const CoverFamily& cover, double c) {
  if (cover.n() != p.n()) throw ValidationError("bijectionShearerGap: cover is over a different n");
  return c * cover.k() * klToUniform(p) - marginalKlSum(p, cover);
}

double productShearerGap(const info::JointDistribution& p, const CoverFamily& cover) {
  if (static_cast<std::size_t>(cover.n()) != p.axes().size()) {
    throw ValidationError("productShearerGap: cover is over a different number of axes");
  }
  double sum = 0.0;
  for (const auto& u : cover.sets()) {
    if (u.empty()) continue;
    info::AxisSet names;
    for (int i : u) names.push_back(p.axes()[static_cast<std::size_t>(i)].name);
    sum += info::klToUniform(p.marginal(names).mass());
  }
  return cover.k() * info::klToUniform(p.mass()) - sum;
}

double readKConcentrationGap(const BijectionDistribution& p, const ReadKFamily& fam) {
  if (fam.n() != p.n()) throw ValidationError("readKConcentrationGap: family is over a different n");
  const auto& fns = fam.functions();
  if (fns.empty()) return 2.0 * fam.k() * klToUniform(p);
  const double uniformWeight = 1.0 / static_cast<double>(p.mass().size());
  double pSum = 0.0;
  double qSum = 0.0;
  for (const auto& f : fns) {
    const auto index = restrictionIndex(p.n(), f.deps);
    for (std::size_t r = 0; r < index.size(); ++r) {
      const double v = f.values(index[r]);
      pSum += p.mass()(static_cast<Eigen::Index>(r)) * v;
      qSum += uniformWeight * v;
    }
  }
  const double m = static_cast<double>(fns.size());
  const double pBar = std::clamp(pSum / m, 0.0, 1.0);
  const double qBar = std::clamp(qSum / m, 0.0, 1.0);
  return 2.0 * fam.k() * klToUniform(p) - m * info::klBernoulli(pBar, qBar);
}

std::vector<info::Label> indicatorVectors(int n) {
  std::vector<info::Label> out;
  for (int i = 0; i < n; ++i) {
    info::Label v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = 1;
    out.push_back(std::move(v));
  }
  return out;
}

double indicatorShearerGap(const FiniteDistribution& p, const CoverFamily& cover) {
  const int n = cover.n();
  if (static_cast<int>(p.size()) != n) {
    throw ValidationError("indicatorShearerGap: support must be the n indicator vectors");
  }
  for (const auto& l : p.support()) {
    if (static_cast<int>(l.size()) != n ||
        std::count(l.begin(), l.end(), 1) != 1 ||
        std::count(l.begin(), l.end(), 0) != n - 1) {
      throw ValidationError("indicatorShearerGap: support must be the n indicator vectors");
    }
  }
  const FiniteDistribution q = FiniteDistribution::uniform(p.support());
  double sum = 0.0;
  for (const auto& u : cover.sets()) {
    if (u.empty()) continue;
    std::vector<std::size_t> coords(u.begin(), u.end());
    sum += info::klDivergence(info::project(p, coords), info::project(q, coords));
  }
  return 9.0 * cover.k() * info::klDivergence(p, q) - sum;
}

double technicalLemmaGap(int n, std::span<const double> probs) {
  const auto l = static_cast<int>(probs.size());
  if (n < 1 || 4 * l > n) throw ValidationError("technicalLemmaGap: need 4 * l <= n");
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("technicalLemmaGap: p_i must lie in (0, 1)");
    total += p;
  }
  if (total > 1.0 + info::kMassTol) throw ValidationError("technicalLemmaGap: sum of p_i exceeds 1");
  const double nn = static_cast<double>(n);
  double lhs = 0.0;
  for (double p : probs) lhs += p * std::log(nn * p) - (p - 1.0 / nn);
  const double pPrime = std::max(0.0, 1.0 - total) / static_cast<double>(n - l);
  const double npPrime = nn * pPrime;
  const double rest = (npPrime > 0.0 ? npPrime * std::log(npPrime) : 0.0) - nn * (pPrime - 1.0 / nn);
  return 4.0 * lhs - rest;
}

// ---------------------------------------------------------------------------

namespace {

struct RatioEvaluator {
  int n;
  const CoverFamily& cover;
  std::vector<std::vector<std::uint32_t>> indices;
  std::vector<std::uint64_t> counts;

  RatioEvaluator(int n_, const CoverFamily& c) : n(n_), cover(c) {
    for (const auto& u : c.sets()) {
      if (u.empty()) continue;
      indices.push_back(restrictionIndex(n, u));
      counts.push_back(injectiveTupleCount(n, static_cast<int>(u.size())));
    }
  }

  /// nullopt when KL(P || Q) vanishes and the ratio is undefined.
  std::optional<double> operator()(const Eigen::VectorXd& mass) const {
    const double kl = info::klToUniform(mass);
    if (kl <= 1e-14) return std::nullopt;
    if (cover.k() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      sum += info::klToUniform(aggregate(mass, indices[j], counts[j]));
    }
    return sum / (cover.k() * kl);
  }
};

}  // namespace

ExtremalResult extremalRatioSearch(int n, const CoverFamily& cover, int trials,
                                   std::uint64_t seed) {
  requireEnumerable(n);
  if (n > 6) throw ValidationError("extremalRatioSearch: n must be at most 6");
  if (cover.n() != n) throw ValidationError("extremalRatioSearch: cover is over a different n");
  if (trials < 0) throw ValidationError("extremalRatioSearch: negative trial count");

  constexpr int kClimbSteps = 200;
  constexpr double kStepScale = 1.0;
  constexpr double kMinImprovement = 1e-12;

  const RatioEvaluator ratio(n, cover);
  const auto count = factorial(n);
  ExtremalResult best{0.0, BijectionDistribution::pointMass(n, 0)};

  for (std::uint64_t r = 0; r < count; ++r) {
    auto candidate = BijectionDistribution::pointMass(n, r);
    if (auto v = ratio(candidate.mass()); v && *v > best.bestRatio + kMinImprovement) {
      best = {*v, std::move(candidate)};
    }
  }

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd current = BijectionDistribution::dirichlet(n, rng).mass();
    auto currentRatio = ratio(current);
    if (!currentRatio) continue;
    for (int step = 0; step < kClimbSteps; ++step) {
      Eigen::VectorXd next = current;
      const auto i = static_cast<Eigen::Index>(rng.below(count));
      next(i) *= std::exp(kStepScale * (2.0 * rng.uniform() - 1.0));
      next /= next.sum();
      if (auto v = ratio(next); v && *v > *currentRatio + kMinImprovement) {
        current = std::move(next);
        currentRatio = v;
      }
    }
    if (*currentRatio > best.bestRatio + kMinImprovement) {
      best = {*currentRatio, BijectionDistribution(n, current)};
    }
  }
  return best;
}

}  // namespace permchal::shearer
