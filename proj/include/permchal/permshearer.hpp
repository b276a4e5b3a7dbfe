#pragma once

// Distributions over bijections [n] -> X and the Shearer-type inequalities
// over them, evaluated by exhaustive enumeration. Domain indices are 0-based.

#include "permchal/infotheory.hpp"
#include "permchal/permutation.hpp"
#include "permchal/random.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

namespace permchal::shearer {

using info::FiniteDistribution;
using info::ValidationError;

/// Largest n for which n! masses are enumerated.
inline constexpr int kMaxEnumeration = 8;

using IndexSet = std::vector<int>;

class BijectionDistribution {
 public:
  /// mass has length n!, indexed by permutation rank. The codomain defaults
  /// to 0..n-1.
  BijectionDistribution(int n, Eigen::VectorXd mass,
                        std::vector<std::int64_t> codomain = {});

  static BijectionDistribution uniform(int n);
  static BijectionDistribution pointMass(int n, std::uint64_t rank);
  /// Symmetric Dirichlet(1) over the n! masses.
  static BijectionDistribution dirichlet(int n, Rng& rng);

  int n() const { return n_; }
  const Eigen::VectorXd& mass() const { return mass_; }
  const std::vector<std::int64_t>& codomain() const { return codomain_; }

  /// Labels are the images (as codomain values) of 0..n-1.
  FiniteDistribution toFinite() const;

 private:
  int n_;
  Eigen::VectorXd mass_;
  std::vector<std::int64_t> codomain_;
};

class CoverFamily {
 public:
  /// k is the largest number of sets containing any index. A declared k
  /// smaller than that is rejected; a larger one is kept.
  CoverFamily(int n, std::vector<IndexSet> sets, std::optional<int> k = {});

  static CoverFamily singletons(int n);
  /// Between 1 and maxSets random subsets, each index kept with
  /// probability 1/2.
  static CoverFamily random(int n, int maxSets, Rng& rng);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<IndexSet>& sets() const { return sets_; }

 private:
  int n_;
  int k_;
  std::vector<IndexSet> sets_;
};

/// A function of the images of its dependency coordinates. values is
/// indexed by rankInjectiveTuple of those images; assignments that cannot
/// come from a bijection are never looked up.
struct ReadKFunction {
  IndexSet deps;
  Eigen::VectorXd values;
};

class ReadKFamily {
 public:
  ReadKFamily(int n, std::vector<ReadKFunction> functions, std::optional<int> k = {});

  using Callable = std::function<double(std::size_t j, std::span<const std::uint32_t> images)>;
  static ReadKFamily fromCallable(int n, std::vector<IndexSet> deps, const Callable& f,
                                  std::optional<int> k = {});
  /// Random dependency sets (as CoverFamily::random) with uniform values.
  static ReadKFamily random(int n, int maxFunctions, Rng& rng);

  int n() const { return cover_.n(); }
  int k() const { return cover_.k(); }
  const CoverFamily& cover() const { return cover_; }
  const std::vector<ReadKFunction>& functions() const { return functions_; }

  double evaluate(std::size_t j, std::span<const std::uint32_t> permutation) const;

 private:
  CoverFamily cover_;
  std::vector<ReadKFunction> functions_;
};

/// Mass of (X_i)_{i in u} indexed by injective-tuple rank; zero-mass tuples
/// included so marginals of different distributions align.
Eigen::VectorXd marginalMass(const BijectionDistribution& p, const IndexSet& u);
FiniteDistribution marginal(const BijectionDistribution& p, const IndexSet& u);

/// KL(P || uniform over bijections).
double klToUniform(const BijectionDistribution& p);

/// c * k * KL(P || Q) - sum_j KL(P_{U_j} || Q_{U_j}) with Q uniform.
double bijectionShearerGap(const BijectionDistribution& p, const CoverFamily& cover,
                           double c);

/// k * KL(P || Q) - sum_j KL(P_{U_j} || Q_{U_j}) with Q uniform over the
/// product of the axes. Cover indices are axis positions.
double productShearerGap(const info::JointDistribution& p, const CoverFamily& cover);

/// 2k * KL(P || Q) - m * klBernoulli(mean E_P f_j, mean E_Q f_j), Q uniform.
double readKConcentrationGap(const BijectionDistribution& p, const ReadKFamily& fam);

/// Indicator vectors of length n as labels; entry i is the vector with a
/// single 1 at position i.
std::vector<info::Label> indicatorVectors(int n);

/// 9k * KL(P || Q) - sum_j KL(P_{U_j} || Q_{U_j}) where P lives on the n
/// indicator vectors and Q is uniform on them.
double indicatorShearerGap(const FiniteDistribution& p, const CoverFamily& cover);

/// 4 sum_i (p_i ln(n p_i) - eps_i) - (n p' ln(n p') - n eps') with
/// p' = (1 - sum p_i) / (n - l), eps_i = p_i - 1/n, eps' = p' - 1/n.
double technicalLemmaGap(int n, std::span<const double> probs);

struct ExtremalResult {
  double bestRatio = 0.0;
  BijectionDistribution witness;
};

/// Maximises sum_j KL(P_{U_j} || Q_{U_j}) / (k KL(P || Q)) over point masses,
/// Dirichlet starts, and a hill climb from each start.
ExtremalResult extremalRatioSearch(int n, const CoverFamily& cover, int trials,
                                   std::uint64_t seed);

}  // namespace permchal::shearer
