#pragma once

// Entropy, KL divergence and mutual information over explicit finite
// distributions. All logarithms are natural; results are in nats.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace permchal::info {

/// KL divergence when the support of P is not contained in the support of
/// Q. Compares greater than every finite value.
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Tolerance for algebraic identities (chain rules, decompositions).
inline constexpr double kIdentityTol = 1e-10;
/// Tolerance for normalisation and non-negativity.
inline constexpr double kMassTol = 1e-12;

inline bool isInfinite(double v) { return v == kInfinite; }

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Dense kernels. These take any Eigen vector expression and are what the
// distribution types below (and the bijection code) reduce to.

/// H(p) = sum p ln(1/p), with 0 ln(1/0) = 0.
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar h(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i);
    if (pi > Scalar(0)) h -= pi * std::log(pi);
  }
  return h;
}

/// KL(p || q) over aligned mass vectors; kInfinite if p puts mass where q
/// does not.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar klDivergence(const Eigen::MatrixBase<DerivedP>& p,
                                       const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) {
    throw ValidationError("klDivergence: mass vectors differ in length");
  }
  Scalar kl(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i);
    if (pi <= Scalar(0)) continue;
    const Scalar qi = q(i);
    if (qi <= Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    kl += pi * std::log(pi / qi);
  }
  // Rounding can leave a tiny negative value for p == q.
  return kl < Scalar(0) ? Scalar(0) : kl;
}

/// KL(p || uniform) for a vector of length K: ln K - H(p).
template <typename Derived>
typename Derived::Scalar klToUniform(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const Scalar kl = std::log(static_cast<Scalar>(p.size())) - entropy(p);
  return kl < Scalar(0) ? Scalar(0) : kl;
}

/// KL between Bernoulli(p) and Bernoulli(q).
double klBernoulli(double p, double q);

// ---------------------------------------------------------------------------

/// Outcome label. Tuples are the common case (joint outcomes, injective
/// tuples of a bijection); scalar outcomes are one-element labels.
using Label = std::vector<std::int64_t>;

class FiniteDistribution {
 public:
  /// Validates: equal lengths, masses >= 0, sum within kMassTol of 1,
  /// distinct labels.
  FiniteDistribution(std::vector<Label> support, Eigen::VectorXd mass);

  static FiniteDistribution uniform(std::vector<Label> support);
  static FiniteDistribution pointMass(std::vector<Label> support,
                                      std::size_t at);
  /// Labels {0}, {1}, ..., {k-1}.
  static std::vector<Label> range(std::size_t k);

  const std::vector<Label>& support() const { return support_; }
  const Eigen::VectorXd& mass() const { return mass_; }
  std::size_t size() const { return support_.size(); }
  double operator[](std::size_t i) const { return mass_(static_cast<Eigen::Index>(i)); }

 private:
  std::vector<Label> support_;
  Eigen::VectorXd mass_;
};

double entropy(const FiniteDistribution& p);

/// Supports must be the same label sequence.
double klDivergence(const FiniteDistribution& p, const FiniteDistribution& q);

/// lambda * a + (1 - lambda) * b over a shared support.
FiniteDistribution mixture(double lambda, const FiniteDistribution& a,
                           const FiniteDistribution& b);

/// Distribution of f(X). Image labels are ordered by first appearance along
/// the support, so two distributions with the same support map to aligned
/// image supports.
FiniteDistribution pushforward(const FiniteDistribution& p,
                               const std::function<Label(const Label&)>& f);

/// Pushforward onto the given label coordinates.
FiniteDistribution project(const FiniteDistribution& p,
                           std::span<const std::size_t> coords);

// ---------------------------------------------------------------------------

struct Axis {
  std::string name;
  std::vector<std::int64_t> values;
};

using AxisSet = std::vector<std::string>;

/// Distribution over the Cartesian product of named axes. The mass vector is
/// row-major: the last axis varies fastest.
class JointDistribution {
 public:
  JointDistribution(std::vector<Axis> axes, Eigen::VectorXd mass);

  const std::vector<Axis>& axes() const { return axes_; }
  const FiniteDistribution& table() const { return table_; }
  const Eigen::VectorXd& mass() const { return table_.mass(); }

  std::size_t axisIndex(const std::string& name) const;

  /// Projection onto the named axes, in the order given.
  JointDistribution marginal(const AxisSet& names) const;

 private:
  std::vector<Axis> axes_;
  FiniteDistribution table_;
};

double entropy(const JointDistribution& joint, const AxisSet& axes);

/// H(target | given). Throws on overlapping or empty target sets.
double conditionalEntropy(const JointDistribution& joint,
                          const AxisSet& target, const AxisSet& given);

/// E_{z ~ P_given} KL(P_{target|z} || Q_{target|z}). Conditioning values
/// with P(z) = 0 carry no weight.
double conditionalKl(const JointDistribution& p, const JointDistribution& q,
                     const AxisSet& target, const AxisSet& given);

/// I(a; b) = KL(P_{a,b} || P_a x P_b).
double mutualInformation(const JointDistribution& joint, const AxisSet& a,
                         const AxisSet& b);

}  // namespace permchal::info
