#include "permchal/infotheory.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace permchal::info {

double klBernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("klBernoulli: parameters must lie in [0, 1]");
  }
  double kl = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return kInfinite;
    kl += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return kInfinite;
    kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return kl < 0.0 ? 0.0 : kl;
}

// ---------------------------------------------------------------------------

FiniteDistribution::FiniteDistribution(std::vector<Label> support,
                                       Eigen::VectorXd mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (static_cast<Eigen::Index>(support_.size()) != mass_.size()) {
    throw ValidationError("FiniteDistribution: support and mass differ in length");
  }
  if (support_.empty()) {
    throw ValidationError("FiniteDistribution: empty support");
  }
  if ((mass_.array() < 0.0).any() || !mass_.allFinite()) {
    throw ValidationError("FiniteDistribution: negative or non-finite mass");
  }
  if (std::abs(mass_.sum() - 1.0) > kMassTol) {
    throw ValidationError("FiniteDistribution: masses do not sum to 1");
  }
  std::vector<const Label*> sorted;
  sorted.reserve(support_.size());
  for (const auto& l : support_) sorted.push_back(&l);
  std::sort(sorted.begin(), sorted.end(),
            [](const Label* a, const Label* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i] == *sorted[i - 1]) {
      throw ValidationError("FiniteDistribution: duplicate support label");
    }
  }
}

FiniteDistribution FiniteDistribution::uniform(std::vector<Label> support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0) throw ValidationError("FiniteDistribution: empty support");
  return {std::move(support), Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k))};
}

FiniteDistribution FiniteDistribution::pointMass(std::vector<Label> support,
                                                 std::size_t at) {
  if (at >= support.size()) throw ValidationError("pointMass: index out of range");
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.size()));
  mass(static_cast<Eigen::Index>(at)) = 1.0;
  return {std::move(support), std::move(mass)};
}

std::vector<Label> FiniteDistribution::range(std::size_t k) {
  std::vector<Label> labels(k);
  for (std::size_t i = 0; i < k; ++i) labels[i] = {static_cast<std::int64_t>(i)};
  return labels;
}

double entropy(const FiniteDistribution& p) { return entropy(p.mass()); }

double klDivergence(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.support() != q.support()) {
    throw ValidationError("klDivergence: supports are not aligned");
  }
  return klDivergence(p.mass(), q.mass());
}

FiniteDistribution mixture(double lambda, const FiniteDistribution& a,
                           const FiniteDistribution& b) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("mixture: lambda must lie in [0, 1]");
  }
  if (a.support() != b.support()) {
    throw ValidationError("mixture: supports are not aligned");
  }
  Eigen::VectorXd m = lambda * a.mass() + (1.0 - lambda) * b.mass();
  m /= m.sum();
  return {a.support(), std::move(m)};
}

FiniteDistribution pushforward(const FiniteDistribution& p,
                               const std::function<Label(const Label&)>& f) {
  std::map<Label, std::size_t> index;
  std::vector<Label> image;
  std::vector<double> mass;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Label y = f(p.support()[i]);
    auto [it, fresh] = index.emplace(y, image.size());
    if (fresh) {
      image.push_back(std::move(y));
      mass.push_back(0.0);
    }
    mass[it->second] += p[i];
  }
  return {std::move(image),
          Eigen::Map<Eigen::VectorXd>(mass.data(), static_cast<Eigen::Index>(mass.size()))};
}

FiniteDistribution project(const FiniteDistribution& p,
                           std::span<const std::size_t> coords) {
  return pushforward(p, [coords](const Label& l) {
    Label out;
    out.reserve(coords.size());
    for (std::size_t c : coords) {
      if (c >= l.size()) throw ValidationError("project: coordinate out of range");
      out.push_back(l[c]);
    }
    return out;
  });
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Label> productLabels(const std::vector<Axis>& axes) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  std::vector<Label> labels;
  labels.reserve(total);
  std::vector<std::size_t> digit(axes.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Label l(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) l[k] = axes[k].values[digit[k]];
    labels.push_back(std::move(l));
    for (std::size_t k = axes.size(); k-- > 0;) {
      if (++digit[k] < axes[k].values.size()) break;
      digit[k] = 0;
    }
  }
  return labels;
}

const std::vector<Axis>& checkedAxes(const std::vector<Axis>& axes,
                                     Eigen::Index massSize) {
  std::set<std::string> names;
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (!names.insert(a.name).second) {
      throw ValidationError("JointDistribution: duplicate axis name " + a.name);
    }
    if (a.values.empty()) {
      throw ValidationError("JointDistribution: axis " + a.name + " has no values");
    }
    total *= a.values.size();
  }
  if (static_cast<Eigen::Index>(total) != massSize) {
    throw ValidationError("JointDistribution: table size does not match axes");
  }
  return axes;
}

void requireDisjoint(const AxisSet& a, const AxisSet& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw ValidationError("axis sets overlap on " + x);
    }
  }
}

AxisSet concat(const AxisSet& a, const AxisSet& b) {
  AxisSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::size_t blockCount(const JointDistribution& joint, const AxisSet& names) {
  std::size_t count = 1;
  for (const auto& n : names) count *= joint.axes()[joint.axisIndex(n)].values.size();
  return count;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<Axis> axes, Eigen::VectorXd mass)
    : axes_(std::move(axes)),
      table_([&] {
        auto labels = productLabels(checkedAxes(axes_, mass.size()));
        return FiniteDistribution(std::move(labels), std::move(mass));
      }()) {}

std::size_t JointDistribution::axisIndex(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name == name) return i;
  }
  throw ValidationError("JointDistribution: unknown axis " + name);
}

JointDistribution JointDistribution::marginal(const AxisSet& names) const {
  std::vector<std::size_t> picked;
  std::vector<Axis> outAxes;
  for (const auto& n : names) {
    const std::size_t idx = axisIndex(n);
    if (std::find(picked.begin(), picked.end(), idx) != picked.end()) {
      throw ValidationError("marginal: axis listed twice: " + n);
    }
    picked.push_back(idx);
    outAxes.push_back(axes_[idx]);
  }
  std::vector<std::size_t> outStride(picked.size(), 1);
  std::size_t outSize = 1;
  for (std::size_t k = picked.size(); k-- > 0;) {
    outStride[k] = outSize;
    outSize *= outAxes[k].values.size();
  }
  // Stride of each source axis in the output (0 when summed out).
  std::vector<std::size_t> srcToOut(axes_.size(), 0);
  for (std::size_t k = 0; k < picked.size(); ++k) srcToOut[picked[k]] = outStride[k];

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outSize));
  std::vector<std::size_t> digit(axes_.size(), 0);
  std::size_t target = 0;
  const Eigen::VectorXd& m = table_.mass();
  for (Eigen::Index flat = 0; flat < m.size(); ++flat) {
    out(static_cast<Eigen::Index>(target)) += m(flat);
    for (std::size_t k = axes_.size(); k-- > 0;) {
      target += srcToOut[k];
      if (++digit[k] < axes_[k].values.size()) break;
      target -= srcToOut[k] * digit[k];
      digit[k] = 0;
    }
  }
  if (outAxes.empty()) {
    // Projection onto no axes: a point mass on the empty tuple.
    return JointDistribution({}, Eigen::VectorXd::Ones(1));
  }
  out /= out.sum();
  return {std::move(outAxes), std::move(out)};
}

double entropy(const JointDistribution& joint, const AxisSet& axes) {
  if (axes.empty()) return 0.0;
  return entropy(joint.marginal(axes).mass());
}

double conditionalEntropy(const JointDistribution& joint, const AxisSet& target,
                          const AxisSet& given) {
  if (target.empty()) throw ValidationError("conditionalEntropy: empty target");
  requireDisjoint(target, given);

  const double viaChain = entropy(joint, concat(target, given)) - entropy(joint, given);

  // Direct route: sum_z P(z) H(target | given = z), with the given axes
  // first so each z owns a contiguous block.
  const JointDistribution zx = joint.marginal(concat(given, target));
  const Eigen::Index block = static_cast<Eigen::Index>(blockCount(joint, target));
  double direct = 0.0;
  for (Eigen::Index start = 0; start < zx.mass().size(); start += block) {
    const auto seg = zx.mass().segment(start, block);
    const double pz = seg.sum();
    if (pz > 0.0) direct += pz * entropy((seg / pz).eval());
  }
  if (std::abs(direct - viaChain) > kIdentityTol) {
    throw std::logic_error("conditionalEntropy: chain rule violated");
  }
  return direct;
}

double conditionalKl(const JointDistribution& p, const JointDistribution& q,
                     const AxisSet& target, const AxisSet& given) {
  if (target.empty()) throw ValidationError("conditionalKl: empty target");
  requireDisjoint(target, given);
  if (p.axes().size() != q.axes().size()) {
    throw ValidationError("conditionalKl: joints have different axes");
  }
  for (std::size_t i = 0; i < p.axes().size(); ++i) {
    if (p.axes()[i].name != q.axes()[i].name ||
        p.axes()[i].values != q.axes()[i].values) {
      throw ValidationError("conditionalKl: joints have different axes");
    }
  }
  const AxisSet order = concat(given, target);
  const JointDistribution pz = p.marginal(order);
  const JointDistribution qz = q.marginal(order);
  const Eigen::Index block = static_cast<Eigen::Index>(blockCount(p, target));
  double kl = 0.0;
  for (Eigen::Index start = 0; start < pz.mass().size(); start += block) {
    const auto ps = pz.mass().segment(start, block);
    const auto qs = qz.mass().segment(start, block);
    const double wp = ps.sum();
    if (wp <= 0.0) continue;
    const double wq = qs.sum();
    if (wq <= 0.0) return kInfinite;
    const double term = klDivergence((ps / wp).eval(), (qs / wq).eval());
    if (isInfinite(term)) return kInfinite;
    kl += wp * term;
  }
  return kl;
}

double mutualInformation(const JointDistribution& joint, const AxisSet& a,
                         const AxisSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  requireDisjoint(a, b);
  const JointDistribution ab = joint.marginal(concat(a, b));
  const Eigen::VectorXd pa = joint.marginal(a).mass();
  const Eigen::VectorXd pb = joint.marginal(b).mass();
  Eigen::VectorXd product(ab.mass().size());
  for (Eigen::Index i = 0; i < pa.size(); ++i) {
    product.segment(i * pb.size(), pb.size()) = pa(i) * pb;
  }
  const double mi = klDivergence(ab.mass(), product);
  const double viaEntropy = entropy(pa) - conditionalEntropy(joint, a, b);
  if (std::abs(mi - viaEntropy) > kIdentityTol) {
    throw std::logic_error("mutualInformation: KL and entropy forms disagree");
  }
  return mi;
}

}  // namespace permchal::info
