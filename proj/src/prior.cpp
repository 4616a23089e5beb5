#include "mpersuade/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "mpersuade/errors.hpp"
#include "mpersuade/root_finding.hpp"

namespace mpersuade {

namespace {

constexpr double kMassTol = 1e-12;

// Integral of t^k over [lo, hi], factored so that short intervals keep full
// relative precision.
double power_integral(int k, double lo, double hi) {
  double sum = 0.0;
  double hi_pow = 1.0;
  for (int i = 0; i <= k; ++i) {
    double term = hi_pow;
    for (int j = 0; j < k - i; ++j) term *= lo;
    sum += term;
    hi_pow *= hi;
  }
  return (hi - lo) * sum / (k + 1);
}

class PiecewiseUniformDensity final : public detail::Density {
public:
  explicit PiecewiseUniformDensity(std::vector<ContinuousPrior::UniformPiece> pieces)
      : pieces_(std::move(pieces)) {}

  double density(double x) const override {
    for (const auto& p : pieces_)
      if (x >= p.lo && (x < p.hi || p.hi == 1.0)) return p.mass / (p.hi - p.lo);
    return 0.0;
  }

  double moment(int k, double a, double b) const override {
    double total = 0.0;
    for (const auto& p : pieces_) {
      const double lo = std::max(a, p.lo);
      const double hi = std::min(b, p.hi);
      if (hi > lo) total += p.mass / (p.hi - p.lo) * power_integral(k, lo, hi);
    }
    return total;
  }

private:
  std::vector<ContinuousPrior::UniformPiece> pieces_;
};

class PiecewiseLinearDensity final : public detail::Density {
public:
  PiecewiseLinearDensity(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {}

  double density(double x) const override {
    if (x < 0.0 || x > 1.0) return 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (i + 1 >= knots_.size()) return values_.back();
    const double t = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }

  double moment(int k, double a, double b) const override {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double lo = std::max(a, knots_[i]);
      const double hi = std::min(b, knots_[i + 1]);
      if (!(hi > lo)) continue;
      const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
      const double offset = values_[i] - slope * knots_[i];
      total += offset * power_integral(k, lo, hi) + slope * power_integral(k + 1, lo, hi);
    }
    return total;
  }

private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

class BetaMixtureDensity final : public detail::Density {
public:
  explicit BetaMixtureDensity(std::vector<ContinuousPrior::BetaComponent> comps)
      : comps_(std::move(comps)) {}

  double density(double x) const override {
    if (x < 0.0 || x > 1.0) return 0.0;
    double total = 0.0;
    for (const auto& c : comps_) total += c.weight * boost::math::ibeta_derivative(c.alpha, c.beta, x);
    return total;
  }

  // E[w^k 1{a<=w<=b}] = B(alpha+k, beta)/B(alpha, beta) * (I_b - I_a) with
  // I the regularized incomplete beta of (alpha+k, beta). Upper tails use the
  // complement to avoid cancellation near 1.
  double moment(int k, double a, double b) const override {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (!(b > a)) return 0.0;
    double total = 0.0;
    for (const auto& c : comps_) {
      double ratio = 1.0;
      for (int i = 0; i < k; ++i) ratio *= (c.alpha + i) / (c.alpha + c.beta + i);
      const double shape = c.alpha + k;
      double diff;
      if (a >= 0.5)
        diff = boost::math::ibetac(shape, c.beta, a) - (b >= 1.0 ? 0.0 : boost::math::ibetac(shape, c.beta, b));
      else
        diff = (b >= 1.0 ? 1.0 : boost::math::ibeta(shape, c.beta, b)) -
               (a <= 0.0 ? 0.0 : boost::math::ibeta(shape, c.beta, a));
      total += c.weight * ratio * diff;
    }
    return total;
  }

private:
  std::vector<ContinuousPrior::BetaComponent> comps_;
};

[[noreturn]] void invalid(const std::string& message) { throw InvalidArgument("prior.invalid", message); }

}  // namespace

// ---------------------------------------------------------------------------
// DiscretePrior

DiscretePrior::DiscretePrior(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  for (std::size_t i = 0; i < support_.size(); ++i) mean_ += probs_[i] * support_[i];
}

DiscretePrior DiscretePrior::create(std::vector<double> support, std::vector<double> probs) {
  if (support.empty()) invalid("discrete prior needs at least one support point");
  if (support.size() != probs.size()) invalid("support and probs differ in length");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(support[i] >= 0.0 && support[i] <= 1.0)) invalid("support points must lie in [0,1]");
    if (i > 0 && !(support[i] > support[i - 1])) invalid("support must be strictly increasing");
    if (!(probs[i] > 0.0)) invalid("probs must be positive");
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTol)
    invalid("probs sum to " + std::to_string(total) + ", expected 1");
  return DiscretePrior(std::move(support), std::move(probs));
}

double DiscretePrior::block_mass(std::size_t first, std::size_t last) const {
  double mass = 0.0;
  for (std::size_t i = first; i <= last; ++i) mass += probs_[i];
  return mass;
}

double DiscretePrior::block_mean(std::size_t first, std::size_t last) const {
  double mass = 0.0;
  double first_moment = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    mass += probs_[i];
    first_moment += probs_[i] * support_[i];
  }
  return std::clamp(first_moment / mass, support_[first], support_[last]);
}

// ---------------------------------------------------------------------------
// ContinuousPrior

void ContinuousPrior::finish() {
  const double total = impl_->moment(0, 0.0, 1.0);
  if (std::abs(total - 1.0) > 1e-10) invalid("continuous prior mass is " + std::to_string(total) + ", expected 1");
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    if (!(impl_->density(x) > 0.0)) invalid("density must be strictly positive on (0,1)");
  }
  mean_ = impl_->moment(1, 0.0, 1.0);
}

ContinuousPrior ContinuousPrior::piecewise_uniform(std::vector<UniformPiece> pieces) {
  if (pieces.empty()) invalid("piecewise_uniform needs at least one piece");
  double cursor = 0.0;
  double total = 0.0;
  for (const auto& p : pieces) {
    if (p.lo != cursor) invalid("piecewise_uniform pieces must tile [0,1] in order");
    if (!(p.hi > p.lo)) invalid("piecewise_uniform pieces must have positive length");
    if (!(p.mass > 0.0)) invalid("piecewise_uniform masses must be positive");
    cursor = p.hi;
    total += p.mass;
  }
  if (cursor != 1.0) invalid("piecewise_uniform pieces must end at 1");
  if (std::abs(total - 1.0) > kMassTol) invalid("piecewise_uniform masses must sum to 1");
  ContinuousPrior prior;
  prior.kind_ = ContinuousKind::piecewise_uniform;
  prior.pieces_ = pieces;
  prior.impl_ = std::make_shared<PiecewiseUniformDensity>(std::move(pieces));
  prior.finish();
  return prior;
}

ContinuousPrior ContinuousPrior::piecewise_linear(std::vector<double> knots, std::vector<double> density) {
  if (knots.size() < 2 || knots.size() != density.size())
    invalid("piecewise_linear needs matching knots and density values (at least two)");
  if (knots.front() != 0.0 || knots.back() != 1.0) invalid("piecewise_linear knots must span [0,1]");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i > 0 && !(knots[i] > knots[i - 1])) invalid("piecewise_linear knots must be strictly increasing");
    if (!(density[i] > 0.0)) invalid("piecewise_linear density must be positive at every knot");
  }
  ContinuousPrior prior;
  prior.kind_ = ContinuousKind::piecewise_linear;
  prior.knots_ = knots;
  prior.knot_density_ = density;
  prior.impl_ = std::make_shared<PiecewiseLinearDensity>(std::move(knots), std::move(density));
  prior.finish();
  return prior;
}

ContinuousPrior ContinuousPrior::beta_mixture(std::vector<BetaComponent> components) {
  if (components.empty()) invalid("beta_mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.alpha > 0.0 && c.beta > 0.0)) invalid("beta_mixture shape parameters must be positive");
    if (!(c.weight > 0.0)) invalid("beta_mixture weights must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kMassTol) invalid("beta_mixture weights must sum to 1");
  ContinuousPrior prior;
  prior.kind_ = ContinuousKind::beta_mixture;
  prior.components_ = components;
  prior.impl_ = std::make_shared<BetaMixtureDensity>(std::move(components));
  prior.finish();
  return prior;
}

ContinuousPrior ContinuousPrior::uniform() { return piecewise_uniform({{0.0, 1.0, 1.0}}); }

double ContinuousPrior::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::clamp(impl_->moment(0, 0.0, x), 0.0, 1.0);
}

double ContinuousPrior::moment(int k, double a, double b) const {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (!(b > a)) return 0.0;
  return impl_->moment(k, a, b);
}

double ContinuousPrior::conditional_mean(double a, double b) const {
  if (!(a >= 0.0 && a <= b && b <= 1.0)) throw EmptyInterval("interval must satisfy 0 <= a <= b <= 1");
  const double m0 = moment(0, a, b);
  if (!(m0 > 0.0)) throw EmptyInterval("interval carries no prior mass");
  return std::clamp(moment(1, a, b) / m0, a, b);
}

double ContinuousPrior::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return bisect([&](double x) { return cdf(x) - p; }, 0.0, 1.0, {1e-15, 200});
}

double ContinuousPrior::integrate(const ObjectiveFn& v, double a, double b) const {
  const auto c = v.coefficients();
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) total += c[k] * moment(static_cast<int>(k), a, b);
  return total;
}

// ---------------------------------------------------------------------------
// Prior helpers

double prior_mean(const Prior& prior) {
  return std::visit([](const auto& p) { return p.mean(); }, prior);
}

double conditional_mean(const Prior& prior, double a, double b) {
  if (!(a >= 0.0 && a <= b && b <= 1.0)) throw EmptyInterval("interval must satisfy 0 <= a <= b <= 1");
  if (const auto* d = std::get_if<DiscretePrior>(&prior)) {
    const auto s = d->support();
    const auto lo = std::lower_bound(s.begin(), s.end(), a);
    const auto hi = std::upper_bound(s.begin(), s.end(), b);
    if (lo >= hi) throw EmptyInterval("interval contains no support point");
    return d->block_mean(static_cast<std::size_t>(lo - s.begin()), static_cast<std::size_t>(hi - s.begin()) - 1);
  }
  return std::get<ContinuousPrior>(prior).conditional_mean(a, b);
}

double integrated_cdf(const Prior& prior, double x) {
  if (const auto* d = std::get_if<DiscretePrior>(&prior)) {
    double total = 0.0;
    for (std::size_t i = 0; i < d->size() && d->support()[i] <= x; ++i)
      total += d->probs()[i] * (x - d->support()[i]);
    return total;
  }
  const auto& c = std::get<ContinuousPrior>(prior);
  const double hi = std::clamp(x, 0.0, 1.0);
  return x * c.moment(0, 0.0, hi) - c.moment(1, 0.0, hi);
}

// ---------------------------------------------------------------------------
// PosteriorDistribution

PosteriorDistribution PosteriorDistribution::from_atoms(std::vector<Atom> atoms) {
  std::erase_if(atoms, [](const Atom& a) { return !(a.mass > 0.0); });
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.mean < b.mean; });
  PosteriorDistribution g;
  for (const Atom& a : atoms) {
    if (!g.atoms_.empty() && a.mean - g.atoms_.back().mean < 1e-12) {
      Atom& last = g.atoms_.back();
      const double mass = last.mass + a.mass;
      last.mean = (last.mean * last.mass + a.mean * a.mass) / mass;
      last.mass = mass;
    } else {
      g.atoms_.push_back(a);
    }
  }
  return g;
}

PosteriorDistribution PosteriorDistribution::with_separated(std::vector<Atom> atoms, ContinuousPrior base,
                                                            std::vector<Interval> separated) {
  PosteriorDistribution g = from_atoms(std::move(atoms));
  g.base_ = std::move(base);
  g.separated_ = std::move(separated);
  return g;
}

double PosteriorDistribution::total_mass() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  for (const Interval& s : separated_) total += base_->mass(s.lo, s.hi);
  return total;
}

double PosteriorDistribution::mean() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass * a.mean;
  for (const Interval& s : separated_) total += base_->moment(1, s.lo, s.hi);
  return total;
}

double PosteriorDistribution::cdf(double x) const {
  double total = 0.0;
  for (const Atom& a : atoms_)
    if (a.mean <= x) total += a.mass;
  for (const Interval& s : separated_)
    if (x > s.lo) total += base_->mass(s.lo, std::min(s.hi, x));
  return total;
}

double PosteriorDistribution::integrated_cdf(double x) const {
  double total = 0.0;
  for (const Atom& a : atoms_)
    if (a.mean <= x) total += a.mass * (x - a.mean);
  for (const Interval& s : separated_) {
    if (!(x > s.lo)) continue;
    const double hi = std::min(s.hi, x);
    total += x * base_->mass(s.lo, hi) - base_->moment(1, s.lo, hi);
  }
  return total;
}

double PosteriorDistribution::value(const ObjectiveFn& v) const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass * v.eval(a.mean);
  for (const Interval& s : separated_) total += base_->integrate(v, s.lo, s.hi);
  return total;
}

PosteriorDistribution induce_distribution(const DiscretePrior& prior, const MonotonePartition& p) {
  if (p.states() != prior.size()) throw MalformedSignal("partition size does not match the prior support");
  std::vector<Atom> atoms;
  for (const Block& b : p.blocks()) atoms.push_back({prior.block_mean(b.first, b.last), prior.block_mass(b.first, b.last)});
  return PosteriorDistribution::from_atoms(std::move(atoms));
}

PosteriorDistribution induce_distribution(const DiscretePrior& prior, const StochasticUpperCensorship& uc) {
  const std::size_t j = uc.cutoff_index;
  if (j >= prior.size() || !(uc.q >= 0.0 && uc.q <= 1.0))
    throw MalformedSignal("stochastic upper censorship needs a support index and q in [0,1]");
  const auto s = prior.support();
  const auto f = prior.probs();
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j; ++i) atoms.push_back({s[i], f[i]});
  atoms.push_back({s[j], uc.q * f[j]});
  double pooled_mass = (1.0 - uc.q) * f[j];
  double pooled_moment = (1.0 - uc.q) * f[j] * s[j];
  for (std::size_t i = j + 1; i < prior.size(); ++i) {
    pooled_mass += f[i];
    pooled_moment += f[i] * s[i];
  }
  if (pooled_mass > 0.0) atoms.push_back({pooled_moment / pooled_mass, pooled_mass});
  return PosteriorDistribution::from_atoms(std::move(atoms));
}

PosteriorDistribution induce_distribution(const ContinuousPrior& prior, const PoolingSet& p) {
  std::vector<Atom> atoms;
  for (const Interval& iv : p.intervals()) atoms.push_back({prior.conditional_mean(iv.lo, iv.hi), prior.mass(iv.lo, iv.hi)});
  return PosteriorDistribution::with_separated(std::move(atoms), prior, p.separated());
}

PosteriorDistribution prior_as_distribution(const Prior& prior) {
  if (const auto* d = std::get_if<DiscretePrior>(&prior)) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < d->size(); ++i) atoms.push_back({d->support()[i], d->probs()[i]});
    return PosteriorDistribution::from_atoms(std::move(atoms));
  }
  return induce_distribution(std::get<ContinuousPrior>(prior), PoolingSet::full_disclosure());
}

ContractionReport verify_contraction(const PosteriorDistribution& g, const Prior& prior, int grid, double tol) {
  if (grid < 100) throw InvalidArgument("prior.invalid", "verify_contraction needs grid >= 100");
  ContractionReport report;
  report.mean_gap = g.mean() - prior_mean(prior);
  report.worst_violation = -INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / (grid - 1);
    const double gap = g.integrated_cdf(x) - integrated_cdf(prior, x);
    if (gap > report.worst_violation) {
      report.worst_violation = gap;
      report.worst_at = x;
    }
  }
  const bool mass_ok = std::abs(g.total_mass() - 1.0) <= tol;
  report.pass = mass_ok && std::abs(report.mean_gap) <= tol && report.worst_violation <= tol;
  return report;
}

}  // namespace mpersuade
