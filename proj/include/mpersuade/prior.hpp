#pragma once

// Priors over the state on [0,1], the posterior-mean distributions signals
// induce, and the mean-preserving-contraction feasibility check.

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mpersuade/objective.hpp"
#include "mpersuade/signals.hpp"

namespace mpersuade {

class DiscretePrior {
public:
  // Throws InvalidArgument unless support is strictly increasing in [0,1],
  // probs are positive and sum to 1 within 1e-12, and n >= 1.
  static DiscretePrior create(std::vector<double> support, std::vector<double> probs);

  std::span<const double> support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return support_.size(); }
  double mean() const { return mean_; }

  // Pooled mass and mean of the index range [first, last].
  double block_mass(std::size_t first, std::size_t last) const;
  double block_mean(std::size_t first, std::size_t last) const;

private:
  DiscretePrior(std::vector<double> support, std::vector<double> probs);

  std::vector<double> support_;
  std::vector<double> probs_;
  double mean_ = 0.0;
};

namespace detail {
// Representation behind ContinuousPrior. moment(k, a, b) is the partial
// moment of order k over [a, b]; implementations evaluate it directly on the
// overlap with each piece rather than as a difference of prefix integrals.
class Density {
public:
  virtual ~Density() = default;
  virtual double density(double x) const = 0;
  virtual double moment(int k, double a, double b) const = 0;
};
}  // namespace detail

enum class ContinuousKind { piecewise_uniform, piecewise_linear, beta_mixture };

class ContinuousPrior {
public:
  struct UniformPiece {
    double lo;
    double hi;
    double mass;
  };
  struct BetaComponent {
    double alpha;
    double beta;
    double weight;
  };

  // Pieces must tile [0,1] in order with positive masses summing to 1
  // within 1e-12.
  static ContinuousPrior piecewise_uniform(std::vector<UniformPiece> pieces);
  // Density linear between knots 0 = x_0 < ... < x_K = 1, positive at every
  // knot, integrating to 1 within 1e-10.
  static ContinuousPrior piecewise_linear(std::vector<double> knots, std::vector<double> density);
  // Positive shape parameters, positive weights summing to 1 within 1e-12.
  // Moments use the regularized incomplete beta function in closed form.
  static ContinuousPrior beta_mixture(std::vector<BetaComponent> components);
  static ContinuousPrior uniform();

  ContinuousKind kind() const { return kind_; }
  const std::vector<UniformPiece>& uniform_pieces() const { return pieces_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_density() const { return knot_density_; }
  const std::vector<BetaComponent>& beta_components() const { return components_; }

  double density(double x) const { return impl_->density(x); }
  double cdf(double x) const;
  // Integral of omega^k dF over [a, b].
  double moment(int k, double a, double b) const;
  double mass(double a, double b) const { return moment(0, a, b); }
  // M(x) = integral of omega dF over [0, x].
  double partial_mean(double x) const { return moment(1, 0.0, x); }
  double mean() const { return mean_; }
  // E[omega | omega in [a,b]], clamped into [a,b]. Throws EmptyInterval when
  // the interval carries no mass.
  double conditional_mean(double a, double b) const;
  // Smallest x with cdf(x) >= p, by bisection to width 1e-15.
  double quantile(double p) const;
  // Integral of V dF over [a, b], exact for polynomial V.
  double integrate(const ObjectiveFn& v, double a, double b) const;

private:
  ContinuousPrior() = default;
  void finish();

  ContinuousKind kind_ = ContinuousKind::piecewise_uniform;
  std::shared_ptr<const detail::Density> impl_;
  std::vector<UniformPiece> pieces_;
  std::vector<double> knots_;
  std::vector<double> knot_density_;
  std::vector<BetaComponent> components_;
  double mean_ = 0.0;
};

using Prior = std::variant<DiscretePrior, ContinuousPrior>;

double prior_mean(const Prior& prior);

// E[omega | omega in [a,b]]. For discrete priors [a,b] must contain a support
// point. Throws EmptyInterval otherwise, or when 0 <= a <= b <= 1 fails.
double conditional_mean(const Prior& prior, double a, double b);

struct Atom {
  double mean;
  double mass;
};

// Distribution G of the posterior mean: atoms, plus (for continuous priors)
// the prior restricted to separated regions.
class PosteriorDistribution {
public:
  // Atoms are sorted by mean; means closer than 1e-12 are merged.
  static PosteriorDistribution from_atoms(std::vector<Atom> atoms);
  static PosteriorDistribution with_separated(std::vector<Atom> atoms, ContinuousPrior base,
                                              std::vector<Interval> separated);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Interval>& separated() const { return separated_; }
  const std::optional<ContinuousPrior>& base() const { return base_; }

  double total_mass() const;
  double mean() const;
  double cdf(double x) const;
  // Integral of G(t) dt over [0, x].
  double integrated_cdf(double x) const;
  // Integral of V dG.
  double value(const ObjectiveFn& v) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Interval> separated_;
  std::optional<ContinuousPrior> base_;
};

PosteriorDistribution induce_distribution(const DiscretePrior& prior, const MonotonePartition& p);
PosteriorDistribution induce_distribution(const DiscretePrior& prior,
                                          const StochasticUpperCensorship& uc);
PosteriorDistribution induce_distribution(const ContinuousPrior& prior, const PoolingSet& p);
// Full disclosure: G = F.
PosteriorDistribution prior_as_distribution(const Prior& prior);

// Integral of F(t) dt over [0, x].
double integrated_cdf(const Prior& prior, double x);

struct ContractionReport {
  bool pass = false;
  double mean_gap = 0.0;         // mean(G) - mean(F)
  double worst_violation = 0.0;  // max over the grid of int G - int F (<= tol to pass)
  double worst_at = 0.0;
};

// F is a mean-preserving spread of G: equal means and int_0^x G <= int_0^x F
// at grid uniformly spaced points of [0,1], both within tol.
ContractionReport verify_contraction(const PosteriorDistribution& g, const Prior& prior,
                                     int grid = 1000, double tol = 1e-9);

}  // namespace mpersuade
