#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bb/rng.hpp"

// Reward distributions for bandit arms: sampling, the mean-parameterized
// KL divergence of each one-parameter family, and the minimum KL distance
// from a distribution to the set of distributions with mean above a target
// (`kinf`), which drives both the lower-bound constants and the
// finite-support confidence index.

namespace bb {

enum class Family {
  bernoulli,
  gaussian,      // known variance
  poisson,
  exponential,
  finite_support,  // finitely many points in [0, 1]
  point_mass,      // degenerate; used for the budget slack pseudo-arm
};

std::string family_name(Family family);

// Family minus its mean: the kind plus any fixed hyperparameter.
struct FamilyShape {
  Family family = Family::bernoulli;
  double sigma2 = 1.0;  // gaussian only
};

// A concrete arm distribution.
class RewardModel {
 public:
  static RewardModel bernoulli(double mean);
  static RewardModel gaussian(double mean, double sigma2);
  static RewardModel poisson(double mean);
  static RewardModel exponential(double mean);
  static RewardModel finite_support(std::vector<double> points, std::vector<double> weights);
  static RewardModel point_mass(double value);

  Family family() const { return shape_.family; }
  FamilyShape shape() const { return shape_; }
  double mean() const { return mean_; }
  double sigma2() const { return shape_.sigma2; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  RewardModel() = default;
  FamilyShape shape_;
  double mean_ = 0.0;
  std::vector<double> points_;   // finite_support only, sorted ascending
  std::vector<double> weights_;  // finite_support only, positive, sums to 1
};

// Largest / smallest achievable mean of a family (+-infinity if unbounded).
double mean_upper(const FamilyShape& shape);
double mean_lower(const FamilyShape& shape);

double sample(const RewardModel& model, RngStream& rng);

// KL divergence between the two members of a one-parameter family with
// means mu1 and mu2. Boundary conventions: 0*log(0) = 0, and the result is
// +infinity when the second argument sits on a boundary the first cannot
// reach (e.g. Bernoulli mu2 in {0,1} with mu1 != mu2).
double kl_mean(const FamilyShape& shape, double mu1, double mu2);

// Counts of observed values; the empirical distribution of a
// finite-support arm.
struct EmpiricalDist {
  std::vector<double> points;        // sorted ascending, within [0, 1]
  std::vector<std::uint64_t> counts; // parallel to points, positive
  std::uint64_t n = 0;
  double sum = 0.0;

  void add(double x);
  double mean() const { return n == 0 ? 0.0 : sum / n; }
};

// Minimum KL divergence from the given distribution to any distribution on
// [0, 1] with mean at least `mu`. Zero when mu <= mean; +infinity when
// mu >= 1 (unless the distribution is a point mass at 1). Solved through
// the one-dimensional concave dual
//   max_{0 <= lambda <= 1/(1-mu)} E[log(1 - lambda (X - mu))].
double kinf(const EmpiricalDist& dist, double mu);
double kinf(const RewardModel& model, double mu);

// Low-level samplers shared by the reward models and the Beta posterior.
double sample_standard_normal(RngStream& rng);
double sample_gamma(RngStream& rng, double shape);  // shape >= 1
double sample_beta(RngStream& rng, double a, double b);

}  // namespace bb
