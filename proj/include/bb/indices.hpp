#pragma once

#include <cstdint>
#include <span>

#include "bb/arms.hpp"

// Optimistic confidence indices and posterior draws that the adaptive
// policies feed into the knapsack solver.

namespace bb {

// Exploration schedule f(t) = log t + d * log log t, clamped below a small
// t_min so the log log term never goes undefined: t_min = 2 for d = 1,
// t_min = 3 for any other d > 0, and no clamping for d = 0.
double exploration_rate(double d, std::uint64_t t);

// Upper confidence bound for the mean: the largest mu in the family's mean
// range with kl_mean(mu_hat, mu) <= delta. Closed form for gaussian;
// bisection to 1e-9 absolute (max 100 iterations) otherwise.
double klucb_index(const FamilyShape& shape, double mu_hat, double delta);

// Same bound for an arbitrary distribution on [0, 1]: the largest mu with
// kinf(dist, mu) <= delta, found by bisection on mu.
double klucb_index_finite_support(const EmpiricalDist& dist, double delta);

// One draw from the Beta(successes + 1, failures + 1) posterior of a
// Bernoulli mean under a uniform prior.
double ts_posterior_draw(std::uint64_t successes, std::uint64_t failures, RngStream& rng);

// Per-arm sufficient statistics for the subset index.
struct EscbArmStat {
  double mu_hat = 0.0;      // empirical Bernoulli mean, in [0, 1]
  std::uint64_t pulls = 0;  // >= 1
};

// Optimistic value of playing a whole subset of Bernoulli arms:
//   sup sum_a mu_a  over mu in [0,1]^S  with  sum_a pulls_a * kl(mu_hat_a, mu_a) <= f_t.
// Solved by bisection on the dual variable (constraint matched to 1e-8),
// with each coordinate mean recovered in closed form.
double escb_index(std::span<const EscbArmStat> arms, double f_t);

}  // namespace bb
