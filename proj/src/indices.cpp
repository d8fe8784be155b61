#include "bb/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double exploration_rate(double d, std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("exploration_rate t: must be >= 1");
  if (!(d >= 0.0)) throw std::invalid_argument("exploration_rate d: must be nonnegative");
  if (d == 0.0) return std::log(static_cast<double>(t));
  const std::uint64_t t_min = (d == 1.0) ? 2 : 3;
  const double te = static_cast<double>(std::max(t, t_min));
  return std::log(te) + d * std::log(std::log(te));
}

namespace {

// Largest x in [lo, hi] with g(x) <= delta, given g nondecreasing,
// g(lo) <= delta and g(hi) > delta.
template <typename G>
double bisect_upper(G&& g, double lo, double hi, double delta, double tol) {
  for (int it = 0; it < 100 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= delta)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

double klucb_index(const FamilyShape& shape, double mu_hat, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("klucb_index delta: must be nonnegative");
  switch (shape.family) {
    case Family::gaussian:
      return mu_hat + std::sqrt(2.0 * shape.sigma2 * delta);
    case Family::bernoulli: {
      if (!(mu_hat >= 0.0 && mu_hat <= 1.0))
        throw std::domain_error("klucb_index mu_hat: must lie in [0, 1]");
      if (mu_hat == 1.0 || delta == 0.0) return mu_hat;
      auto g = [&](double mu) { return kl_mean(shape, mu_hat, mu); };
      if (g(1.0) <= delta) return 1.0;
      return bisect_upper(g, mu_hat, 1.0, delta, 1e-9);
    }
    case Family::poisson:
    case Family::exponential: {
      if (!(mu_hat >= 0.0)) throw std::domain_error("klucb_index mu_hat: must be nonnegative");
      if (delta == 0.0) return mu_hat;
      auto g = [&](double mu) { return kl_mean(shape, mu_hat, mu); };
      double span = 1.0;
      while (g(mu_hat + span) <= delta && span < 1e300) span *= 2.0;
      return bisect_upper(g, mu_hat, mu_hat + span, delta, 1e-9);
    }
    case Family::point_mass:
      return mu_hat;
    case Family::finite_support:
      throw std::invalid_argument(
          "klucb_index: use klucb_index_finite_support for finite-support arms");
  }
  throw std::logic_error("klucb_index: unknown family");
}

double klucb_index_finite_support(const EmpiricalDist& dist, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("klucb_index delta: must be nonnegative");
  const double mean = dist.mean();
  if (mean >= 1.0) return 1.0;
  if (delta == 0.0) return mean;
  auto g = [&](double mu) { return kinf(dist, mu); };
  if (g(1.0) <= delta) return 1.0;
  return bisect_upper(g, mean, 1.0, delta, 1e-9);
}

double ts_posterior_draw(std::uint64_t successes, std::uint64_t failures, RngStream& rng) {
  return sample_beta(rng, static_cast<double>(successes) + 1.0,
                     static_cast<double>(failures) + 1.0);
}

namespace {

// Coordinate mean mu(lambda) for the subset index: the root in [p, 1) of
//   psi(mu) = lambda * n * (mu - p) - mu * (1 - mu),
// i.e. where the marginal KL cost matches the dual price. Rearranged this is
// the quadratic mu^2 + (lambda n - 1) mu - lambda n p = 0, whose roots have
// product -lambda n p <= 0; the nonnegative root is the one in [p, 1)
// (psi(p) = -p(1-p) <= 0 < lambda n (1-p) = psi(1)).
double escb_coordinate_mean(double p, double lambda_n) {
  if (p >= 1.0) return 1.0;
  const double b = lambda_n - 1.0;
  const double c = lambda_n * p;
  const double disc = std::sqrt(b * b + 4.0 * c);
  // Pick the cancellation-free form for the positive root.
  const double mu = b > 0.0 ? 2.0 * c / (b + disc) : 0.5 * (disc - b);
  return std::clamp(mu, p, 1.0);
}

}  // namespace

double escb_index(std::span<const EscbArmStat> arms, double f_t) {
  if (arms.empty()) throw std::invalid_argument("escb_index: empty subset");
  if (!(f_t >= 0.0)) throw std::invalid_argument("escb_index f_t: must be nonnegative");

  const FamilyShape bern{Family::bernoulli, 1.0};
  double pinned = 0.0;  // arms with mu_hat = 1 stay at 1 for free
  std::vector<double> p, n;
  for (const EscbArmStat& a : arms) {
    if (a.pulls == 0) throw std::invalid_argument("escb_index pulls: must be >= 1");
    if (!(a.mu_hat >= 0.0 && a.mu_hat <= 1.0))
      throw std::domain_error("escb_index mu_hat: must lie in [0, 1]");
    if (a.mu_hat == 1.0) {
      pinned += 1.0;
    } else {
      p.push_back(a.mu_hat);
      n.push_back(static_cast<double>(a.pulls));
    }
  }
  if (p.empty()) return pinned;
  if (f_t == 0.0) {
    double s = pinned;
    for (double pa : p) s += pa;
    return s;
  }

  // KL spent at dual price lambda; decreasing in lambda.
  auto spent = [&](double lambda, double* index_out) {
    double kl = 0.0, idx = pinned;
    for (std::size_t a = 0; a < p.size(); ++a) {
      const double mu = escb_coordinate_mean(p[a], lambda * n[a]);
      kl += n[a] * kl_mean(bern, p[a], mu);
      idx += mu;
    }
    if (index_out) *index_out = idx;
    return kl;
  };

  double lo = 1.0, hi = 1.0;
  for (int it = 0; it < 400 && spent(lo, nullptr) < f_t; ++it) lo *= 0.5;
  for (int it = 0; it < 400 && spent(hi, nullptr) > f_t; ++it) hi *= 2.0;

  double index = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double kl = spent(mid, &index);
    if (std::abs(kl - f_t) <= 1e-8) return index;
    (kl > f_t ? lo : hi) = mid;
  }
  spent(hi, &index);  // feasible side
  return index;
}

}  // namespace bb
