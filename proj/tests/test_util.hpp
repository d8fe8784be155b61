#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "bb/rng.hpp"

// Independent brute-force oracles used to cross-check the library's
// closed-form and bisection-based solvers.

namespace testutil {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Best value of sum_a q_a (mu_a - c_a rho) over q in {0, 0.05, ..., 1}^K
// with sum_a c_a q_a <= B: a grid restriction of the fractional knapsack,
// so it lower-bounds the continuous optimum.
inline double grid_knapsack_best(const std::vector<double>& mu, const std::vector<double>& cost,
                                 double budget, double rho) {
  const std::size_t k = mu.size();
  double best = 0.0;  // q = 0 is always feasible
  std::vector<int> steps(k, 0);
  // odometer enumeration with per-arm inclusion steps of 0.05
  for (;;) {
    std::size_t pos = 0;
    while (pos < k && steps[pos] == 20) steps[pos++] = 0;
    if (pos == k) break;
    ++steps[pos];
    double fill = 0.0, value = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double q = steps[a] * 0.05;
      fill += cost[a] * q;
      value += q * (mu[a] - cost[a] * rho);
    }
    if (fill <= budget + 1e-12) best = std::max(best, value);
  }
  return best;
}

namespace detail {

// KL of the fixed weights w against candidate masses k (same support),
// ignoring any extra mass the candidate places outside the support.
inline double kl_weights(const std::vector<double>& w, const std::vector<double>& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (k[i] <= 0.0) return kInf;
    s += w[i] * std::log(w[i] / k[i]);
  }
  return s;
}

}  // namespace detail

// Smallest KL(w || k) over distributions k supported on points ∪ {1} whose
// mean is at least mu. The first m-1 masses run over a simplex grid of step
// h; the last support mass takes its largest feasible value exactly, with
// the remainder sitting at 1 (which charges no KL term when 1 is outside
// the support). After the coarse pass the grid is refined twice around the
// running argmin (step / 50 each stage): when the optimum pins all mass to
// the support, the conditional last mass moves (1 - x[0]) / (1 - x_last)
// times faster than the gridded masses, so the coarse cell alone can miss
// the minimum by a first-order (not quadratic) margin. Supports of size
// up to 3.
inline double kinf_primal_grid(const std::vector<double>& x, const std::vector<double>& w,
                               double mu, double h = 1e-3) {
  const std::size_t m = x.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += w[i] * x[i];
  if (mu <= mean) return 0.0;
  if (mu >= 1.0) return kInf;

  const double x_last = x[m - 1];
  std::vector<double> k(m, 0.0);
  double best = kInf;
  double best0 = 0.0, best1 = 0.0;
  // evaluates the candidate with prefix masses k[0..m-2] already set
  auto eval = [&](double prefix_mass, double prefix_mean) {
    const double remaining = 1.0 - prefix_mass;
    if (remaining <= 0.0) return;
    double k_last;
    if (x_last == 1.0) {
      if (prefix_mean + remaining < mu - 1e-15) return;
      k_last = remaining;
    } else {
      // cap so that prefix_mean + k_last x_last + (remaining - k_last) >= mu
      k_last = std::min(remaining, (prefix_mean + remaining - mu) / (1.0 - x_last));
      if (k_last <= 0.0) return;
    }
    k[m - 1] = k_last;
    const double v = detail::kl_weights(w, k);
    if (v < best) {
      best = v;
      best0 = m >= 2 ? k[0] : 0.0;
      best1 = m >= 3 ? k[1] : 0.0;
    }
  };
  auto scan = [&](double lo0, double hi0, double lo1, double hi1, double step) {
    if (m == 2) {
      for (double k0 = std::max(lo0, step); k0 <= hi0 && k0 < 1.0; k0 += step) {
        k[0] = k0;
        eval(k0, k0 * x[0]);
      }
    } else {
      for (double k0 = std::max(lo0, step); k0 <= hi0 && k0 < 1.0; k0 += step) {
        k[0] = k0;
        for (double k1 = std::max(lo1, step); k1 <= hi1 && k0 + k1 < 1.0; k1 += step) {
          k[1] = k1;
          eval(k0 + k1, k0 * x[0] + k1 * x[1]);
        }
      }
    }
  };

  if (m == 1) {
    eval(0.0, 0.0);
  } else {
    scan(h, 1.0, h, 1.0, h);
    for (double step = h / 50.0; best < kInf && step > h / 5000.0; step /= 50.0) {
      const double wing = step * 50.0;
      scan(best0 - wing, best0 + wing, best1 - wing, best1 + wing, step);
    }
  }
  return best;
}

// Largest mu on the step-1e-6 grid over [mu_hat, 1] with
// KL_bernoulli(mu_hat, mu) <= delta. KL(mu_hat, .) is nondecreasing there,
// so a coarse scan followed by a fine scan of one coarse cell visits the
// same answer as a full fine scan.
inline double klucb_grid_bernoulli(double mu_hat, double delta) {
  auto kl = [&](double q) {
    double s = 0.0;
    if (mu_hat > 0.0) {
      if (q <= 0.0) return kInf;
      s += mu_hat * std::log(mu_hat / q);
    }
    if (mu_hat < 1.0) {
      if (q >= 1.0) return kInf;
      s += (1.0 - mu_hat) * std::log((1.0 - mu_hat) / (1.0 - q));
    }
    return s;
  };
  const double coarse = 1e-3, fine = 1e-6;
  double lo = mu_hat;
  while (lo + coarse <= 1.0 && kl(lo + coarse) <= delta) lo += coarse;
  while (lo + fine <= 1.0 && kl(lo + fine) <= delta) lo += fine;
  return lo;
}

// Exact P(Binomial(n, y) <= s) via Pascal-triangle coefficients; n <= 50
// keeps every coefficient exactly representable in a double.
inline double binom_cdf(int n, int s, double y) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  for (int row = 1; row <= n; ++row)
    for (int j = row; j >= 1; --j) c[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(j) - 1];
  double total = 0.0;
  for (int j = 0; j <= s; ++j)
    total += c[static_cast<std::size_t>(j)] * std::pow(y, j) * std::pow(1.0 - y, n - j);
  return total;
}

// P(Beta(a, b) > y) through the regularized incomplete beta complement.
inline double beta_tail(double a, double b, double y) {
  return boost::math::ibetac(a, b, y);
}

// True when f() throws E and the message mentions `needle` (typically the
// offending field's name).
template <typename E, typename F>
bool throws_with(F&& f, const std::string& needle) {
  try {
    f();
  } catch (const E& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

// Deterministic helpers for random test-case generation.
inline double uniform_in(bb::RngStream& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

inline std::size_t index_in(bb::RngStream& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
}

}  // namespace testutil
