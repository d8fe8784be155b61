#include "bb/arms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace bb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x * log(x / y) with the 0 * log(0) = 0 convention.
double xlogx_over(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return kInf;
  return x * std::log(x / y);
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::bernoulli: return "bernoulli";
    case Family::gaussian: return "gaussian";
    case Family::poisson: return "poisson";
    case Family::exponential: return "exponential";
    case Family::finite_support: return "finite_support";
    case Family::point_mass: return "point_mass";
  }
  return "unknown";
}

RewardModel RewardModel::bernoulli(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0))
    throw std::invalid_argument("bernoulli mean: must lie in [0, 1]");
  RewardModel m;
  m.shape_ = {Family::bernoulli, 1.0};
  m.mean_ = mean;
  return m;
}

RewardModel RewardModel::gaussian(double mean, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("gaussian sigma2: must be positive");
  if (!std::isfinite(mean)) throw std::invalid_argument("gaussian mean: must be finite");
  RewardModel m;
  m.shape_ = {Family::gaussian, sigma2};
  m.mean_ = mean;
  return m;
}

RewardModel RewardModel::poisson(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("poisson mean: must be positive and finite");
  RewardModel m;
  m.shape_ = {Family::poisson, 1.0};
  m.mean_ = mean;
  return m;
}

RewardModel RewardModel::exponential(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("exponential mean: must be positive and finite");
  RewardModel m;
  m.shape_ = {Family::exponential, 1.0};
  m.mean_ = mean;
  return m;
}

RewardModel RewardModel::finite_support(std::vector<double> points, std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("finite_support: points and weights must be nonempty and match");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  std::vector<double> p, w;
  for (std::size_t i : order) {
    if (!(points[i] >= 0.0 && points[i] <= 1.0))
      throw std::invalid_argument("finite_support points: must lie in [0, 1]");
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("finite_support weights: must be positive");
    if (!p.empty() && points[i] == p.back()) {
      w.back() += weights[i];
    } else {
      p.push_back(points[i]);
      w.push_back(weights[i]);
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("finite_support weights: must sum to 1");
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    w[i] /= total;
    mean += w[i] * p[i];
  }
  RewardModel m;
  m.shape_ = {Family::finite_support, 1.0};
  m.mean_ = mean;
  m.points_ = std::move(p);
  m.weights_ = std::move(w);
  return m;
}

RewardModel RewardModel::point_mass(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw std::invalid_argument("point_mass value: must be finite and nonnegative");
  RewardModel m;
  m.shape_ = {Family::point_mass, 1.0};
  m.mean_ = value;
  return m;
}

double mean_upper(const FamilyShape& shape) {
  switch (shape.family) {
    case Family::bernoulli: return 1.0;
    case Family::gaussian: return kInf;
    case Family::poisson: return kInf;
    case Family::exponential: return kInf;
    case Family::finite_support: return 1.0;
    case Family::point_mass: return kInf;
  }
  return kInf;
}

double mean_lower(const FamilyShape& shape) {
  switch (shape.family) {
    case Family::gaussian: return -kInf;
    default: return 0.0;
  }
}

namespace {

std::uint64_t sample_poisson_count(RngStream& rng, double lambda) {
  if (lambda <= 0.0) return 0;
  // Sum of independent halves keeps Knuth's product method in a safe
  // floating-point range for large means.
  if (lambda > 30.0)
    return sample_poisson_count(rng, lambda / 2) + sample_poisson_count(rng, lambda / 2);
  const double limit = std::exp(-lambda);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform();
  } while (p > limit);
  return k - 1;
}

}  // namespace

double sample(const RewardModel& model, RngStream& rng) {
  switch (model.family()) {
    case Family::bernoulli:
      return rng.uniform() < model.mean() ? 1.0 : 0.0;
    case Family::gaussian:
      return model.mean() + std::sqrt(model.sigma2()) * sample_standard_normal(rng);
    case Family::poisson:
      return static_cast<double>(sample_poisson_count(rng, model.mean()));
    case Family::exponential:
      return -model.mean() * std::log1p(-rng.uniform());
    case Family::finite_support: {
      const double u = rng.uniform();
      double cum = 0.0;
      for (std::size_t i = 0; i < model.points().size(); ++i) {
        cum += model.weights()[i];
        if (u < cum) return model.points()[i];
      }
      return model.points().back();
    }
    case Family::point_mass:
      return model.mean();
  }
  throw std::logic_error("sample: unknown family");
}

double kl_mean(const FamilyShape& shape, double mu1, double mu2) {
  switch (shape.family) {
    case Family::bernoulli: {
      if (!(mu1 >= 0.0 && mu1 <= 1.0) || !(mu2 >= 0.0 && mu2 <= 1.0))
        throw std::domain_error("kl_mean bernoulli: means must lie in [0, 1]");
      if (mu1 == mu2) return 0.0;
      return xlogx_over(mu1, mu2) + xlogx_over(1.0 - mu1, 1.0 - mu2);
    }
    case Family::gaussian: {
      const double d = mu1 - mu2;
      return d * d / (2.0 * shape.sigma2);
    }
    case Family::poisson: {
      if (mu1 < 0.0 || mu2 < 0.0)
        throw std::domain_error("kl_mean poisson: means must be nonnegative");
      if (mu1 == mu2) return 0.0;
      if (mu2 == 0.0) return kInf;
      if (mu1 == 0.0) return mu2;
      return mu2 - mu1 + mu1 * std::log(mu1 / mu2);
    }
    case Family::exponential: {
      if (mu1 < 0.0 || mu2 < 0.0)
        throw std::domain_error("kl_mean exponential: means must be nonnegative");
      if (mu1 == mu2) return 0.0;
      if (mu1 == 0.0 || mu2 == 0.0) return kInf;
      return std::log(mu2 / mu1) + mu1 / mu2 - 1.0;
    }
    case Family::point_mass:
      return mu1 == mu2 ? 0.0 : kInf;
    case Family::finite_support:
      throw std::invalid_argument("kl_mean: finite_support is not a one-parameter family");
  }
  throw std::logic_error("kl_mean: unknown family");
}

void EmpiricalDist::add(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("empirical observation: must lie in [0, 1]");
  auto it = std::lower_bound(points.begin(), points.end(), x);
  const std::size_t pos = static_cast<std::size_t>(it - points.begin());
  if (it != points.end() && *it == x) {
    ++counts[pos];
  } else {
    points.insert(it, x);
    counts.insert(counts.begin() + static_cast<std::ptrdiff_t>(pos), 1);
  }
  ++n;
  sum += x;
}

namespace {

// Dual objective g(lambda) = sum_i w_i log(1 - lambda (x_i - mu)) and its
// derivative; concave in lambda on [0, 1/(1-mu)].
double kinf_dual(const std::vector<double>& points, const std::vector<double>& weights,
                 double mean, double mu) {
  if (mu <= mean) return 0.0;
  if (mu >= 1.0) return kInf;

  const double lambda_max = 1.0 / (1.0 - mu);
  auto deriv = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double arg = 1.0 - lambda * (points[i] - mu);
      if (arg <= 0.0) return -kInf;
      s += weights[i] * (mu - points[i]) / arg;
    }
    return s;
  };
  auto value = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double arg = 1.0 - lambda * (points[i] - mu);
      if (arg <= 0.0) return -kInf;
      s += weights[i] * std::log(arg);
    }
    return s;
  };

  double lo = 0.0, hi = lambda_max;
  if (deriv(lambda_max) >= 0.0) {
    lo = lambda_max;  // maximum sits on the boundary (no mass near 1)
  } else {
    for (int it = 0; it < 100 && hi - lo > 1e-12 * lambda_max; ++it) {
      const double mid = 0.5 * (lo + hi);
      (deriv(mid) >= 0.0 ? lo : hi) = mid;
    }
  }
  return std::max(value(lo), 0.0);
}

}  // namespace

double kinf(const EmpiricalDist& dist, double mu) {
  if (dist.n == 0) throw std::invalid_argument("kinf: empty empirical distribution");
  std::vector<double> w(dist.counts.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<double>(dist.counts[i]) / static_cast<double>(dist.n);
  return kinf_dual(dist.points, w, dist.mean(), mu);
}

double kinf(const RewardModel& model, double mu) {
  switch (model.family()) {
    case Family::bernoulli:
      if (mu <= model.mean()) return 0.0;
      if (mu >= 1.0) return model.mean() == 1.0 && mu == 1.0 ? 0.0 : kInf;
      return kl_mean(model.shape(), model.mean(), mu);
    case Family::gaussian:
    case Family::poisson:
    case Family::exponential:
      if (mu <= model.mean()) return 0.0;
      return kl_mean(model.shape(), model.mean(), mu);
    case Family::finite_support:
      return kinf_dual(model.points(), model.weights(), model.mean(), mu);
    case Family::point_mass:
      return mu <= model.mean() ? 0.0 : kInf;
  }
  throw std::logic_error("kinf: unknown family");
}

double sample_standard_normal(RngStream& rng) {
  const double u1 = 1.0 - rng.uniform();  // in (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(RngStream& rng, double shape) {
  if (!(shape >= 1.0)) throw std::invalid_argument("sample_gamma shape: must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_standard_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(RngStream& rng, double a, double b) {
  const double ga = sample_gamma(rng, a);
  const double gb = sample_gamma(rng, b);
  return ga / (ga + gb);
}

}  // namespace bb
