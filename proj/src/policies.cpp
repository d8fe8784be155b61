#include "bb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bb {

namespace {

void check_costs(const std::vector<double>& costs, double budget, double rho) {
  if (costs.empty()) throw std::invalid_argument("costs: must be nonempty");
  for (std::size_t a = 0; a < costs.size(); ++a)
    if (!(costs[a] > 0.0))
      throw std::invalid_argument("cost[" + std::to_string(a) + "]: must be positive");
  if (!(budget > 0.0)) throw std::invalid_argument("budget: must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho: must be nonnegative");
}

void check_reward_support(const FamilyShape& shape, double reward) {
  switch (shape.family) {
    case Family::bernoulli:
      if (reward != 0.0 && reward != 1.0)
        throw std::domain_error("reward: bernoulli arms produce only 0 or 1");
      return;
    case Family::poisson:
      if (!(reward >= 0.0) || reward != std::floor(reward))
        throw std::domain_error("reward: poisson arms produce nonnegative integers");
      return;
    case Family::exponential:
      if (!(reward >= 0.0)) throw std::domain_error("reward: exponential arms are nonnegative");
      return;
    case Family::finite_support:
      if (!(reward >= 0.0 && reward <= 1.0))
        throw std::domain_error("reward: finite-support arms lie in [0, 1]");
      return;
    case Family::gaussian:
    case Family::point_mass:
      if (!std::isfinite(reward)) throw std::domain_error("reward: must be finite");
      return;
  }
}

void record(ArmStats& s, const FamilyShape& shape, double reward) {
  check_reward_support(shape, reward);
  ++s.pulls;
  s.reward_sum += reward;
  if (shape.family == Family::bernoulli) {
    if (reward == 1.0)
      ++s.successes;
    else
      ++s.failures;
  }
  if (shape.family == Family::finite_support) s.empirical.add(reward);
}

std::size_t first_unpulled(const std::vector<ArmStats>& stats) {
  for (std::size_t a = 0; a < stats.size(); ++a)
    if (stats[a].pulls == 0) return a;
  return stats.size();
}

}  // namespace

Policy::Policy(std::string name, std::vector<double> costs, double budget, double rho)
    : name_(std::move(name)), costs_(std::move(costs)), budget_(budget), rho_(rho) {
  check_costs(costs_, budget_, rho_);
}

InclusionVector Policy::knapsack_inclusion(const std::vector<double>& values) const {
  const OracleSolution sol =
      solve_fractional_knapsack(values, costs_, budget_, rho_);
  InclusionVector iv;
  iv.q = sol.q_star;
  iv.rho_hat = sol.rho_star;
  iv.rho_hat_defined = true;
  double fill = 0.0;
  for (std::size_t a = 0; a < iv.q.size(); ++a) fill += costs_[a] * iv.q[a];
  iv.q_pseudo = (budget_ - fill) / budget_;
  return iv;
}

InclusionVector Policy::forced_inclusion(std::size_t arm) const {
  InclusionVector iv;
  iv.q.assign(costs_.size(), 0.0);
  iv.q[arm] = std::min(1.0, budget_ / costs_[arm]);
  iv.q_pseudo = (budget_ - costs_[arm] * iv.q[arm]) / budget_;
  iv.rho_hat_defined = false;
  return iv;
}

std::vector<std::size_t> draw_subset(const InclusionVector& iv, RngStream& rng) {
  std::vector<std::size_t> subset;
  for (std::size_t a = 0; a < iv.q.size(); ++a) {
    const double u = rng.uniform();  // one draw per arm, always, for determinism
    if (u < iv.q[a]) subset.push_back(a);
  }
  return subset;
}

// ---- KL-UCB ---------------------------------------------------------------

KlUcbPolicy::KlUcbPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs,
                         double budget, double rho, double d)
    : Policy("klucb", std::move(costs), budget, rho), shapes_(std::move(shapes)), d_(d) {
  if (shapes_.size() != costs_.size())
    throw std::invalid_argument("shapes: length must match costs");
  if (!(d_ >= 0.0)) throw std::invalid_argument("d: must be nonnegative");
  stats_.resize(shapes_.size());
}

InclusionVector KlUcbPolicy::select(std::uint64_t t, RngStream&) {
  // Round-robin initialization: one forced arm per round until every arm
  // has an observation (exactly rounds 1..K when all costs fit the budget).
  const std::size_t pending = first_unpulled(stats_);
  if (pending < stats_.size()) return forced_inclusion(pending);
  const double f_t = exploration_rate(d_, t);
  std::vector<double> ucb(stats_.size());
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    const double delta = f_t / static_cast<double>(stats_[a].pulls);
    ucb[a] = shapes_[a].family == Family::finite_support
                 ? klucb_index_finite_support(stats_[a].empirical, delta)
                 : klucb_index(shapes_[a], stats_[a].mean(), delta);
  }
  return knapsack_inclusion(ucb);
}

void KlUcbPolicy::update(std::size_t arm, double reward) {
  record(stats_.at(arm), shapes_.at(arm), reward);
}

// ---- Thompson sampling ----------------------------------------------------

ThompsonPolicy::ThompsonPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs,
                               double budget, double rho)
    : Policy("ts", std::move(costs), budget, rho) {
  if (shapes.size() != costs_.size())
    throw std::invalid_argument("shapes: length must match costs");
  for (const FamilyShape& s : shapes)
    if (s.family != Family::bernoulli)
      throw std::invalid_argument("thompson sampling requires bernoulli arms");
  stats_.resize(shapes.size());
}

InclusionVector ThompsonPolicy::select(std::uint64_t, RngStream& rng) {
  std::vector<double> theta(stats_.size());
  for (std::size_t a = 0; a < stats_.size(); ++a)
    theta[a] = ts_posterior_draw(stats_[a].successes, stats_[a].failures, rng);
  return knapsack_inclusion(theta);
}

void ThompsonPolicy::update(std::size_t arm, double reward) {
  record(stats_.at(arm), {Family::bernoulli, 1.0}, reward);
}

// ---- ESCB ------------------------------------------------------------------

EscbPolicy::EscbPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs,
                       double budget, double rho, double d)
    : Policy("escb", std::move(costs), budget, rho), d_(d) {
  if (shapes.size() != costs_.size())
    throw std::invalid_argument("shapes: length must match costs");
  if (!(d_ >= 0.0)) throw std::invalid_argument("d: must be nonnegative");
  for (std::size_t a = 0; a < costs_.size(); ++a)
    if (costs_[a] != 1.0)
      throw std::invalid_argument("escb requires unit costs (cost[" + std::to_string(a) +
                                  "] differs)");
  if (budget != std::floor(budget) || budget < 1.0 ||
      budget > static_cast<double>(costs_.size()))
    throw std::invalid_argument("escb requires an integer budget between 1 and the number of arms");
  if (rho != 0.0) throw std::invalid_argument("escb requires rho = 0");
  for (const FamilyShape& s : shapes)
    if (s.family != Family::bernoulli)
      throw std::invalid_argument("escb requires bernoulli arms");
  subset_size_ = static_cast<std::size_t>(budget);
  stats_.resize(shapes.size());
}

std::vector<std::size_t> EscbPolicy::escb_select(double f_t) const {
  const std::size_t k = stats_.size();
  if (first_unpulled(stats_) < k)
    throw std::logic_error("escb_select: every arm needs at least one observation");

  // Cheap per-arm upper bounds: an arm alone can spend the whole KL budget,
  // so the sum over a subset bounds its joint index from above. Subsets are
  // scored in decreasing bound order and skipped once the bound falls below
  // the best exact index; ties keep the first subset in enumeration order.
  const FamilyShape bern{Family::bernoulli, 1.0};
  std::vector<double> solo(k);
  for (std::size_t a = 0; a < k; ++a)
    solo[a] = klucb_index(bern, stats_[a].mean(),
                          f_t / static_cast<double>(stats_[a].pulls));

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur(subset_size_);
  for (std::size_t i = 0; i < subset_size_; ++i) cur[i] = i;
  for (;;) {
    subsets.push_back(cur);
    std::size_t i = subset_size_;
    while (i > 0 && cur[i - 1] == k - subset_size_ + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < subset_size_; ++j) cur[j] = cur[j - 1] + 1;
  }

  std::vector<double> bound(subsets.size());
  std::vector<std::size_t> order(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    order[s] = s;
    bound[s] = 0.0;
    for (std::size_t a : subsets[s]) bound[s] += solo[a];
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bound[a] > bound[b]; });

  double best_value = -1.0;
  std::size_t best = subsets.size();  // enumeration position of the best subset
  std::vector<EscbArmStat> arm_stats(subset_size_);
  for (std::size_t s : order) {
    if (bound[s] < best_value) break;
    for (std::size_t i = 0; i < subset_size_; ++i) {
      arm_stats[i].mu_hat = stats_[subsets[s][i]].mean();
      arm_stats[i].pulls = stats_[subsets[s][i]].pulls;
    }
    const double value = escb_index(arm_stats, f_t);
    if (value > best_value || (value == best_value && s < best)) {
      best_value = value;
      best = s;
    }
  }
  return subsets[best];
}

InclusionVector EscbPolicy::select(std::uint64_t t, RngStream&) {
  const std::size_t pending = first_unpulled(stats_);
  if (pending < stats_.size()) return forced_inclusion(pending);
  const std::vector<std::size_t> subset = escb_select(exploration_rate(d_, t));
  InclusionVector iv;
  iv.q.assign(stats_.size(), 0.0);
  for (std::size_t a : subset) iv.q[a] = 1.0;
  iv.q_pseudo = (budget_ - static_cast<double>(subset.size())) / budget_;
  iv.rho_hat_defined = false;  // no threshold-ratio estimate in this rule
  return iv;
}

void EscbPolicy::update(std::size_t arm, double reward) {
  record(stats_.at(arm), {Family::bernoulli, 1.0}, reward);
}

// ---- Static oracle ----------------------------------------------------------

StaticOraclePolicy::StaticOraclePolicy(const BanditInstance& instance)
    : Policy("oracle", instance.costs(), instance.budget, instance.rho) {
  const OracleSolution sol = solve_instance(instance);
  fixed_.q = sol.q_star;
  fixed_.rho_hat = sol.rho_star;
  fixed_.rho_hat_defined = true;
  double fill = 0.0;
  for (std::size_t a = 0; a < fixed_.q.size(); ++a) fill += costs_[a] * fixed_.q[a];
  fixed_.q_pseudo = (budget_ - fill) / budget_;
}

InclusionVector StaticOraclePolicy::select(std::uint64_t, RngStream&) { return fixed_; }

void StaticOraclePolicy::update(std::size_t arm, double) {
  if (arm >= costs_.size()) throw std::out_of_range("update: arm index out of range");
}

std::vector<FamilyShape> instance_shapes(const BanditInstance& instance) {
  std::vector<FamilyShape> shapes(instance.num_arms());
  for (std::size_t a = 0; a < instance.num_arms(); ++a)
    shapes[a] = instance.arms[a].reward.shape();
  return shapes;
}

}  // namespace bb
