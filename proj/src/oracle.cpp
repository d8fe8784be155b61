#include "bb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> BanditInstance::means() const {
  std::vector<double> m(arms.size());
  for (std::size_t a = 0; a < arms.size(); ++a) m[a] = arms[a].reward.mean();
  return m;
}

std::vector<double> BanditInstance::costs() const {
  std::vector<double> c(arms.size());
  for (std::size_t a = 0; a < arms.size(); ++a) c[a] = arms[a].cost;
  return c;
}

void BanditInstance::validate() const {
  if (arms.empty()) throw std::invalid_argument("arms: must be nonempty");
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (!(arms[a].cost > 0.0) || !std::isfinite(arms[a].cost))
      throw std::invalid_argument("cost[" + std::to_string(a) + "]: must be positive and finite");
  }
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("budget: must be positive and finite");
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("rho: must be nonnegative and finite");
}

const char* arm_class_label(ArmClass c) {
  switch (c) {
    case ArmClass::optimal: return "L";
    case ArmClass::margin: return "M";
    case ArmClass::suboptimal: return "N_under";
    case ArmClass::suboptimal_unreachable: return "N_over";
  }
  return "?";
}

OracleSolution solve_fractional_knapsack(std::span<const double> mu,
                                         std::span<const double> cost, double budget,
                                         double rho, std::span<const double> mu_plus) {
  const std::size_t k = mu.size();
  if (k == 0 || cost.size() != k)
    throw std::invalid_argument("mu/cost: must be nonempty and of equal length");
  if (!mu_plus.empty() && mu_plus.size() != k)
    throw std::invalid_argument("mu_plus: length must match mu");

  std::vector<double> ratio(k);
  for (std::size_t a = 0; a < k; ++a) {
    if (!(cost[a] > 0.0))
      throw std::invalid_argument("cost[" + std::to_string(a) + "]: must be positive");
    ratio[a] = mu[a] / cost[a];
  }

  // Threshold ratio: rho itself if everything strictly better than rho fits
  // in the budget; otherwise the ratio at which cumulative cost (taken in
  // decreasing ratio order, whole tie-groups at a time) first reaches it.
  double interesting_cost = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    if (ratio[a] > rho) interesting_cost += cost[a];

  double rho_star = rho;
  if (interesting_cost >= budget) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });
    double cum = 0.0;
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      while (j < k && ratio[order[j]] == ratio[order[i]]) cum += cost[order[j++]];
      if (cum >= budget) {
        rho_star = ratio[order[i]];
        break;
      }
      i = j;
    }
  }

  OracleSolution sol;
  sol.rho_star = rho_star;
  sol.pseudo_arm_on_margin = (rho_star == rho);
  sol.classes.resize(k);
  sol.q_star.assign(k, 0.0);

  double optimal_cost = 0.0, margin_cost = 0.0, optimal_mean = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (ratio[a] > rho_star) {
      sol.classes[a] = ArmClass::optimal;
      sol.q_star[a] = 1.0;
      optimal_cost += cost[a];
      optimal_mean += mu[a];
    } else if (ratio[a] == rho_star) {
      sol.classes[a] = ArmClass::margin;
    } else {
      const double reach = mu_plus.empty() ? kInf : mu_plus[a];
      sol.classes[a] = cost[a] * rho_star < reach ? ArmClass::suboptimal
                                                  : ArmClass::suboptimal_unreachable;
    }
  }

  // Margin arms share the leftover budget equally (per unit cost) when the
  // threshold clears rho; at rho itself, leaving them out is also optimal.
  if (rho_star > rho) {
    for (std::size_t a = 0; a < k; ++a)
      if (sol.classes[a] == ArmClass::margin) margin_cost += cost[a];
    const double fill = (budget - optimal_cost) / margin_cost;
    for (std::size_t a = 0; a < k; ++a)
      if (sol.classes[a] == ArmClass::margin) sol.q_star[a] = fill;
  }

  sol.g_star = optimal_mean + rho_star * (budget - optimal_cost) - budget * rho;
  return sol;
}

OracleSolution solve_instance(const BanditInstance& instance) {
  instance.validate();
  // The pseudo-arm's ratio is rho by construction; recomputing it as
  // (budget * rho) / budget can drift by an ulp and break exact tie-group
  // membership. Solve over the real arms and append its row analytically:
  // an arm pinned at ratio rho never shifts the threshold, joins the margin
  // iff the threshold stops at rho, and takes no mass in the static optimum.
  const std::size_t real_arms =
      instance.has_pseudo_arm ? instance.num_arms() - 1 : instance.num_arms();
  std::vector<double> mu(real_arms), cost(real_arms), reach(real_arms);
  for (std::size_t a = 0; a < real_arms; ++a) {
    mu[a] = instance.arms[a].reward.mean();
    cost[a] = instance.arms[a].cost;
    reach[a] = mean_upper(instance.arms[a].reward.shape());
  }
  OracleSolution sol =
      solve_fractional_knapsack(mu, cost, instance.budget, instance.rho, reach);
  if (instance.has_pseudo_arm) {
    sol.classes.push_back(sol.pseudo_arm_on_margin ? ArmClass::margin
                                                   : ArmClass::suboptimal_unreachable);
    sol.q_star.push_back(0.0);
  }
  return sol;
}

double optimal_gain(const OracleSolution& solution, const BanditInstance& instance) {
  double optimal_mean = 0.0, optimal_cost = 0.0;
  for (std::size_t a = 0; a < instance.num_arms(); ++a) {
    if (solution.classes.at(a) == ArmClass::optimal) {
      optimal_mean += instance.arms[a].reward.mean();
      optimal_cost += instance.arms[a].cost;
    }
  }
  return optimal_mean + solution.rho_star * (instance.budget - optimal_cost) -
         instance.budget * instance.rho;
}

BanditInstance extend_with_pseudo_arm(const BanditInstance& instance) {
  instance.validate();
  if (instance.has_pseudo_arm)
    throw std::invalid_argument("instance: already carries a pseudo-arm");
  BanditInstance ext = instance;
  ext.arms.push_back({RewardModel::point_mass(instance.budget * instance.rho), instance.budget});
  ext.has_pseudo_arm = true;
  return ext;
}

LowerBound lower_bound_constant(const BanditInstance& instance) {
  const OracleSolution sol = solve_instance(instance);
  const std::size_t real_arms =
      instance.has_pseudo_arm ? instance.num_arms() - 1 : instance.num_arms();

  LowerBound lb;
  lb.per_arm_log_coefficient.assign(instance.num_arms(), 0.0);
  for (std::size_t a = 0; a < real_arms; ++a) {
    if (sol.classes[a] != ArmClass::suboptimal) continue;
    const double cost = instance.arms[a].cost;
    const double target = cost * sol.rho_star;
    const double k = kinf(instance.arms[a].reward, target);
    if (!(k > 0.0))
      throw std::logic_error("lower_bound_constant: nonpositive kinf for a suboptimal arm");
    lb.per_arm_log_coefficient[a] = 1.0 / k;
    lb.coefficient += cost * (sol.rho_star - instance.arms[a].reward.mean() / cost) / k;
  }
  return lb;
}

}  // namespace bb
