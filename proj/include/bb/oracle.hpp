#pragma once

#include <span>
#include <vector>

#include "bb/arms.hpp"

// Static problem description and the fractional-knapsack oracle: which arms
// a fully informed player includes each round, the resulting per-round gain,
// and the information-theoretic lower-bound constants that calibrate the
// regret curves.

namespace bb {

struct ArmSpec {
  RewardModel reward;
  double cost = 1.0;
};

// K arms with known positive costs, a per-round budget, and an indifference
// ratio `rho`: including an arm is worth it only while its mean-per-cost
// ratio clears rho. `has_pseudo_arm` marks instances extended with the
// budget-slack pseudo-arm (always last; excluded from lower-bound sums).
struct BanditInstance {
  std::vector<ArmSpec> arms;
  double budget = 1.0;
  double rho = 0.0;
  bool has_pseudo_arm = false;

  std::size_t num_arms() const { return arms.size(); }
  std::vector<double> means() const;
  std::vector<double> costs() const;
  void validate() const;  // throws std::invalid_argument naming the bad field
};

// Classification of each arm by its mean-per-cost ratio against the
// threshold ratio rho_star. Suboptimal arms split by whether matching the
// threshold is achievable within the arm's family (cost * rho_star below
// the largest achievable mean) or not.
enum class ArmClass {
  optimal,               // ratio above rho_star; always included
  margin,                // ratio equal to rho_star; fractionally included
  suboptimal,            // ratio below rho_star, threshold reachable
  suboptimal_unreachable // ratio below rho_star, threshold out of reach
};

const char* arm_class_label(ArmClass c);  // "L", "M", "N_under", "N_over"

struct OracleSolution {
  double rho_star = 0.0;
  std::vector<ArmClass> classes;
  std::vector<double> q_star;    // expected inclusion per arm, in [0, 1]
  double g_star = 0.0;           // optimal expected per-round gain
  bool pseudo_arm_on_margin = false;  // true iff rho_star == rho
};

// Solves max sum_a q_a (mu_a - c_a rho) over q in [0,1]^K with
// sum_a c_a q_a <= budget. `mu_plus` optionally supplies each arm's largest
// achievable mean for the suboptimal/unreachable split (defaults to
// +infinity, i.e. every suboptimal arm counts as reachable).
OracleSolution solve_fractional_knapsack(std::span<const double> mu,
                                         std::span<const double> cost, double budget,
                                         double rho, std::span<const double> mu_plus = {});

OracleSolution solve_instance(const BanditInstance& instance);

// Evaluates the optimal gain formula
//   sum_{a in L} mu_a + rho_star (budget - sum_{a in L} c_a) - budget * rho
// for the given solution.
double optimal_gain(const OracleSolution& solution, const BanditInstance& instance);

// Appends the budget-slack pseudo-arm: cost = budget, reward a point mass
// at budget * rho, so its ratio is exactly rho.
BanditInstance extend_with_pseudo_arm(const BanditInstance& instance);

// Asymptotic lower-bound constants: regret grows at least
// coefficient * log(T), and each reachable suboptimal arm must be included
// at least per_arm_log_coefficient[a] * log(T) times in expectation.
struct LowerBound {
  double coefficient = 0.0;
  std::vector<double> per_arm_log_coefficient;
};

LowerBound lower_bound_constant(const BanditInstance& instance);

}  // namespace bb
