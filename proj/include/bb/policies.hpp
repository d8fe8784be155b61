#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bb/arms.hpp"
#include "bb/indices.hpp"
#include "bb/oracle.hpp"

// Selection policies. Each round a policy returns per-arm inclusion
// probabilities; the simulator draws the actual subset and feeds observed
// rewards back. Policies see only family shapes and costs, never the true
// means.

namespace bb {

// Sufficient statistics for one arm's observed rewards.
struct ArmStats {
  std::uint64_t pulls = 0;
  double reward_sum = 0.0;
  std::uint64_t successes = 0;  // bernoulli rewards only
  std::uint64_t failures = 0;
  EmpiricalDist empirical;      // finite-support arms only

  double mean() const { return pulls == 0 ? 0.0 : reward_sum / static_cast<double>(pulls); }
};

// Expected inclusion per arm for one round, plus the slack mass assigned to
// the budget-slack pseudo-arm. `rho_hat` is the policy's estimated
// threshold ratio; it is undefined during forced initialization rounds.
struct InclusionVector {
  std::vector<double> q;
  double q_pseudo = 0.0;
  bool rho_hat_defined = false;
  double rho_hat = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // `t` is the number of completed rounds.
  virtual InclusionVector select(std::uint64_t t, RngStream& rng) = 0;
  virtual void update(std::size_t arm, double reward) = 0;

  const std::string& name() const { return name_; }
  std::size_t num_arms() const { return costs_.size(); }

 protected:
  Policy(std::string name, std::vector<double> costs, double budget, double rho);

  // Runs the fractional knapsack on per-arm optimistic values and packages
  // the result (with the slack mass) as an inclusion vector.
  InclusionVector knapsack_inclusion(const std::vector<double>& values) const;

  // Deterministic one-arm inclusion used while some arm is still unpulled;
  // clipped to the budget so the per-round constraint always holds.
  InclusionVector forced_inclusion(std::size_t arm) const;

  std::string name_;
  std::vector<double> costs_;
  double budget_;
  double rho_;
};

// Draws the played subset: each arm enters independently with probability
// q[a]. The pseudo-arm is never drawn; its mass is tracked analytically.
std::vector<std::size_t> draw_subset(const InclusionVector& iv, RngStream& rng);

// Optimism in the face of uncertainty: upper confidence bounds from the
// mean-KL ball of radius f_d(t) / pulls, pushed through the knapsack.
class KlUcbPolicy : public Policy {
 public:
  KlUcbPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs, double budget,
              double rho, double d);

  InclusionVector select(std::uint64_t t, RngStream& rng) override;
  void update(std::size_t arm, double reward) override;

  const ArmStats& stats(std::size_t arm) const { return stats_.at(arm); }

 private:
  std::vector<FamilyShape> shapes_;
  double d_;
  std::vector<ArmStats> stats_;
};

// Posterior sampling for Bernoulli rewards under independent uniform
// priors: one Beta draw per arm, pushed through the knapsack.
class ThompsonPolicy : public Policy {
 public:
  ThompsonPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs, double budget,
                 double rho);

  InclusionVector select(std::uint64_t t, RngStream& rng) override;
  void update(std::size_t arm, double reward) override;

  const ArmStats& stats(std::size_t arm) const { return stats_.at(arm); }

 private:
  std::vector<ArmStats> stats_;
};

// Combinatorial optimism for the unit-cost, integer-budget, rho = 0 case:
// scores every size-budget subset with a joint confidence bound and plays
// the best one. Ties resolve to the first subset in lexicographic order.
class EscbPolicy : public Policy {
 public:
  EscbPolicy(std::vector<FamilyShape> shapes, std::vector<double> costs, double budget,
             double rho, double d);

  InclusionVector select(std::uint64_t t, RngStream& rng) override;
  void update(std::size_t arm, double reward) override;

  // Exposed selection core: best size-budget subset at exploration level f_t.
  std::vector<std::size_t> escb_select(double f_t) const;

  const ArmStats& stats(std::size_t arm) const { return stats_.at(arm); }

 private:
  std::size_t subset_size_;
  double d_;
  std::vector<ArmStats> stats_;
};

// Plays the precomputed optimal inclusion vector every round.
class StaticOraclePolicy : public Policy {
 public:
  explicit StaticOraclePolicy(const BanditInstance& instance);

  InclusionVector select(std::uint64_t t, RngStream& rng) override;
  void update(std::size_t arm, double reward) override;

 private:
  InclusionVector fixed_;
};

std::vector<FamilyShape> instance_shapes(const BanditInstance& instance);

}  // namespace bb
