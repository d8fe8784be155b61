#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bb/oracle.hpp"
#include "bb/policies.hpp"

// Episode simulation: runs a policy against an instance round by round,
// enforcing the budget every round, and records expected (pseudo) regret,
// realized gain, and per-arm activity at geometrically spaced checkpoints.

namespace bb {

// Checkpoint schedule: `count` geometrically spaced rounds from 10 to the
// horizon (deduplicated), always ending at the horizon itself.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, int count = 50);

struct RunConfig {
  std::uint64_t horizon = 20000;
  std::uint64_t seed = 0;  // random stream key for this episode
  std::vector<std::uint64_t> checkpoints;  // default: geometric_checkpoints(horizon)
};

// One round's expected regret, split into its three nonnegative sources.
struct RegretIncrement {
  double total = 0.0;
  double excluded_optimal = 0.0;    // mass missing from arms above the threshold
  double included_suboptimal = 0.0; // mass placed on arms below the threshold
  double slack = 0.0;               // unspent budget while the threshold clears rho
};

// Expected per-round regret of playing inclusion vector `iv` instead of the
// optimal one. All three components are nonnegative and sum to
// g_star - sum_a q_a (mu_a - c_a rho).
RegretIncrement pseudo_regret_increment(const InclusionVector& iv,
                                        const BanditInstance& instance,
                                        const OracleSolution& solution);

struct CheckpointRow {
  std::uint64_t t = 0;
  double regret = 0.0;                  // cumulative pseudo-regret
  double excluded_optimal = 0.0;        // cumulative decomposition terms
  double included_suboptimal = 0.0;
  double slack = 0.0;
  double realized_gain = 0.0;           // cumulative sampled gain (diagnostic)
  double pseudo_mass = 0.0;             // cumulative q_pseudo
  std::vector<std::uint64_t> pulls;     // realized per-arm draw counts
  std::vector<double> expected_pulls;   // cumulative per-arm q mass
};

struct RunTrace {
  std::vector<CheckpointRow> rows;
  double max_budget_excess = 0.0;   // max over rounds of (sum c_a q_a - budget)
  double max_saturation_gap = 0.0;  // max |sum c_a q_a - budget| when rho_hat > rho
};

// Simulates one episode. Throws std::logic_error if any round exceeds the
// budget by more than 1e-12 or, when the policy's threshold estimate clears
// rho, misses saturation by more than 1e-9.
RunTrace run_episode(const BanditInstance& instance, Policy& policy, const RunConfig& config);

// Replication means and standard errors at shared checkpoints.
struct AggregateCurves {
  std::vector<std::uint64_t> t;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;
  std::vector<double> mean_realized_gain;
  std::vector<double> mean_pseudo_mass;
  // Decomposition terms: excluded-optimal, included-suboptimal, slack.
  std::vector<std::array<double, 3>> mean_terms;    // [checkpoint][term]
  std::vector<std::array<double, 3>> stderr_terms;  // [checkpoint][term]
  std::vector<std::vector<double>> mean_pulls;      // [checkpoint][arm]
  std::vector<std::vector<double>> stderr_pulls;    // [checkpoint][arm]
};

AggregateCurves aggregate(std::span<const RunTrace> traces);

}  // namespace bb
