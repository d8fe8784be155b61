#include "bb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bb {

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, int count) {
  std::vector<std::uint64_t> cps;
  if (horizon == 0 || count <= 0) return cps;
  const double lo = static_cast<double>(std::min<std::uint64_t>(10, horizon));
  const double hi = static_cast<double>(horizon);
  for (int i = 0; i < count; ++i) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    const double v = lo * std::pow(hi / lo, frac);
    std::uint64_t t = static_cast<std::uint64_t>(std::llround(v));
    t = std::clamp<std::uint64_t>(t, 1, horizon);
    if (cps.empty() || t > cps.back()) cps.push_back(t);
  }
  if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
  return cps;
}

RegretIncrement pseudo_regret_increment(const InclusionVector& iv,
                                        const BanditInstance& instance,
                                        const OracleSolution& solution) {
  const std::size_t k = instance.num_arms();
  if (iv.q.size() != k || solution.classes.size() != k)
    throw std::invalid_argument("pseudo_regret_increment: size mismatch");

  RegretIncrement inc;
  double fill = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    const double cost = instance.arms[a].cost;
    const double ratio = instance.arms[a].reward.mean() / cost;
    fill += cost * iv.q[a];
    if (solution.classes[a] == ArmClass::optimal) {
      inc.excluded_optimal += cost * (ratio - solution.rho_star) * (1.0 - iv.q[a]);
    } else {
      // margin arms contribute exactly zero here (ratio == rho_star)
      inc.included_suboptimal += cost * (solution.rho_star - ratio) * iv.q[a];
    }
  }
  inc.slack = (solution.rho_star - instance.rho) * (instance.budget - fill);
  inc.total = inc.excluded_optimal + inc.included_suboptimal + inc.slack;
  return inc;
}

RunTrace run_episode(const BanditInstance& instance, Policy& policy,
                     const RunConfig& config) {
  instance.validate();
  const std::size_t k = instance.num_arms();
  if (policy.num_arms() != k)
    throw std::invalid_argument("policy: arm count does not match the instance");

  std::vector<std::uint64_t> checkpoints =
      config.checkpoints.empty() ? geometric_checkpoints(config.horizon) : config.checkpoints;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > config.horizon ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
      throw std::invalid_argument("checkpoints: must be strictly increasing within [1, horizon]");
  }

  const OracleSolution solution = solve_instance(instance);
  RngStream rng(config.seed);

  RunTrace trace;
  trace.rows.reserve(checkpoints.size());
  double regret = 0.0, excluded = 0.0, included = 0.0, slack = 0.0;
  double realized_gain = 0.0, pseudo_mass = 0.0;
  std::vector<std::uint64_t> pulls(k, 0);
  std::vector<double> expected_pulls(k, 0.0);
  std::size_t next_cp = 0;

  for (std::uint64_t round = 1; round <= config.horizon; ++round) {
    rng.set_substream(round);
    const InclusionVector iv = policy.select(round - 1, rng);
    if (iv.q.size() != k)
      throw std::logic_error("select: inclusion vector has the wrong length");

    double fill = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      if (!(iv.q[a] >= 0.0 && iv.q[a] <= 1.0))
        throw std::logic_error("select: inclusion probability outside [0, 1] at round " +
                               std::to_string(round));
      fill += instance.arms[a].cost * iv.q[a];
    }
    trace.max_budget_excess = std::max(trace.max_budget_excess, fill - instance.budget);
    if (fill > instance.budget + 1e-12)
      throw std::logic_error("budget violated at round " + std::to_string(round));
    if (iv.rho_hat_defined && iv.rho_hat > instance.rho) {
      const double gap = std::abs(fill - instance.budget);
      trace.max_saturation_gap = std::max(trace.max_saturation_gap, gap);
      if (gap > 1e-9)
        throw std::logic_error("budget not saturated at round " + std::to_string(round));
    }
    if (std::abs(iv.q_pseudo - (instance.budget - fill) / instance.budget) > 1e-12)
      throw std::logic_error("select: inconsistent pseudo-arm mass at round " +
                             std::to_string(round));

    const RegretIncrement inc = pseudo_regret_increment(iv, instance, solution);
    regret += inc.total;
    excluded += inc.excluded_optimal;
    included += inc.included_suboptimal;
    slack += inc.slack;
    pseudo_mass += iv.q_pseudo;
    for (std::size_t a = 0; a < k; ++a) expected_pulls[a] += iv.q[a];

    for (std::size_t a : draw_subset(iv, rng)) {
      const double reward = sample(instance.arms[a].reward, rng);
      ++pulls[a];
      realized_gain += reward - instance.arms[a].cost * instance.rho;
      policy.update(a, reward);
    }

    if (next_cp < checkpoints.size() && round == checkpoints[next_cp]) {
      CheckpointRow row;
      row.t = round;
      row.regret = regret;
      row.excluded_optimal = excluded;
      row.included_suboptimal = included;
      row.slack = slack;
      row.realized_gain = realized_gain;
      row.pseudo_mass = pseudo_mass;
      row.pulls = pulls;
      row.expected_pulls = expected_pulls;
      trace.rows.push_back(std::move(row));
      ++next_cp;
    }
  }
  return trace;
}

AggregateCurves aggregate(std::span<const RunTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const std::size_t cps = traces[0].rows.size();
  const std::size_t k = cps == 0 ? 0 : traces[0].rows[0].pulls.size();
  for (const RunTrace& tr : traces)
    if (tr.rows.size() != cps)
      throw std::invalid_argument("aggregate: traces disagree on checkpoints");

  const double r = static_cast<double>(traces.size());
  // Standard error of the mean from running sums; zero for a single trace.
  const auto sem = [r](double sum, double sum_sq) {
    if (r < 2.0) return 0.0;
    const double var = std::max(0.0, (sum_sq - sum * sum / r) / (r - 1.0));
    return std::sqrt(var / r);
  };

  AggregateCurves agg;
  agg.t.resize(cps);
  agg.mean_regret.assign(cps, 0.0);
  agg.stderr_regret.assign(cps, 0.0);
  agg.mean_realized_gain.assign(cps, 0.0);
  agg.mean_pseudo_mass.assign(cps, 0.0);
  agg.mean_terms.assign(cps, {0.0, 0.0, 0.0});
  agg.stderr_terms.assign(cps, {0.0, 0.0, 0.0});
  agg.mean_pulls.assign(cps, std::vector<double>(k, 0.0));
  agg.stderr_pulls.assign(cps, std::vector<double>(k, 0.0));

  std::vector<double> pull_sq(k);
  for (std::size_t i = 0; i < cps; ++i) {
    agg.t[i] = traces[0].rows[i].t;
    double reg_sum = 0.0, reg_sq = 0.0;
    std::array<double, 3> term_sum{}, term_sq{};
    std::fill(pull_sq.begin(), pull_sq.end(), 0.0);
    for (const RunTrace& tr : traces) {
      const CheckpointRow& row = tr.rows[i];
      if (row.t != agg.t[i])
        throw std::invalid_argument("aggregate: traces disagree on checkpoints");
      reg_sum += row.regret;
      reg_sq += row.regret * row.regret;
      const std::array<double, 3> terms = {row.excluded_optimal, row.included_suboptimal,
                                           row.slack};
      for (std::size_t j = 0; j < 3; ++j) {
        term_sum[j] += terms[j];
        term_sq[j] += terms[j] * terms[j];
      }
      agg.mean_realized_gain[i] += row.realized_gain;
      agg.mean_pseudo_mass[i] += row.pseudo_mass;
      for (std::size_t a = 0; a < k; ++a) {
        const double n = static_cast<double>(row.pulls[a]);
        agg.mean_pulls[i][a] += n;
        pull_sq[a] += n * n;
      }
    }
    agg.mean_regret[i] = reg_sum / r;
    agg.stderr_regret[i] = sem(reg_sum, reg_sq);
    agg.mean_realized_gain[i] /= r;
    agg.mean_pseudo_mass[i] /= r;
    for (std::size_t j = 0; j < 3; ++j) {
      agg.mean_terms[i][j] = term_sum[j] / r;
      agg.stderr_terms[i][j] = sem(term_sum[j], term_sq[j]);
    }
    for (std::size_t a = 0; a < k; ++a) {
      agg.stderr_pulls[i][a] = sem(agg.mean_pulls[i][a], pull_sq[a]);
      agg.mean_pulls[i][a] /= r;
    }
  }
  return agg;
}

}  // namespace bb
