#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bb/oracle.hpp"
#include "bb/policies.hpp"
#include "bb/simulator.hpp"

// Experiment harness: named presets, flat key=value config files, a
// replication runner that spreads (algorithm, replication) pairs over a
// worker pool deterministically, and CSV/summary writers.

namespace bb {

struct AlgorithmSpec {
  enum class Kind { klucb, thompson, escb, oracle };
  Kind kind = Kind::klucb;
  double d = 3.0;      // exploration parameter (klucb, escb)
  std::string label;   // canonical name, e.g. "klucb:1", "ts", "escb:8"

  // Parses tokens like "klucb:1", "ts", "escb:8", "oracle". An omitted d
  // defaults to 3 for klucb and to 4 * budget for escb.
  static AlgorithmSpec parse(const std::string& token, double budget);
};

std::unique_ptr<Policy> make_policy(const AlgorithmSpec& spec, const BanditInstance& instance);

struct ExperimentConfig {
  std::string name = "custom";
  BanditInstance instance;
  std::uint64_t horizon = 20000;
  std::uint64_t reps = 200;
  std::uint64_t seed = 12345;
  std::vector<AlgorithmSpec> algorithms;
  int checkpoint_count = 50;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "results";
};

// Named instances: sim1..sim4 (five Bernoulli arms each) with their default
// algorithm line-ups.
ExperimentConfig preset_config(const std::string& name);

// Flat key=value config file (comma-separated arrays, '#' comments).
// Recognized keys: preset, family, mu, cost, budget, rho, horizon, reps,
// seed, algs, checkpoints, workers, out. Throws std::invalid_argument with
// a field-level message on any violation.
ExperimentConfig load_config(const std::string& path);

struct AlgorithmResult {
  AlgorithmSpec spec;
  AggregateCurves curves;
  double max_budget_excess = 0.0;   // max over replications and rounds
  double max_saturation_gap = 0.0;
};

struct ExperimentResult {
  OracleSolution solution;
  LowerBound lower_bound;
  std::vector<AlgorithmResult> algorithms;
};

// Runs every algorithm for the configured number of replications
// (replication r of algorithm g uses the stream key derived from
// (seed, hash(g), r)), aggregates, and writes regret_curves.csv,
// arm_counts.csv and summary.txt into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

// The runner without file output (used by tests).
ExperimentResult run_experiment_in_memory(const ExperimentConfig& config);

// Text block with the instance geometry: threshold ratio, per-arm classes
// (including the pseudo-arm), optimal gain, and lower-bound constants.
std::string describe_instance(const ExperimentConfig& config);

std::uint64_t algorithm_stream_id(const std::string& label);  // FNV-1a

}  // namespace bb
