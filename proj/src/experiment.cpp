#include "bb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bb {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) parts.push_back(trim(cur));
  return parts;
}

double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(field + ": '" + text + "' is not a number");
  }
}

std::uint64_t parse_uint(const std::string& field, const std::string& text) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size() || (!text.empty() && text[0] == '-'))
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(field + ": '" + text + "' is not a nonnegative integer");
  }
}

std::string fmt_g(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string fmt12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

AlgorithmSpec AlgorithmSpec::parse(const std::string& token, double budget) {
  const std::string text = trim(token);
  std::string head = text, param;
  bool has_param = false;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    head = trim(text.substr(0, colon));
    param = trim(text.substr(colon + 1));
    has_param = true;
  }

  AlgorithmSpec spec;
  if (head == "klucb") {
    spec.kind = Kind::klucb;
    spec.d = has_param ? parse_double("algs: klucb d", param) : 3.0;
  } else if (head == "ts") {
    spec.kind = Kind::thompson;
    if (has_param) throw std::invalid_argument("algs: ts takes no parameter");
  } else if (head == "escb") {
    spec.kind = Kind::escb;
    spec.d = has_param ? parse_double("algs: escb d", param) : 4.0 * budget;
  } else if (head == "oracle") {
    spec.kind = Kind::oracle;
    if (has_param) throw std::invalid_argument("algs: oracle takes no parameter");
  } else {
    throw std::invalid_argument("algs: unknown algorithm '" + head + "'");
  }
  if ((spec.kind == Kind::klucb || spec.kind == Kind::escb) && !(spec.d >= 0.0))
    throw std::invalid_argument("algs: exploration parameter d must be nonnegative");

  switch (spec.kind) {
    case Kind::klucb: spec.label = "klucb:" + fmt_g(spec.d); break;
    case Kind::escb: spec.label = "escb:" + fmt_g(spec.d); break;
    case Kind::thompson: spec.label = "ts"; break;
    case Kind::oracle: spec.label = "oracle"; break;
  }
  return spec;
}

std::unique_ptr<Policy> make_policy(const AlgorithmSpec& spec, const BanditInstance& instance) {
  switch (spec.kind) {
    case AlgorithmSpec::Kind::klucb:
      return std::make_unique<KlUcbPolicy>(instance_shapes(instance), instance.costs(),
                                           instance.budget, instance.rho, spec.d);
    case AlgorithmSpec::Kind::thompson:
      return std::make_unique<ThompsonPolicy>(instance_shapes(instance), instance.costs(),
                                              instance.budget, instance.rho);
    case AlgorithmSpec::Kind::escb:
      return std::make_unique<EscbPolicy>(instance_shapes(instance), instance.costs(),
                                          instance.budget, instance.rho, spec.d);
    case AlgorithmSpec::Kind::oracle:
      return std::make_unique<StaticOraclePolicy>(instance);
  }
  throw std::logic_error("make_policy: unknown algorithm kind");
}

namespace {

BanditInstance bernoulli_instance(const std::vector<double>& mu, const std::vector<double>& cost,
                                  double budget, double rho) {
  BanditInstance inst;
  for (std::size_t a = 0; a < mu.size(); ++a)
    inst.arms.push_back({RewardModel::bernoulli(mu[a]), cost[a]});
  inst.budget = budget;
  inst.rho = rho;
  return inst;
}

std::vector<AlgorithmSpec> parse_algs(const std::vector<std::string>& tokens, double budget) {
  if (tokens.empty()) throw std::invalid_argument("algs: must be nonempty");
  std::vector<AlgorithmSpec> specs;
  for (const std::string& tok : tokens) specs.push_back(AlgorithmSpec::parse(tok, budget));
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j)
      if (specs[i].label == specs[j].label)
        throw std::invalid_argument("algs: duplicate algorithm '" + specs[i].label + "'");
  return specs;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  std::vector<std::string> algs;
  if (name == "sim1") {
    cfg.instance = bernoulli_instance({0.5, 0.45, 0.45, 0.4, 0.3}, {1, 1, 1, 1, 1}, 2.0, 0.0);
    algs = {"klucb:1", "klucb:3", "escb:8", "ts", "oracle"};
  } else if (name == "sim2") {
    cfg.instance = bernoulli_instance({0.7, 0.6, 0.5, 0.3, 0.2}, {1, 1, 1, 1, 1}, 3.0, 0.0);
    algs = {"klucb:1", "klucb:3", "escb:12", "ts", "oracle"};
  } else if (name == "sim3") {
    cfg.instance =
        bernoulli_instance({0.5, 0.45, 0.45, 0.4, 0.3}, {0.8, 1, 1, 0.8, 0.6}, 2.0, 0.5);
    algs = {"klucb:1", "klucb:3", "ts", "oracle"};
  } else if (name == "sim4") {
    cfg.instance =
        bernoulli_instance({0.7, 0.6, 0.5, 0.3, 0.2}, {1.5, 1, 1, 1, 2.5}, 3.0, 0.4);
    algs = {"klucb:1", "klucb:3", "ts", "oracle"};
  } else {
    throw std::invalid_argument("preset: unknown preset '" + name +
                                "' (expected sim1, sim2, sim3 or sim4)");
  }
  cfg.algorithms = parse_algs(algs, cfg.instance.budget);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");

  std::map<std::string, std::string> kv;
  std::vector<std::string> order;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw std::invalid_argument("duplicate key '" + key + "'");
    kv[key] = value;
    order.push_back(key);
  }

  static const std::vector<std::string> known = {
      "preset", "family",  "mu",   "cost",        "budget",  "rho",
      "horizon", "reps",   "seed", "algs",        "checkpoints", "workers", "out"};
  for (const std::string& key : order)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown key '" + key + "'");

  ExperimentConfig cfg;
  const bool has_preset = kv.count("preset") > 0;
  if (has_preset) {
    for (const char* banned : {"family", "mu", "cost", "budget", "rho"})
      if (kv.count(banned))
        throw std::invalid_argument(std::string(banned) + ": cannot be combined with preset");
    cfg = preset_config(kv.at("preset"));
  } else {
    if (!kv.count("mu")) throw std::invalid_argument("mu: missing (or specify a preset)");
    if (!kv.count("budget")) throw std::invalid_argument("budget: missing");
    std::vector<double> mu;
    for (const std::string& tok : split_list(kv.at("mu")))
      mu.push_back(parse_double("mu", tok));
    if (mu.empty()) throw std::invalid_argument("mu: must be nonempty");

    std::vector<double> cost(mu.size(), 1.0);
    if (kv.count("cost")) {
      const auto toks = split_list(kv.at("cost"));
      if (toks.size() != mu.size())
        throw std::invalid_argument("cost: length " + std::to_string(toks.size()) +
                                    " does not match mu length " + std::to_string(mu.size()));
      for (std::size_t a = 0; a < toks.size(); ++a) cost[a] = parse_double("cost", toks[a]);
    }

    const std::string family = kv.count("family") ? kv.at("family") : "bernoulli";
    const double budget = parse_double("budget", kv.at("budget"));
    const double rho = kv.count("rho") ? parse_double("rho", kv.at("rho")) : 0.0;

    BanditInstance inst;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      RewardModel model = RewardModel::bernoulli(0.0);
      try {
        if (family == "bernoulli")
          model = RewardModel::bernoulli(mu[a]);
        else if (family == "gaussian")
          model = RewardModel::gaussian(mu[a], 1.0);
        else if (family == "poisson")
          model = RewardModel::poisson(mu[a]);
        else if (family == "exponential")
          model = RewardModel::exponential(mu[a]);
        else
          throw std::invalid_argument(
              "family: unknown family '" + family +
              "' (expected bernoulli, gaussian, poisson or exponential)");
      } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        if (msg.rfind("family:", 0) == 0) throw;
        throw std::invalid_argument("mu[" + std::to_string(a) + "]: " + msg);
      }
      inst.arms.push_back({model, cost[a]});
    }
    inst.budget = budget;
    inst.rho = rho;
    cfg.instance = inst;
    cfg.name = "custom";
  }

  cfg.instance.validate();
  if (kv.count("horizon")) cfg.horizon = parse_uint("horizon", kv.at("horizon"));
  if (kv.count("reps")) cfg.reps = parse_uint("reps", kv.at("reps"));
  if (kv.count("seed")) cfg.seed = parse_uint("seed", kv.at("seed"));
  if (kv.count("algs")) cfg.algorithms = parse_algs(split_list(kv.at("algs")), cfg.instance.budget);
  if (kv.count("checkpoints")) {
    cfg.checkpoint_count = static_cast<int>(parse_uint("checkpoints", kv.at("checkpoints")));
    if (cfg.checkpoint_count < 1)
      throw std::invalid_argument("checkpoints: must be at least 1");
  }
  if (kv.count("workers"))
    cfg.workers = static_cast<unsigned>(parse_uint("workers", kv.at("workers")));
  if (kv.count("out")) cfg.out_dir = kv.at("out");
  if (cfg.algorithms.empty())
    throw std::invalid_argument("algs: missing (no preset default available)");
  return cfg;
}

std::uint64_t algorithm_stream_id(const std::string& label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

ExperimentResult run_experiment_in_memory(const ExperimentConfig& config) {
  config.instance.validate();
  if (config.reps == 0) throw std::invalid_argument("reps: must be at least 1");
  if (config.algorithms.empty()) throw std::invalid_argument("algs: must be nonempty");
  if (config.checkpoint_count < 1)
    throw std::invalid_argument("checkpoints: must be at least 1");

  const std::vector<std::uint64_t> checkpoints =
      geometric_checkpoints(config.horizon, config.checkpoint_count);

  ExperimentResult result;
  result.solution = solve_instance(config.instance);
  result.lower_bound = lower_bound_constant(config.instance);

  const std::size_t num_algs = config.algorithms.size();
  const std::size_t reps = static_cast<std::size_t>(config.reps);
  std::vector<std::vector<RunTrace>> traces(num_algs, std::vector<RunTrace>(reps));

  const std::size_t total = num_algs * reps;
  auto run_task = [&](std::size_t idx) {
    const std::size_t alg = idx / reps;
    const std::size_t rep = idx % reps;
    const AlgorithmSpec& spec = config.algorithms[alg];
    std::unique_ptr<Policy> policy = make_policy(spec, config.instance);
    RunConfig rc;
    rc.horizon = config.horizon;
    rc.seed = derive_stream_key(config.seed, algorithm_stream_id(spec.label),
                                static_cast<std::uint64_t>(rep));
    rc.checkpoints = checkpoints;
    traces[alg][rep] = run_episode(config.instance, *policy, rc);
  };

  unsigned workers = config.workers != 0 ? config.workers
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  if (workers <= 1) {
    for (std::size_t idx = 0; idx < total; ++idx) run_task(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= total || failed.load()) return;
        try {
          run_task(idx);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  for (std::size_t alg = 0; alg < num_algs; ++alg) {
    AlgorithmResult ar;
    ar.spec = config.algorithms[alg];
    ar.curves = aggregate(traces[alg]);
    for (const RunTrace& tr : traces[alg]) {
      ar.max_budget_excess = std::max(ar.max_budget_excess, tr.max_budget_excess);
      ar.max_saturation_gap = std::max(ar.max_saturation_gap, tr.max_saturation_gap);
    }
    result.algorithms.push_back(std::move(ar));
  }
  return result;
}

std::string describe_instance(const ExperimentConfig& config) {
  const OracleSolution sol = solve_instance(config.instance);
  const LowerBound lb = lower_bound_constant(config.instance);
  const std::size_t k = config.instance.num_arms();

  std::ostringstream out;
  out << "instance " << config.name << ": " << k << " arms, budget "
      << fmt12(config.instance.budget) << ", rho " << fmt12(config.instance.rho) << "\n";
  for (std::size_t a = 0; a < k; ++a) {
    const ArmSpec& arm = config.instance.arms[a];
    out << "arm " << (a + 1) << ": family " << family_name(arm.reward.family()) << ", mean "
        << fmt12(arm.reward.mean()) << ", cost " << fmt12(arm.cost) << ", ratio "
        << fmt12(arm.reward.mean() / arm.cost) << ", class "
        << arm_class_label(sol.classes[a]) << ", q_star " << fmt12(sol.q_star[a]) << "\n";
  }
  out << "pseudo-arm " << (k + 1) << ": ratio " << fmt12(config.instance.rho) << ", class "
      << (sol.pseudo_arm_on_margin ? "M" : "N") << "\n";
  out << "rho_star = " << fmt12(sol.rho_star) << "\n";
  out << "g_star = " << fmt12(optimal_gain(sol, config.instance)) << "\n";
  out << "lower_bound_coefficient = " << fmt12(lb.coefficient) << "\n";
  for (std::size_t a = 0; a < k; ++a)
    if (lb.per_arm_log_coefficient[a] > 0.0)
      out << "arm " << (a + 1)
          << " log-coefficient = " << fmt12(lb.per_arm_log_coefficient[a]) << "\n";
  return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = run_experiment_in_memory(config);

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  {
    std::ofstream out(fs::path(config.out_dir) / "regret_curves.csv");
    if (!out) throw std::runtime_error("out: cannot write to '" + config.out_dir + "'");
    out << "algorithm,checkpoint_t,mean_regret,stderr,lower_bound_value,mean_realized_gain\n";
    for (const AlgorithmResult& ar : result.algorithms) {
      const AggregateCurves& c = ar.curves;
      for (std::size_t i = 0; i < c.t.size(); ++i) {
        const double lb_value =
            result.lower_bound.coefficient * std::log(static_cast<double>(c.t[i]));
        out << csv_field(ar.spec.label) << ',' << c.t[i] << ',' << fmt12(c.mean_regret[i])
            << ',' << fmt12(c.stderr_regret[i]) << ',' << fmt12(lb_value) << ','
            << fmt12(c.mean_realized_gain[i]) << '\n';
      }
    }
  }

  {
    std::ofstream out(fs::path(config.out_dir) / "arm_counts.csv");
    if (!out) throw std::runtime_error("out: cannot write to '" + config.out_dir + "'");
    out << "algorithm,checkpoint_t,arm,mean_count\n";
    const std::size_t k = config.instance.num_arms();
    for (const AlgorithmResult& ar : result.algorithms) {
      const AggregateCurves& c = ar.curves;
      for (std::size_t i = 0; i < c.t.size(); ++i) {
        for (std::size_t a = 0; a < k; ++a)
          out << csv_field(ar.spec.label) << ',' << c.t[i] << ',' << (a + 1) << ','
              << fmt12(c.mean_pulls[i][a]) << '\n';
        // budget-slack pseudo-arm: expected inclusion mass
        out << csv_field(ar.spec.label) << ',' << c.t[i] << ',' << (k + 1) << ','
            << fmt12(c.mean_pseudo_mass[i]) << '\n';
      }
    }
  }

  {
    std::ofstream out(fs::path(config.out_dir) / "summary.txt");
    if (!out) throw std::runtime_error("out: cannot write to '" + config.out_dir + "'");
    out << describe_instance(config);
    out << "horizon = " << config.horizon << "\n";
    out << "reps = " << config.reps << "\n";
    out << "seed = " << config.seed << "\n";
    out << "checkpoints = " << config.checkpoint_count << "\n";
    for (const AlgorithmResult& ar : result.algorithms) {
      const AggregateCurves& c = ar.curves;
      if (c.t.empty()) continue;
      const std::size_t last = c.t.size() - 1;
      out << "final_regret " << ar.spec.label << " = " << fmt12(c.mean_regret[last])
          << " (stderr " << fmt12(c.stderr_regret[last]) << ")\n";
    }
  }

  return result;
}

}  // namespace bb
