// Copyright 2026 The macnoma Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "macnoma/experiment.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace macnoma {
namespace {

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const YAML::Node&)> set;
  std::function<std::string(const ExperimentConfig&)> show;
};

template <typename T>
T as(const YAML::Node& node, const char* key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{}: cannot read value '{}'", key,
                                  node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")));
  }
}

std::string show_list(const std::vector<double>& v) { return fmt::format("[{}]", fmt::join(v, ", ")); }
std::string show_list(const std::vector<arma::uword>& v) {
  return fmt::format("[{}]", fmt::join(v, ", "));
}

// Scalar fields stored as-is.
template <typename T, typename Get>
Field plain(const char* key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, const YAML::Node& n) { get(c) = as<T>(n, key); },
          [get](const ExperimentConfig& c) {
            return fmt::format("{}", get(c));
          }};
}

// Scalar fields written in a log unit and stored linear.
template <typename Get>
Field logarithmic(const char* key, Get get, double (*to_linear)(double),
                  double (*from_linear)(double)) {
  return {key,
          [=](ExperimentConfig& c, const YAML::Node& n) { get(c) = to_linear(as<double>(n, key)); },
          [=](const ExperimentConfig& c) {
            return fmt::format("{}", from_linear(get(c)));
          }};
}

template <typename T, typename Get>
Field list(const char* key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, const YAML::Node& n) {
            if (!n.IsSequence()) throw ConfigError(fmt::format("{}: expected a list", key));
            get(c) = as<std::vector<T>>(n, key);
          },
          [get](const ExperimentConfig& c) { return show_list(get(c)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      plain<int>("n_bs_antennas", [](auto& c) -> auto& { return c.system.n_bs_antennas; }),
      plain<double>("wavelength_m", [](auto& c) -> auto& { return c.system.wavelength; }),
      plain<int>("paths_bs", [](auto& c) -> auto& { return c.system.l_b; }),
      plain<int>("paths_d2d", [](auto& c) -> auto& { return c.system.l_a; }),
      plain<int>("paths_rx", [](auto& c) -> auto& { return c.system.l_r; }),
      plain<double>("region_side_m", [](auto& c) -> auto& { return c.system.region_side; }),
      plain<double>("region_origin_m", [](auto& c) -> auto& { return c.system.region_origin; }),
      plain<double>("path_loss_exponent", [](auto& c) -> auto& { return c.system.alpha; }),
      logarithmic("noise_dbm", [](auto& c) -> auto& { return c.system.sigma2; }, dbm_to_watts,
                  watts_to_dbm),
      logarithmic("bs_power_dbm", [](auto& c) -> auto& { return c.system.p_t; }, dbm_to_watts,
                  watts_to_dbm),
      logarithmic("relay_power_dbm", [](auto& c) -> auto& { return c.system.p_nf; },
                  dbm_to_watts, watts_to_dbm),
      plain<double>("rate_threshold", [](auto& c) -> auto& { return c.system.r_th; }),
      logarithmic("reference_gain_db", [](auto& c) -> auto& { return c.system.g0; },
                  db_to_linear, linear_to_db),
      logarithmic("si_variance_db", [](auto& c) -> auto& { return c.system.omega_si2; },
                  db_to_linear, linear_to_db),
      plain<double>("distance_bs_near_m", [](auto& c) -> auto& { return c.system.d_bn; }),
      plain<double>("distance_bs_far_m", [](auto& c) -> auto& { return c.system.d_bf; }),
      plain<double>("distance_near_far_m", [](auto& c) -> auto& { return c.system.d_nf; }),
      plain<double>("penalty", [](auto& c) -> auto& { return c.system.penalty; }),
      plain<double>("discount", [](auto& c) -> auto& { return c.agent.discount; }),
      plain<double>("tau", [](auto& c) -> auto& { return c.agent.tau; }),
      plain<std::size_t>("buffer_capacity",
                         [](auto& c) -> auto& { return c.agent.buffer_capacity; }),
      plain<std::size_t>("batch_size", [](auto& c) -> auto& { return c.agent.batch_size; }),
      plain<double>("noise_stddev_initial",
                    [](auto& c) -> auto& { return c.agent.noise_stddev_initial; }),
      plain<double>("noise_decay", [](auto& c) -> auto& { return c.agent.noise_decay; }),
      plain<double>("noise_floor", [](auto& c) -> auto& { return c.agent.noise_floor; }),
      plain<int>("episodes", [](auto& c) -> auto& { return c.agent.episodes; }),
      plain<int>("steps", [](auto& c) -> auto& { return c.agent.steps; }),
      plain<double>("actor_lr", [](auto& c) -> auto& { return c.agent.actor_lr; }),
      plain<double>("critic_lr", [](auto& c) -> auto& { return c.agent.critic_lr; }),
      list<arma::uword>("hidden_layers",
                        [](auto& c) -> auto& { return c.agent.hidden; }),
      list<double>("sweep_power_dbm",
                   [](auto& c) -> auto& { return c.sweep.power_dbm; }),
      list<double>("sweep_region_scale",
                   [](auto& c) -> auto& { return c.sweep.region_scale; }),
      plain<int>("sweep_scenarios", [](auto& c) -> auto& { return c.sweep.scenarios; }),
      list<double>("accuracy_power_dbm",
                   [](auto& c) -> auto& { return c.accuracy.power_dbm; }),
      plain<int>("accuracy_scenarios", [](auto& c) -> auto& { return c.accuracy.scenarios; }),
      plain<int>("accuracy_rollout_steps",
                 [](auto& c) -> auto& { return c.accuracy.rollout_steps; }),
      plain<std::size_t>("optimizer_budget",
                         [](auto& c) -> auto& { return c.optimizer_budget; }),
      plain<std::string>("out_dir", [](auto& c) -> auto& { return c.out_dir; }),
      plain<std::uint64_t>("seed", [](auto& c) -> auto& { return c.seed; }),
      plain<unsigned>("threads", [](auto& c) -> auto& { return c.threads; }),
  };
  return table;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::string out_path(const ExperimentConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
  return out;
}

const SweepRow* find_row(const std::vector<SweepRow>& rows, Scheme scheme, double value) {
  for (const SweepRow& r : rows)
    if (r.scheme == scheme && r.value == value) return &r;
  return nullptr;
}

}  // namespace

void ExperimentConfig::validate() const {
  system.validate();
  agent.validate();
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(fmt::format("{}: {}", key, what));
  };
  require(!sweep.power_dbm.empty(), "sweep_power_dbm", "must not be empty");
  require(!sweep.region_scale.empty(), "sweep_region_scale", "must not be empty");
  for (double s : sweep.region_scale)
    require(s > 0.0 && std::isfinite(s), "sweep_region_scale", "entries must be > 0");
  require(sweep.scenarios >= 1, "sweep_scenarios", "must be >= 1");
  require(!accuracy.power_dbm.empty(), "accuracy_power_dbm", "must not be empty");
  require(accuracy.scenarios >= 1, "accuracy_scenarios", "must be >= 1");
  require(accuracy.rollout_steps >= 1, "accuracy_rollout_steps", "must be >= 1");
  require(optimizer_budget >= 1, "optimizer_budget", "must be >= 1");
  require(!out_dir.empty(), "out_dir", "must not be empty");
}

ExperimentConfig parse_experiment_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  ExperimentConfig config;
  if (root.IsNull()) return config;
  if (!root.IsMap()) throw ConfigError("config: top level must be a key: value mapping");
  std::map<std::string, const Field*> by_key;
  for (const Field& f : fields()) by_key[f.key] = &f;
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(fmt::format("{}: unknown key", key));
    it->second->set(config, entry.second);
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot read {}", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string canonical_config_text(const ExperimentConfig& config) {
  std::string text;
  for (const Field& f : fields()) text += fmt::format("{}: {}\n", f.key, f.show(config));
  return text;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // Where results go and how many workers produce them do not change them.
  ExperimentConfig c = config;
  c.out_dir = ExperimentConfig{}.out_dir;
  c.threads = 0;
  return fnv1a(canonical_config_text(c));
}

std::string provenance(const ExperimentConfig& config, const std::string& command) {
  return fmt::format("macnoma {} config_hash={:016x} seed={}", command, config_hash(config),
                     config.seed);
}

std::vector<AccuracyRow> evaluate_accuracy(const ExperimentConfig& config, const Mlp& actor) {
  const int n = config.accuracy.scenarios;
  std::vector<AccuracyRow> rows;
  double ddpg_total = 0.0;
  double ref_total = 0.0;
  OptimizerOptions options;
  options.budget = config.optimizer_budget;
  for (double dbm : config.accuracy.power_dbm) {
    const SystemConfig sys = sweep_point_config(config.system, SweepKind::kPower, dbm);
    std::vector<double> ddpg(n), ref(n);
    parallel_for(n, config.threads, [&](int i) {
      const ScenarioRealization scenario =
          sample_scenario(sys, derive_seed(config.seed, Stream::kHeldOutScenario, i));
      const PolicyRollout rollout =
          evaluate_policy(actor, scenario, sys, config.accuracy.rollout_steps);
      ddpg[i] = rollout.any_feasible ? rollout.best_feasible_sum_rate : 0.0;
      ref[i] = reference_optimize(scenario, sys, SchemeSpec{Scheme::kMaCnoma}, options,
                                  derive_seed(config.seed, Stream::kOptimizer, i))
                   .achieved_rate();
    });
    AccuracyRow row;
    row.bs_power_dbm = dbm;
    row.n_scenarios = n;
    for (int i = 0; i < n; ++i) {
      row.ddpg_mean += ddpg[i] / n;
      row.reference_mean += ref[i] / n;
    }
    row.ratio = row.reference_mean > 0.0 ? row.ddpg_mean / row.reference_mean : 0.0;
    ddpg_total += row.ddpg_mean;
    ref_total += row.reference_mean;
    rows.push_back(row);
  }
  AccuracyRow all;
  all.bs_power_dbm = std::numeric_limits<double>::quiet_NaN();
  all.n_scenarios = n * static_cast<int>(config.accuracy.power_dbm.size());
  all.ddpg_mean = ddpg_total / config.accuracy.power_dbm.size();
  all.reference_mean = ref_total / config.accuracy.power_dbm.size();
  all.ratio = all.reference_mean > 0.0 ? all.ddpg_mean / all.reference_mean : 0.0;
  rows.push_back(all);
  return rows;
}

void write_accuracy_csv(std::ostream& out, const std::vector<AccuracyRow>& rows,
                        const std::string& provenance_line) {
  out << "# " << provenance_line << '\n';
  out << "bs_power_dbm,ddpg_mean,reference_mean,ratio,n_scenarios\n";
  for (const AccuracyRow& r : rows) {
    const std::string power =
        std::isnan(r.bs_power_dbm) ? std::string("all") : fmt::format("{:.6g}", r.bs_power_dbm);
    out << fmt::format("{},{:.9f},{:.9f},{:.6f},{}\n", power, r.ddpg_mean, r.reference_mean,
                       r.ratio, r.n_scenarios);
  }
}

void write_learning_curve_csv(std::ostream& out, const std::vector<double>& curve,
                              const std::string& provenance_line) {
  out << "# " << provenance_line << '\n';
  out << "episode,mean_reward\n";
  for (std::size_t e = 0; e < curve.size(); ++e) out << fmt::format("{},{:.9f}\n", e + 1, curve[e]);
}

double final_window_mean(const std::vector<double>& curve) {
  if (curve.empty()) return 0.0;
  const std::size_t w = std::max<std::size_t>(1, (curve.size() + 9) / 10);
  double s = 0.0;
  for (std::size_t i = curve.size() - w; i < curve.size(); ++i) s += curve[i];
  return s / static_cast<double>(w);
}

std::vector<std::string> ordering_violations(const std::vector<SweepRow>& rows) {
  static constexpr std::pair<Scheme, Scheme> kPairs[] = {
      {Scheme::kMaCnoma, Scheme::kMaNoma},
      {Scheme::kMaNoma, Scheme::kFNoma},
      {Scheme::kMaCnoma, Scheme::kFCnoma},
      {Scheme::kFCnoma, Scheme::kFNoma},
  };
  std::vector<std::string> out;
  std::vector<double> values;
  for (const SweepRow& r : rows)
    if (std::find(values.begin(), values.end(), r.value) == values.end()) values.push_back(r.value);
  for (double v : values) {
    for (const auto& [hi, lo] : kPairs) {
      const SweepRow* a = find_row(rows, hi, v);
      const SweepRow* b = find_row(rows, lo, v);
      if (a && b && a->mean_rate < b->mean_rate)
        out.push_back(fmt::format("{}={}: {} {:.4f} < {} {:.4f}",
                                  sweep_variable_name(a->kind), v, scheme_name(hi), a->mean_rate,
                                  scheme_name(lo), b->mean_rate));
    }
  }
  return out;
}

std::vector<std::string> monotonicity_violations(const std::vector<SweepRow>& rows,
                                                 double max_value) {
  std::vector<std::string> out;
  for (Scheme scheme : kAllSchemes) {
    std::vector<const SweepRow*> series;
    for (const SweepRow& r : rows)
      if (r.scheme == scheme && r.value <= max_value) series.push_back(&r);
    std::sort(series.begin(), series.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->value < b->value; });
    for (std::size_t i = 1; i < series.size(); ++i)
      if (series[i]->mean_rate < series[i - 1]->mean_rate)
        out.push_back(fmt::format("{}: {} {}={:.4f} below {}={:.4f}", scheme_name(scheme),
                                  sweep_variable_name(series[i]->kind), series[i]->value,
                                  series[i]->mean_rate, series[i - 1]->value,
                                  series[i - 1]->mean_rate));
  }
  return out;
}

int cmd_train(const ExperimentConfig& config, std::ostream& log) {
  try {
    config.validate();
    ensure_dir(config.out_dir);
    const int report_every = std::max(1, config.agent.episodes / 10);
    TrainingResult result = train(config.system, config.agent, config.seed,
                                  [&](int episode, double mean_reward) {
                                    if ((episode + 1) % report_every == 0)
                                      log << fmt::format("episode {:4d}  mean reward {:9.4f}\n",
                                                         episode + 1, mean_reward);
                                  });
    const std::string curve_path = out_path(config, "learning_curve.csv");
    {
      std::ofstream out = open_out(curve_path);
      write_learning_curve_csv(out, result.learning_curve, provenance(config, "train"));
    }
    const std::string model_path = out_path(config, "model.ckpt");
    save_checkpoint(model_path, {{"actor", result.agent.actor()}, {"critic", result.agent.critic()}});
    log << fmt::format("final-window mean reward: {:.4f}\n",
                       final_window_mean(result.learning_curve));
    log << fmt::format("wrote {}\nwrote {}\n", curve_path, model_path);
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const ExperimentConfig& config, SweepKind kind, std::ostream& log) {
  try {
    config.validate();
    ensure_dir(config.out_dir);
    const std::vector<double>& values =
        kind == SweepKind::kPower ? config.sweep.power_dbm : config.sweep.region_scale;
    OptimizerOptions options;
    options.budget = config.optimizer_budget;
    const std::vector<SweepRow> rows = evaluate_scheme_sweep(
        config.system, {std::begin(kAllSchemes), std::end(kAllSchemes)}, kind, values,
        config.sweep.scenarios, options, config.seed, config.threads);
    const std::string name = kind == SweepKind::kPower ? "sweep_power.csv" : "sweep_region.csv";
    const std::string path = out_path(config, name);
    {
      std::ofstream out = open_out(path);
      write_sweep_csv(out, rows,
                      provenance(config, kind == SweepKind::kPower ? "sweep-power" : "sweep-region"));
    }
    for (const SweepRow& r : rows)
      log << fmt::format("{:9s} {}={:<6g} mean {:.4f} +- {:.4f}  ({}/{} feasible)\n",
                         scheme_name(r.scheme), sweep_variable_name(kind), r.value, r.mean_rate,
                         r.stderr_rate, r.n_feasible, r.n_scenarios);
    std::vector<std::string> issues = ordering_violations(rows);
    if (kind == SweepKind::kPower) {
      const auto mono = monotonicity_violations(rows, std::numeric_limits<double>::infinity());
      issues.insert(issues.end(), mono.begin(), mono.end());
    }
    for (const auto& msg : issues) log << "violation: " << msg << '\n';
    log << fmt::format("ordering violations: {}\nwrote {}\n", issues.size(), path);
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_accuracy(const ExperimentConfig& config, const std::string& checkpoint_path,
                 std::ostream& log) {
  try {
    config.validate();
    const std::vector<NamedNetwork> nets = load_checkpoint(checkpoint_path);
    const auto actor = std::find_if(nets.begin(), nets.end(),
                                    [](const NamedNetwork& n) { return n.name == "actor"; });
    if (actor == nets.end()) throw std::runtime_error("checkpoint has no 'actor' network");
    if (actor->net.spec().input_dim != static_cast<arma::uword>(config.system.state_dim()) ||
        actor->net.spec().output_dim != static_cast<arma::uword>(config.system.action_dim()))
      throw std::runtime_error("checkpoint actor dimensions do not match the config");
    ensure_dir(config.out_dir);
    const std::vector<AccuracyRow> rows = evaluate_accuracy(config, actor->net);
    const std::string path = out_path(config, "accuracy.csv");
    {
      std::ofstream out = open_out(path);
      write_accuracy_csv(out, rows, provenance(config, "accuracy"));
    }
    for (const AccuracyRow& r : rows)
      log << fmt::format("{:>6}  ddpg {:.4f}  reference {:.4f}  ratio {:.3f}\n",
                         std::isnan(r.bs_power_dbm) ? std::string("all")
                                                    : fmt::format("{:g}dBm", r.bs_power_dbm),
                         r.ddpg_mean, r.reference_mean, r.ratio);
    log << fmt::format("wrote {}\n", path);
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace macnoma
