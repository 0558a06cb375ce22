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

#ifndef MACNOMA_EXPERIMENT_HPP_
#define MACNOMA_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "macnoma/baselines.hpp"
#include "macnoma/config.hpp"
#include "macnoma/ddpg.hpp"

namespace macnoma {

struct SweepSettings {
  std::vector<double> power_dbm = {11.0, 13.0, 15.0, 17.0, 18.0};
  std::vector<double> region_scale = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  int scenarios = 100;
};

struct AccuracySettings {
  std::vector<double> power_dbm = {11.0, 13.0, 15.0, 17.0, 18.0};
  int scenarios = 20;
  int rollout_steps = 100;
};

struct ExperimentConfig {
  SystemConfig system;
  AgentConfig agent;
  SweepSettings sweep;
  AccuracySettings accuracy;
  std::size_t optimizer_budget = 20000;
  std::string out_dir = "out";
  std::uint64_t seed = 20240917;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

// Flat YAML mapping of key: value. Unknown keys and ill-typed values raise
// ConfigError naming the key. Missing keys keep their defaults.
ExperimentConfig parse_experiment_config(const std::string& yaml_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Every key with its current value, one "key: value" line each, in a fixed
// order. Parsing this text reproduces the config.
std::string canonical_config_text(const ExperimentConfig& config);
// Ignores out_dir and threads.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string provenance(const ExperimentConfig& config, const std::string& command);

struct AccuracyRow {
  double bs_power_dbm = 0.0;
  double ddpg_mean = 0.0;
  double reference_mean = 0.0;
  double ratio = 0.0;
  int n_scenarios = 0;
};

// Deterministic policy vs. reference optimizer (MA-CNOMA) on held-out
// scenarios; one row per power plus an aggregate row (bs_power_dbm = NaN).
std::vector<AccuracyRow> evaluate_accuracy(const ExperimentConfig& config, const Mlp& actor);
void write_accuracy_csv(std::ostream& out, const std::vector<AccuracyRow>& rows,
                        const std::string& provenance_line);

void write_learning_curve_csv(std::ostream& out, const std::vector<double>& curve,
                              const std::string& provenance_line);

// Mean of the last ceil(10%) entries.
double final_window_mean(const std::vector<double>& curve);

// Nesting and monotonicity checks over a sweep; returns a message per
// violated pair.
std::vector<std::string> ordering_violations(const std::vector<SweepRow>& rows);
std::vector<std::string> monotonicity_violations(const std::vector<SweepRow>& rows,
                                                 double max_value);

// Command bodies behind the CLI. They return the process exit status and
// write progress to log.
int cmd_train(const ExperimentConfig& config, std::ostream& log);
int cmd_sweep(const ExperimentConfig& config, SweepKind kind, std::ostream& log);
int cmd_accuracy(const ExperimentConfig& config, const std::string& checkpoint_path,
                 std::ostream& log);

}  // namespace macnoma

#endif  // MACNOMA_EXPERIMENT_HPP_
