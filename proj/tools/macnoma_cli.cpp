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

// macnoma: train the DDPG agent, run the benchmark sweeps, and compare the
// trained policy against the reference optimizer.
//
//   macnoma train <config>
//   macnoma sweep <config> --kind power|region
//   macnoma accuracy <config> --checkpoint <path>
//
// Common flags: --seed, --out-dir, --scenarios.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "macnoma/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> scenarios;
};

void add_common(CLI::App* cmd, std::string& config_path, Overrides& o) {
  cmd->add_option("config", config_path, "Experiment config (YAML key: value)")->required();
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  cmd->add_option("--scenarios", o.scenarios, "Scenarios per sweep or accuracy point");
}

macnoma::ExperimentConfig load(const std::string& path, const Overrides& o) {
  macnoma::ExperimentConfig config = macnoma::load_experiment_config(path);
  if (o.seed) config.seed = *o.seed;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.scenarios) {
    config.sweep.scenarios = *o.scenarios;
    config.accuracy.scenarios = *o.scenarios;
  }
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna cooperative NOMA: DDPG training and benchmarks"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  CLI::App* train = app.add_subcommand("train", "Train the DDPG agent");
  add_common(train, config_path, overrides);

  std::string kind = "power";
  CLI::App* sweep = app.add_subcommand("sweep", "Reference-optimized scheme sweep");
  add_common(sweep, config_path, overrides);
  sweep->add_option("--kind", kind, "power or region")
      ->check(CLI::IsMember({"power", "region"}));

  std::string checkpoint;
  CLI::App* accuracy = app.add_subcommand("accuracy", "Trained policy vs reference optimizer");
  add_common(accuracy, config_path, overrides);
  accuracy->add_option("--checkpoint", checkpoint, "Model checkpoint from train")->required();

  CLI11_PARSE(app, argc, argv);

  macnoma::ExperimentConfig config;
  try {
    config = load(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (train->parsed()) return macnoma::cmd_train(config, std::cout);
  if (sweep->parsed())
    return macnoma::cmd_sweep(
        config, kind == "power" ? macnoma::SweepKind::kPower : macnoma::SweepKind::kRegion,
        std::cout);
  return macnoma::cmd_accuracy(config, checkpoint, std::cout);
}
