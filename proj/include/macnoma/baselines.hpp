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

#ifndef MACNOMA_BASELINES_HPP_
#define MACNOMA_BASELINES_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "macnoma/channel.hpp"
#include "macnoma/link_rates.hpp"

namespace macnoma {

enum class Scheme { kMaCnoma, kMaNoma, kFCnoma, kFNoma };

struct SchemeSpec {
  Scheme scheme = Scheme::kMaCnoma;

  bool cooperation_enabled() const {
    return scheme == Scheme::kMaCnoma || scheme == Scheme::kFCnoma;
  }
  bool ma_enabled() const { return scheme == Scheme::kMaCnoma || scheme == Scheme::kMaNoma; }
};

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);  // throws std::invalid_argument
inline constexpr Scheme kAllSchemes[] = {Scheme::kMaCnoma, Scheme::kMaNoma, Scheme::kFCnoma,
                                         Scheme::kFNoma};

// P_N forced to 0 without cooperation; every position pinned to the region
// center without movable antennas.
CandidateSolution apply_scheme(const CandidateSolution& sol, SchemeSpec scheme,
                               const SystemConfig& config);

// The config a scheme is evaluated under. Fixed antennas are not MAs, so the
// MA spacing rule does not apply to them.
SystemConfig scheme_config(const SystemConfig& config, SchemeSpec scheme);

struct OptimizerOptions {
  std::size_t budget = 20000;
  std::size_t starts = 64;
  std::size_t samples_per_start = 40;
  double initial_step = 0.5;  // in normalized [-1, 1] coordinates
  double min_step = 1e-6;
};

struct OptimizerReport {
  CandidateSolution best_solution;  // after apply_scheme and normalization
  LinkEvaluation evaluation;
  double best_objective = 0.0;  // sum rate of best_solution
  bool feasible = false;
  std::size_t evaluations_used = 0;

  // best_objective when feasible, else 0.
  double achieved_rate() const { return feasible ? best_objective : 0.0; }
};

// Multi-start random search over the feasible box, then coordinate-wise
// pattern refinement with step halving on the most promising starts. The
// evaluation sequence does not depend on the budget, so a larger budget
// only extends it. Deterministic given seed.
OptimizerReport reference_optimize(const ScenarioRealization& scenario,
                                   const SystemConfig& config, SchemeSpec scheme,
                                   const OptimizerOptions& options, std::uint64_t seed);

OptimizerReport reference_optimize(const ScenarioRealization& scenario,
                                   const SystemConfig& config, SchemeSpec scheme,
                                   std::size_t budget, std::uint64_t seed);

enum class SweepKind { kPower, kRegion };

std::string_view sweep_variable_name(SweepKind kind);

struct SweepRow {
  Scheme scheme = Scheme::kMaCnoma;
  SweepKind kind = SweepKind::kPower;
  double value = 0.0;  // dBm for power, multiple of region_side for region
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  int n_scenarios = 0;
  int n_feasible = 0;
  std::vector<double> per_scenario;  // achieved rate per scenario index
};

SystemConfig sweep_point_config(const SystemConfig& base, SweepKind kind, double value);

// For every sweep value and scheme, averages reference_optimize over the same
// n_scenarios scenarios (common random numbers across schemes and points).
std::vector<SweepRow> evaluate_scheme_sweep(const SystemConfig& base,
                                            const std::vector<Scheme>& schemes, SweepKind kind,
                                            const std::vector<double>& values, int n_scenarios,
                                            const OptimizerOptions& options,
                                            std::uint64_t master_seed, unsigned threads = 0);

// Columns: scheme,sweep_variable,value,mean_rate,stderr,n_scenarios
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& provenance);

// Runs fn(i) for i in [0, n) over a few worker threads. fn must only write to
// per-index storage.
void parallel_for(int n, unsigned threads, const std::function<void(int)>& fn);

}  // namespace macnoma

#endif  // MACNOMA_BASELINES_HPP_
