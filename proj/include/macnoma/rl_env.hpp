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

#ifndef MACNOMA_RL_ENV_HPP_
#define MACNOMA_RL_ENV_HPP_

#include <armadillo>
#include <cstdint>
#include <optional>

#include "macnoma/channel.hpp"
#include "macnoma/config.hpp"
#include "macnoma/link_rates.hpp"
#include "macnoma/problem.hpp"

namespace macnoma {

// Raw actor output, every component in [-1, 1]. Layout:
//   [Re w_F (N), Im w_F (N), Re w_N (N), Im w_N (N), P_N,
//    x_td, y_td, x_rN, y_rN, x_rF, y_rF]
using RawAction = arma::vec;

// Observation after a step: the previous raw action, post-normalization
// beamformer powers, the previous relay power, and the channels seen at the
// previous MA positions.
struct EnvState {
  arma::vec prev_action;
  double prev_power_wf = 0.0;
  double prev_power_wn = 0.0;
  double prev_p_n = 0.0;
  // [Re h_N, Im h_N, Re h_F, Im h_F, Re h_d, Im h_d]
  arma::vec channels;

  // Physical values, in the order above; length state_dim().
  arma::vec flatten() const;
};

struct Transition {
  EnvState state;
  RawAction action;
  double reward = 0.0;
  EnvState next_state;
};

struct StepResult {
  EnvState next_state;
  double reward = 0.0;
  RewardBreakdown breakdown;
  LinkEvaluation evaluation;
  CandidateSolution solution;  // decoded and normalized
};

// Network input: the flattened state with powers divided by their budgets and
// each channel divided by its RMS gain sqrt(g0 d^-alpha).
arma::vec state_features(const EnvState& state, const SystemConfig& config);

// Beamformer parts map to [-sqrt(P_T), sqrt(P_T)], P_N to
// [-0.25 P_NF, 1.25 P_NF], each coordinate to [-0.25 A, 1.25 A]. Inputs
// outside [-1, 1] are clamped.
CandidateSolution decode_action(const RawAction& raw, const SystemConfig& config);

// Inverse of decode_action (no clamping).
RawAction encode_solution(const CandidateSolution& sol, const SystemConfig& config);

arma::vec flatten_channels(const ChannelSet& channels);

EnvState initial_state(const ChannelSynthesizer& synth, const SystemConfig& config);

// decode -> normalize to P_T -> channels at the proposed positions -> links ->
// reward. Pure.
StepResult step(const EnvState& state, const RawAction& raw_action,
                const ChannelSynthesizer& synth, const SystemConfig& config);

// One episode's worth of frozen scenario plus the running state.
class Environment {
 public:
  explicit Environment(SystemConfig config);

  const EnvState& reset(std::uint64_t seed);
  const EnvState& reset(const ScenarioRealization& scenario);

  // Advances the internal state. Requires a prior reset().
  StepResult step(const RawAction& raw_action);

  const EnvState& state() const { return state_; }
  const SystemConfig& config() const { return config_; }
  const ChannelSynthesizer& synthesizer() const;

 private:
  SystemConfig config_;
  std::optional<ChannelSynthesizer> synth_;
  EnvState state_;
};

}  // namespace macnoma

#endif  // MACNOMA_RL_ENV_HPP_
