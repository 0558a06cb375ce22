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

#include "macnoma/rl_env.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace macnoma {
namespace {

constexpr double kRangeLow = -0.25;   // decode range, as a fraction of the budget
constexpr double kRangeHigh = 1.25;

double to_range(double raw, double full, double origin = 0.0) {
  return origin + full * (0.5 * (kRangeLow + kRangeHigh) + 0.5 * (kRangeHigh - kRangeLow) * raw);
}

double from_range(double value, double full, double origin = 0.0) {
  return ((value - origin) / full - 0.5 * (kRangeLow + kRangeHigh)) / (0.5 * (kRangeHigh - kRangeLow));
}

void check_action(const RawAction& raw, const SystemConfig& config) {
  if (raw.n_elem != static_cast<arma::uword>(config.action_dim()))
    throw ConfigError("action length differs from action_dim()");
}

}  // namespace

arma::vec EnvState::flatten() const {
  arma::vec powers = {prev_power_wf, prev_power_wn, prev_p_n};
  return arma::join_cols(prev_action, powers, channels);
}

arma::vec state_features(const EnvState& state, const SystemConfig& config) {
  arma::vec x = state.flatten();
  const arma::uword k = state.prev_action.n_elem;
  x(k) /= config.p_t;
  x(k + 1) /= config.p_t;
  x(k + 2) /= config.p_nf;
  const arma::uword n = config.n_bs_antennas;
  const arma::uword c0 = k + 3;
  x.subvec(c0, c0 + 2 * n - 1) /= std::sqrt(config.path_gain(config.d_bn));
  x.subvec(c0 + 2 * n, c0 + 4 * n - 1) /= std::sqrt(config.path_gain(config.d_bf));
  x.subvec(c0 + 4 * n, c0 + 4 * n + 1) /= std::sqrt(config.path_gain(config.d_nf));
  return x;
}

CandidateSolution decode_action(const RawAction& raw_in, const SystemConfig& config) {
  check_action(raw_in, config);
  const RawAction raw = arma::clamp(raw_in, -1.0, 1.0);
  const arma::uword n = config.n_bs_antennas;
  const double amp = std::sqrt(config.p_t);
  CandidateSolution sol;
  sol.w_f = arma::cx_vec(amp * raw.subvec(0, n - 1), amp * raw.subvec(n, 2 * n - 1));
  sol.w_n = arma::cx_vec(amp * raw.subvec(2 * n, 3 * n - 1), amp * raw.subvec(3 * n, 4 * n - 1));
  const arma::uword p = 4 * n;
  const double a = config.region_side;
  const double o = config.region_origin;
  sol.p_n = to_range(raw(p), config.p_nf);
  sol.t_d = {to_range(raw(p + 1), a, o), to_range(raw(p + 2), a, o)};
  sol.r_n = {to_range(raw(p + 3), a, o), to_range(raw(p + 4), a, o)};
  sol.r_f = {to_range(raw(p + 5), a, o), to_range(raw(p + 6), a, o)};
  return sol;
}

RawAction encode_solution(const CandidateSolution& sol, const SystemConfig& config) {
  const arma::uword n = config.n_bs_antennas;
  const double amp = std::sqrt(config.p_t);
  const double a = config.region_side;
  const double o = config.region_origin;
  RawAction raw(config.action_dim());
  raw.subvec(0, n - 1) = arma::real(sol.w_f) / amp;
  raw.subvec(n, 2 * n - 1) = arma::imag(sol.w_f) / amp;
  raw.subvec(2 * n, 3 * n - 1) = arma::real(sol.w_n) / amp;
  raw.subvec(3 * n, 4 * n - 1) = arma::imag(sol.w_n) / amp;
  const arma::uword p = 4 * n;
  raw(p) = from_range(sol.p_n, config.p_nf);
  raw(p + 1) = from_range(sol.t_d.x, a, o);
  raw(p + 2) = from_range(sol.t_d.y, a, o);
  raw(p + 3) = from_range(sol.r_n.x, a, o);
  raw(p + 4) = from_range(sol.r_n.y, a, o);
  raw(p + 5) = from_range(sol.r_f.x, a, o);
  raw(p + 6) = from_range(sol.r_f.y, a, o);
  return raw;
}

arma::vec flatten_channels(const ChannelSet& ch) {
  arma::vec d = {ch.h_d.real(), ch.h_d.imag()};
  return arma::join_cols(arma::join_cols(arma::real(ch.h_n), arma::imag(ch.h_n)),
                         arma::join_cols(arma::real(ch.h_f), arma::imag(ch.h_f)), d);
}

EnvState initial_state(const ChannelSynthesizer& synth, const SystemConfig& config) {
  const MaPosition center{config.region_center(), config.region_center()};
  EnvState s;
  s.prev_action = arma::zeros(config.action_dim());
  s.channels = flatten_channels(synth.channels(center, center, center));
  return s;
}

StepResult step(const EnvState& state, const RawAction& raw_action,
                const ChannelSynthesizer& synth, const SystemConfig& config) {
  (void)state;  // rewards depend on the action and the frozen scenario only
  check_action(raw_action, config);
  StepResult out;
  out.solution = decode_action(raw_action, config);
  std::tie(out.solution.w_f, out.solution.w_n) =
      normalize_beamformers_or_default(out.solution.w_f, out.solution.w_n, config.p_t);
  const ChannelSet channels =
      synth.channels(out.solution.t_d, out.solution.r_n, out.solution.r_f);
  out.evaluation = evaluate_links(channels, out.solution, config);
  out.breakdown = reward(out.evaluation, out.evaluation.slacks, config.penalty);
  out.reward = out.breakdown.total;

  out.next_state.prev_action = arma::clamp(raw_action, -1.0, 1.0);
  out.next_state.prev_power_wf = std::pow(arma::norm(out.solution.w_f), 2);
  out.next_state.prev_power_wn = std::pow(arma::norm(out.solution.w_n), 2);
  out.next_state.prev_p_n = out.solution.p_n;
  out.next_state.channels = flatten_channels(channels);
  return out;
}

Environment::Environment(SystemConfig config) : config_(config) { config_.validate(); }

const EnvState& Environment::reset(std::uint64_t seed) {
  return reset(sample_scenario(config_, seed));
}

const EnvState& Environment::reset(const ScenarioRealization& scenario) {
  synth_.emplace(scenario, config_);
  state_ = initial_state(*synth_, config_);
  return state_;
}

StepResult Environment::step(const RawAction& raw_action) {
  StepResult r = macnoma::step(state_, raw_action, synthesizer(), config_);
  state_ = r.next_state;
  return r;
}

const ChannelSynthesizer& Environment::synthesizer() const {
  if (!synth_) throw std::logic_error("Environment::step before reset");
  return *synth_;
}

}  // namespace macnoma
