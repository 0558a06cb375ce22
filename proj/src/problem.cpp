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

#include "macnoma/problem.hpp"

#include <algorithm>
#include <cmath>

namespace macnoma {

int RewardBreakdown::penalties_fired() const {
  return (penalty_qos > 0.0) + (penalty_region > 0.0) + (penalty_power > 0.0);
}

std::pair<arma::cx_vec, arma::cx_vec> normalize_beamformers(const arma::cx_vec& w_f,
                                                            const arma::cx_vec& w_n,
                                                            double p_t) {
  const double total = std::pow(arma::norm(w_f), 2) + std::pow(arma::norm(w_n), 2);
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateInputError("normalize_beamformers: zero total beamformer power");
  const double scale = std::sqrt(p_t / total);
  return {w_f * scale, w_n * scale};
}

std::pair<arma::cx_vec, arma::cx_vec> normalize_beamformers_or_default(
    const arma::cx_vec& w_f, const arma::cx_vec& w_n, double p_t) {
  const double total = std::pow(arma::norm(w_f), 2) + std::pow(arma::norm(w_n), 2);
  if (total > 0.0 && std::isfinite(total)) return normalize_beamformers(w_f, w_n, p_t);
  arma::cx_vec uniform_f(w_f.n_elem, arma::fill::ones);
  arma::cx_vec uniform_n(w_n.n_elem, arma::fill::ones);
  return normalize_beamformers(uniform_f, uniform_n, p_t);
}

double region_slack(MaPosition pos, double side, double origin) {
  const double x = pos.x - origin;
  const double y = pos.y - origin;
  return std::min({x, side - x, y, side - y});
}

ConstraintSlacks compute_slacks(const LinkEvaluation& eval, const CandidateSolution& sol,
                                const SystemConfig& config) {
  ConstraintSlacks s;
  s.bs_power = config.p_t - std::pow(arma::norm(sol.w_f), 2) - std::pow(arma::norm(sol.w_n), 2);
  // Normalization lands exactly on the budget up to rounding.
  if (std::abs(s.bs_power) <= 1e-12 * config.p_t) s.bs_power = 0.0;
  s.relay_power_low = sol.p_n;
  s.relay_power_high = config.p_nf - sol.p_n;
  s.qos_n = eval.r_nn - config.r_th;
  s.qos_f = eval.r_ff - config.r_th;
  s.sic = eval.r_nf - config.r_th;
  s.region_td = region_slack(sol.t_d, config.region_side, config.region_origin);
  s.region_rn = region_slack(sol.r_n, config.region_side, config.region_origin);
  s.region_rf = region_slack(sol.r_f, config.region_side, config.region_origin);
  if (config.enforce_ma_separation) {
    s.ma_separation = std::hypot(sol.t_d.x - sol.r_n.x, sol.t_d.y - sol.r_n.y) -
                      config.wavelength / 2.0;
  } else {
    s.ma_separation = 0.0;
  }
  return s;
}

RewardBreakdown reward(const LinkEvaluation& eval, const ConstraintSlacks& slacks,
                       double pen) {
  RewardBreakdown r;
  r.sum_rate = eval.r_nn + eval.r_ff;
  // min(R_NN, R_NF, R_FF) - R_th, read off the rate slacks.
  const double worst_rate_margin = std::min({slacks.qos_n, slacks.sic, slacks.qos_f});
  r.penalty_qos = indicator_violation(worst_rate_margin) * pen;
  const double placement =
      std::min({slacks.region_td, slacks.region_rn, slacks.region_rf, slacks.ma_separation});
  r.penalty_region = indicator_violation(placement) * pen;
  r.penalty_power =
      indicator_violation(std::min(slacks.relay_power_low, slacks.relay_power_high)) * pen;
  r.total = r.sum_rate - r.penalty_qos - r.penalty_region - r.penalty_power;
  return r;
}

}  // namespace macnoma
