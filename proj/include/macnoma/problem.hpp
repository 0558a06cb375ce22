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

#ifndef MACNOMA_PROBLEM_HPP_
#define MACNOMA_PROBLEM_HPP_

#include <armadillo>
#include <stdexcept>
#include <utility>

#include "macnoma/link_rates.hpp"

namespace macnoma {

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RewardBreakdown {
  double sum_rate = 0.0;
  double penalty_qos = 0.0;
  double penalty_region = 0.0;
  double penalty_power = 0.0;
  double total = 0.0;

  int penalties_fired() const;
};

// Scales both beamformers by sqrt(P_T / (|w_F|^2 + |w_N|^2)). Throws
// DegenerateInputError when both vectors are zero.
std::pair<arma::cx_vec, arma::cx_vec> normalize_beamformers(const arma::cx_vec& w_f,
                                                            const arma::cx_vec& w_n,
                                                            double p_t);

// As above, but a zero-power pair is first replaced by equal-power,
// uniform-phase vectors.
std::pair<arma::cx_vec, arma::cx_vec> normalize_beamformers_or_default(
    const arma::cx_vec& w_f, const arma::cx_vec& w_n, double p_t);

// 0 for x >= 0, 1 for x < 0.
inline int indicator_violation(double x) { return x < 0.0 ? 1 : 0; }

// Signed distance from pos to the boundary of [origin, origin + side]^2,
// positive inside.
double region_slack(MaPosition pos, double side, double origin = 0.0);

// Rates are read from eval; the remaining slacks come from sol and config.
ConstraintSlacks compute_slacks(const LinkEvaluation& eval, const CandidateSolution& sol,
                                const SystemConfig& config);

// sum_rate minus one penalty per fired indicator: QoS/SIC rates, placement
// (region or MA separation), relay power.
RewardBreakdown reward(const LinkEvaluation& eval, const ConstraintSlacks& slacks,
                       double pen);

}  // namespace macnoma

#endif  // MACNOMA_PROBLEM_HPP_
