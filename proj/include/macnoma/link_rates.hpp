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

#ifndef MACNOMA_LINK_RATES_HPP_
#define MACNOMA_LINK_RATES_HPP_

#include <armadillo>

#include "macnoma/channel.hpp"
#include "macnoma/config.hpp"

namespace macnoma {

// The decision variables: both BS beamformers, the relay power at user N and
// the three MA positions (N transmit, N receive, F receive).
struct CandidateSolution {
  arma::cx_vec w_f;
  arma::cx_vec w_n;
  double p_n = 0.0;
  MaPosition t_d;
  MaPosition r_n;
  MaPosition r_f;
};

// Signed margins, each >= 0 when its constraint holds.
struct ConstraintSlacks {
  double bs_power = 0.0;          // P_T - |w_F|^2 - |w_N|^2
  double relay_power_low = 0.0;   // P_N
  double relay_power_high = 0.0;  // P_NF - P_N
  double qos_n = 0.0;             // R_NN - R_th
  double qos_f = 0.0;             // R_FF - R_th
  double sic = 0.0;               // R_NF - R_th
  double region_td = 0.0;
  double region_rn = 0.0;
  double region_rf = 0.0;
  double ma_separation = 0.0;  // |t_d - r_N| - lambda/2

  bool all_nonnegative() const;
};

struct LinkEvaluation {
  double sinr_nf = 0.0;
  double sinr_nn = 0.0;
  double sinr_mrc = 0.0;
  double r_nf = 0.0;
  double r_nn = 0.0;
  double r_mrc = 0.0;
  double r_ff = 0.0;
  double sum_rate = 0.0;
  ConstraintSlacks slacks;
  bool feasible = false;
};

// |h_N^H w_F|^2 / (|h_N^H w_N|^2 + P_N |h_SI|^2 + sigma^2)
double sinr_decode_far_at_near(const arma::cx_vec& h_n, const arma::cx_vec& w_f,
                               const arma::cx_vec& w_n, double p_n, cplx h_si,
                               double sigma2);

// |h_N^H w_N|^2 / (P_N |h_SI|^2 + sigma^2); w_F is gone after SIC.
double sinr_own_at_near(const arma::cx_vec& h_n, const arma::cx_vec& w_n, double p_n,
                        cplx h_si, double sigma2);

// BS branch plus D2D branch, combined additively.
double sinr_mrc_at_far(const arma::cx_vec& h_f, const arma::cx_vec& w_f,
                       const arma::cx_vec& w_n, double p_n, cplx h_d, double sigma2);

// log2(1 + sinr). Throws std::domain_error for negative input.
double rate(double sinr);

// Fills every SINR, rate, slack and the feasibility verdict.
LinkEvaluation evaluate_links(const ChannelSet& channels, const CandidateSolution& sol,
                              const SystemConfig& config);

}  // namespace macnoma

#endif  // MACNOMA_LINK_RATES_HPP_
