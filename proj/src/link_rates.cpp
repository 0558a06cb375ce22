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

#include "macnoma/link_rates.hpp"

#include <algorithm>
#include <stdexcept>

#include "macnoma/problem.hpp"

namespace macnoma {
namespace {

// |h^H w|^2
double beam_gain(const arma::cx_vec& h, const arma::cx_vec& w) {
  return std::norm(arma::cdot(h, w));
}

void check_lengths(const ChannelSet& ch, const CandidateSolution& sol,
                   const SystemConfig& config) {
  const auto n = static_cast<arma::uword>(config.n_bs_antennas);
  if (ch.h_n.n_elem != n || ch.h_f.n_elem != n || sol.w_f.n_elem != n ||
      sol.w_n.n_elem != n)
    throw ConfigError("evaluate_links: vector length differs from n_bs_antennas");
}

}  // namespace

bool ConstraintSlacks::all_nonnegative() const {
  return std::min({bs_power, relay_power_low, relay_power_high, qos_n, qos_f, sic,
                   region_td, region_rn, region_rf, ma_separation}) >= 0.0;
}

double sinr_decode_far_at_near(const arma::cx_vec& h_n, const arma::cx_vec& w_f,
                               const arma::cx_vec& w_n, double p_n, cplx h_si,
                               double sigma2) {
  return beam_gain(h_n, w_f) / (beam_gain(h_n, w_n) + p_n * std::norm(h_si) + sigma2);
}

double sinr_own_at_near(const arma::cx_vec& h_n, const arma::cx_vec& w_n, double p_n,
                        cplx h_si, double sigma2) {
  return beam_gain(h_n, w_n) / (p_n * std::norm(h_si) + sigma2);
}

double sinr_mrc_at_far(const arma::cx_vec& h_f, const arma::cx_vec& w_f,
                       const arma::cx_vec& w_n, double p_n, cplx h_d, double sigma2) {
  return beam_gain(h_f, w_f) / (beam_gain(h_f, w_n) + sigma2) + p_n * std::norm(h_d) / sigma2;
}

double rate(double sinr) {
  if (!(sinr >= 0.0)) throw std::domain_error("rate: SINR must be non-negative");
  return std::log2(1.0 + sinr);
}

LinkEvaluation evaluate_links(const ChannelSet& channels, const CandidateSolution& sol,
                              const SystemConfig& config) {
  check_lengths(channels, sol, config);
  LinkEvaluation e;
  // A negative relay power is an infeasible proposal; the SINRs see it as 0 so
  // that every rate stays defined, and the slacks still flag it.
  const double p_n = std::max(sol.p_n, 0.0);
  e.sinr_nf = sinr_decode_far_at_near(channels.h_n, sol.w_f, sol.w_n, p_n, channels.h_si,
                                      config.sigma2);
  e.sinr_nn = sinr_own_at_near(channels.h_n, sol.w_n, p_n, channels.h_si, config.sigma2);
  e.sinr_mrc = sinr_mrc_at_far(channels.h_f, sol.w_f, sol.w_n, p_n, channels.h_d,
                               config.sigma2);
  e.r_nf = rate(e.sinr_nf);
  e.r_nn = rate(e.sinr_nn);
  e.r_mrc = rate(e.sinr_mrc);
  e.r_ff = std::min(e.r_mrc, e.r_nf);
  e.sum_rate = e.r_nn + e.r_ff;
  e.slacks = compute_slacks(e, sol, config);
  e.feasible = e.slacks.all_nonnegative();
  return e;
}

}  // namespace macnoma
