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

#include "macnoma/channel.hpp"

#include <fmt/format.h>

#include <numbers>

namespace macnoma {
namespace {

PathAngleSet draw_angles(int paths, Rng& rng) {
  std::uniform_real_distribution<double> elevation(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  PathAngleSet set;
  set.elevation.resize(paths);
  set.azimuth.resize(paths);
  for (int k = 0; k < paths; ++k) {
    set.elevation[k] = elevation(rng);
    set.azimuth[k] = azimuth(rng);
  }
  return set;
}

cplx draw_cn(double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

arma::cx_mat draw_prm(int rows, int cols, double link_gain, Rng& rng) {
  const double variance = link_gain / static_cast<double>(rows * cols);
  arma::cx_mat prm(rows, cols);
  // Column-major fill; the order is part of the reproducibility contract.
  for (arma::uword j = 0; j < prm.n_cols; ++j)
    for (arma::uword i = 0; i < prm.n_rows; ++i) prm(i, j) = draw_cn(variance, rng);
  return prm;
}

void check_shapes(const ScenarioRealization& s, const SystemConfig& c) {
  auto bad = [](const char* what) {
    throw ConfigError(fmt::format("scenario/config mismatch: {}", what));
  };
  if (static_cast<int>(s.bs_antenna_positions.size()) != c.n_bs_antennas)
    bad("bs antenna count");
  if (s.prm_bn.n_rows != static_cast<arma::uword>(c.l_r) ||
      s.prm_bn.n_cols != static_cast<arma::uword>(c.l_b))
    bad("prm_bn shape");
  if (s.prm_bf.n_rows != static_cast<arma::uword>(c.l_r) ||
      s.prm_bf.n_cols != static_cast<arma::uword>(c.l_b))
    bad("prm_bf shape");
  if (s.prm_nf.n_rows != static_cast<arma::uword>(c.l_r) ||
      s.prm_nf.n_cols != static_cast<arma::uword>(c.l_a))
    bad("prm_nf shape");
  if (s.angles_bn.tx.size() != s.prm_bn.n_cols || s.angles_bn.rx.size() != s.prm_bn.n_rows)
    bad("angles_bn length");
  if (s.angles_bf.tx.size() != s.prm_bf.n_cols || s.angles_bf.rx.size() != s.prm_bf.n_rows)
    bad("angles_bf length");
  if (s.angles_nf.tx.size() != s.prm_nf.n_cols || s.angles_nf.rx.size() != s.prm_nf.n_rows)
    bad("angles_nf length");
}

arma::cx_vec as_column(const arma::cx_rowvec& row) { return row.st(); }

}  // namespace

std::vector<MaPosition> bs_array_positions(const SystemConfig& config) {
  std::vector<MaPosition> positions(config.n_bs_antennas);
  for (int n = 0; n < config.n_bs_antennas; ++n)
    positions[n] = {static_cast<double>(n) * config.wavelength / 2.0, 0.0};
  return positions;
}

ScenarioRealization sample_scenario(const SystemConfig& config, Rng& rng) {
  ScenarioRealization s;
  s.angles_bn = {draw_angles(config.l_b, rng), draw_angles(config.l_r, rng)};
  s.angles_bf = {draw_angles(config.l_b, rng), draw_angles(config.l_r, rng)};
  s.angles_nf = {draw_angles(config.l_a, rng), draw_angles(config.l_r, rng)};
  s.prm_bn = draw_prm(config.l_r, config.l_b, config.path_gain(config.d_bn), rng);
  s.prm_bf = draw_prm(config.l_r, config.l_b, config.path_gain(config.d_bf), rng);
  s.prm_nf = draw_prm(config.l_r, config.l_a, config.path_gain(config.d_nf), rng);
  s.h_si = draw_cn(config.omega_si2, rng);
  s.bs_antenna_positions = bs_array_positions(config);
  return s;
}

ScenarioRealization sample_scenario(const SystemConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return sample_scenario(config, rng);
}

double propagation_difference(MaPosition pos, double elevation, double azimuth) {
  return pos.x * std::cos(elevation) * std::sin(azimuth) + pos.y * std::sin(elevation);
}

arma::cx_vec field_response_vector(MaPosition pos, const PathAngleSet& angles,
                                   double wavelength) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  arma::cx_vec frv(angles.size());
  for (std::size_t p = 0; p < angles.size(); ++p) {
    const double phase = -k * propagation_difference(pos, angles.elevation[p], angles.azimuth[p]);
    frv(p) = std::polar(1.0, phase);
  }
  return frv;
}

arma::cx_mat field_response_matrix(const std::vector<MaPosition>& positions,
                                   const PathAngleSet& angles, double wavelength) {
  arma::cx_mat frm(angles.size(), positions.size());
  for (std::size_t n = 0; n < positions.size(); ++n)
    frm.col(n) = field_response_vector(positions[n], angles, wavelength);
  return frm;
}

arma::cx_vec assemble_bs_user_channel(const ScenarioRealization& scenario,
                                      MaPosition user_rx_pos, UserLink link,
                                      const SystemConfig& config) {
  check_shapes(scenario, config);
  const LinkAngles& angles = link == UserLink::kNear ? scenario.angles_bn : scenario.angles_bf;
  const arma::cx_mat& prm = link == UserLink::kNear ? scenario.prm_bn : scenario.prm_bf;
  const arma::cx_vec f = field_response_vector(user_rx_pos, angles.rx, config.wavelength);
  const arma::cx_mat g =
      field_response_matrix(scenario.bs_antenna_positions, angles.tx, config.wavelength);
  return as_column(f.st() * prm * g);
}

cplx assemble_d2d_channel(const ScenarioRealization& scenario, MaPosition tx_pos,
                          MaPosition rx_pos, const SystemConfig& config) {
  check_shapes(scenario, config);
  const arma::cx_vec f = field_response_vector(rx_pos, scenario.angles_nf.rx, config.wavelength);
  const arma::cx_vec g = field_response_vector(tx_pos, scenario.angles_nf.tx, config.wavelength);
  return arma::as_scalar(f.st() * scenario.prm_nf * g);
}

ChannelSet assemble_channels(const ScenarioRealization& scenario, MaPosition t_d,
                             MaPosition r_n, MaPosition r_f, const SystemConfig& config) {
  ChannelSet set;
  set.h_n = assemble_bs_user_channel(scenario, r_n, UserLink::kNear, config);
  set.h_f = assemble_bs_user_channel(scenario, r_f, UserLink::kFar, config);
  set.h_d = assemble_d2d_channel(scenario, t_d, r_f, config);
  set.h_si = scenario.h_si;
  return set;
}

ChannelSynthesizer::ChannelSynthesizer(const ScenarioRealization& scenario,
                                       const SystemConfig& config)
    : scenario_(scenario), wavelength_(config.wavelength) {
  check_shapes(scenario_, config);
  sigma_g_n_ = scenario_.prm_bn * field_response_matrix(scenario_.bs_antenna_positions,
                                                        scenario_.angles_bn.tx, wavelength_);
  sigma_g_f_ = scenario_.prm_bf * field_response_matrix(scenario_.bs_antenna_positions,
                                                        scenario_.angles_bf.tx, wavelength_);
}

ChannelSet ChannelSynthesizer::channels(MaPosition t_d, MaPosition r_n, MaPosition r_f) const {
  const arma::cx_vec f_n = field_response_vector(r_n, scenario_.angles_bn.rx, wavelength_);
  const arma::cx_vec f_f = field_response_vector(r_f, scenario_.angles_bf.rx, wavelength_);
  const arma::cx_vec f_d = field_response_vector(r_f, scenario_.angles_nf.rx, wavelength_);
  const arma::cx_vec g_d = field_response_vector(t_d, scenario_.angles_nf.tx, wavelength_);
  ChannelSet set;
  set.h_n = as_column(f_n.st() * sigma_g_n_);
  set.h_f = as_column(f_f.st() * sigma_g_f_);
  set.h_d = arma::as_scalar(f_d.st() * scenario_.prm_nf * g_d);
  set.h_si = scenario_.h_si;
  return set;
}

}  // namespace macnoma
