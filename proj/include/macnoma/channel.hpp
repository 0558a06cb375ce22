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

#ifndef MACNOMA_CHANNEL_HPP_
#define MACNOMA_CHANNEL_HPP_

#include <armadillo>
#include <complex>
#include <cstdint>
#include <vector>

#include "macnoma/config.hpp"
#include "macnoma/rng.hpp"

namespace macnoma {

using cplx = std::complex<double>;

// A 2-D antenna position inside its local mobility region, in meters.
struct MaPosition {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const MaPosition& a, const MaPosition& b) {
  return a.x == b.x && a.y == b.y;
}

// Elevation/azimuth pairs of the propagation paths on one side of a link.
struct PathAngleSet {
  std::vector<double> elevation;  // [0, pi)
  std::vector<double> azimuth;    // [0, 2 pi)

  std::size_t size() const { return elevation.size(); }
};

struct LinkAngles {
  PathAngleSet tx;
  PathAngleSet rx;
};

// One frozen draw of every random quantity in the channel model. Moving an
// antenna never touches any of these; only the field-response phases change.
struct ScenarioRealization {
  LinkAngles angles_bn;
  LinkAngles angles_bf;
  LinkAngles angles_nf;
  arma::cx_mat prm_bn;  // l_r x l_b
  arma::cx_mat prm_bf;  // l_r x l_b
  arma::cx_mat prm_nf;  // l_r x l_a
  cplx h_si;
  std::vector<MaPosition> bs_antenna_positions;
};

struct ChannelSet {
  arma::cx_vec h_n;  // BS -> N, length n_bs_antennas
  arma::cx_vec h_f;  // BS -> F
  cplx h_d;          // N -> F
  cplx h_si;         // residual self-interference at N
};

enum class UserLink { kNear, kFar };

// Angles uniform over their ranges, PRM entries CN(0, g0 d^-alpha / (rows*cols)),
// h_SI ~ CN(0, omega_si2), BS antennas on a lambda/2 ULA along x.
ScenarioRealization sample_scenario(const SystemConfig& config, Rng& rng);
ScenarioRealization sample_scenario(const SystemConfig& config, std::uint64_t seed);

std::vector<MaPosition> bs_array_positions(const SystemConfig& config);

// x cos(theta) sin(phi) + y sin(theta)
double propagation_difference(MaPosition pos, double elevation, double azimuth);

// exp(-j 2pi/lambda rho_k(pos)) per path.
arma::cx_vec field_response_vector(MaPosition pos, const PathAngleSet& angles,
                                   double wavelength);

// Columns are the transmit FRVs at each position.
arma::cx_mat field_response_matrix(const std::vector<MaPosition>& positions,
                                   const PathAngleSet& angles, double wavelength);

// h = f(r)^T Sigma G for the BS -> user link. Throws ConfigError on a shape
// mismatch between scenario and config.
arma::cx_vec assemble_bs_user_channel(const ScenarioRealization& scenario,
                                      MaPosition user_rx_pos, UserLink link,
                                      const SystemConfig& config);

// h_d = f_F(r_F)^T Sigma_NF g_N(t_d).
cplx assemble_d2d_channel(const ScenarioRealization& scenario, MaPosition tx_pos,
                          MaPosition rx_pos, const SystemConfig& config);

ChannelSet assemble_channels(const ScenarioRealization& scenario, MaPosition t_d,
                             MaPosition r_n, MaPosition r_f,
                             const SystemConfig& config);

// Caches Sigma * G for both BS links so repeated evaluations at new user
// positions only pay for the receive-side FRVs.
class ChannelSynthesizer {
 public:
  ChannelSynthesizer(const ScenarioRealization& scenario, const SystemConfig& config);

  ChannelSet channels(MaPosition t_d, MaPosition r_n, MaPosition r_f) const;

  const ScenarioRealization& scenario() const { return scenario_; }

 private:
  ScenarioRealization scenario_;
  double wavelength_;
  arma::cx_mat sigma_g_n_;  // l_r x N
  arma::cx_mat sigma_g_f_;
};

}  // namespace macnoma

#endif  // MACNOMA_CHANNEL_HPP_
