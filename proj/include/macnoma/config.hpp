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

#ifndef MACNOMA_CONFIG_HPP_
#define MACNOMA_CONFIG_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

namespace macnoma {

// Raised for any invalid configuration value. The message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
inline double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

// Physical system parameters, SI units unless noted.
struct SystemConfig {
  int n_bs_antennas = 4;
  double wavelength = 0.01;  // m
  int l_b = 6;               // BS -> user transmit paths
  int l_a = 6;               // N -> F transmit paths
  int l_r = 6;               // receive paths at both users
  double region_side = 0.02; // A, m
  // Lower-left corner of each mobility square, on both axes.
  double region_origin = 0.0;  // m
  double alpha = 3.9;
  double sigma2 = dbm_to_watts(-100.0);
  double p_t = dbm_to_watts(15.0);
  double p_nf = dbm_to_watts(10.0);
  double r_th = 0.7;  // bits/s/Hz
  double g0 = db_to_linear(-40.0);
  double omega_si2 = db_to_linear(-110.0);
  double d_bn = 50.0;
  double d_bf = 100.0;
  double d_nf = 50.0;
  double penalty = 10.0;
  // The lambda/2 spacing rule between user N's transmit and receive MAs.
  // Fixed-antenna benchmarks switch it off.
  bool enforce_ma_separation = true;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  // Real-valued action length: both beamformers (re+im), P_N, three 2-D
  // positions.
  int action_dim() const { return 4 * n_bs_antennas + 1 + 6; }
  int state_dim() const { return action_dim() + 3 + 2 * (2 * n_bs_antennas + 1); }

  double region_center() const { return region_origin + 0.5 * region_side; }

  // Expected per-antenna channel power g0 * d^-alpha.
  double path_gain(double distance) const {
    return g0 * std::pow(distance, -alpha);
  }
};

}  // namespace macnoma

#endif  // MACNOMA_CONFIG_HPP_
