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

#include "macnoma/config.hpp"

#include <fmt/format.h>

namespace macnoma {
namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", field, what));
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SystemConfig::validate() const {
  require(n_bs_antennas >= 1, "n_bs_antennas", "must be >= 1");
  require(l_b >= 1, "l_b", "must be >= 1");
  require(l_a >= 1, "l_a", "must be >= 1");
  require(l_r >= 1, "l_r", "must be >= 1");
  require(finite_positive(wavelength), "wavelength", "must be > 0");
  require(finite_positive(region_side), "region_side", "must be > 0");
  require(std::isfinite(region_origin), "region_origin", "must be finite");
  require(std::isfinite(alpha) && alpha > 2.0, "alpha", "must be > 2");
  require(finite_positive(sigma2), "sigma2", "must be > 0");
  require(finite_positive(p_t), "p_t", "must be > 0");
  require(finite_positive(p_nf), "p_nf", "must be > 0");
  require(std::isfinite(r_th) && r_th >= 0.0, "r_th", "must be >= 0");
  require(finite_positive(g0), "g0", "must be > 0");
  require(finite_positive(omega_si2), "omega_si2", "must be > 0");
  require(finite_positive(d_bn), "d_bn", "must be > 0");
  require(finite_positive(d_bf), "d_bf", "must be > 0");
  require(finite_positive(d_nf), "d_nf", "must be > 0");
  require(finite_positive(penalty), "penalty", "must be > 0");
}

}  // namespace macnoma
