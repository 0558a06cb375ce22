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


// Brute-force re-implementations used as oracles. They share nothing with
// the library beyond the plain data types.

#ifndef MACNOMA_TESTS_ORACLES_HPP_
#define MACNOMA_TESTS_ORACLES_HPP_

#include <armadillo>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "macnoma/channel.hpp"
#include "macnoma/neural.hpp"

namespace macnoma::oracle {

inline cplx phase(double x, double y, double el, double az, double lambda) {
  const double rho = x * std::cos(el) * std::sin(az) + y * std::sin(el);
  const double arg = -2.0 * std::numbers::pi / lambda * rho;
  return {std::cos(arg), std::sin(arg)};
}

// sum_d sum_m f_d * S(d, m) * g_m(t_n), one entry per BS antenna.
inline std::vector<cplx> bs_channel(const arma::cx_mat& prm, const LinkAngles& link,
                                    MaPosition rx, int n_antennas, double lambda) {
  std::vector<cplx> h(n_antennas, cplx{0.0, 0.0});
  for (int n = 0; n < n_antennas; ++n) {
    const double tx_x = n * lambda / 2.0;
    for (std::size_t d = 0; d < prm.n_rows; ++d) {
      const cplx f = phase(rx.x, rx.y, link.rx.elevation[d], link.rx.azimuth[d], lambda);
      for (std::size_t m = 0; m < prm.n_cols; ++m) {
        const cplx g = phase(tx_x, 0.0, link.tx.elevation[m], link.tx.azimuth[m], lambda);
        h[n] += f * prm(d, m) * g;
      }
    }
  }
  return h;
}

inline cplx d2d_channel(const arma::cx_mat& prm, const LinkAngles& link, MaPosition tx,
                        MaPosition rx, double lambda) {
  cplx h{0.0, 0.0};
  for (std::size_t d = 0; d < prm.n_rows; ++d)
    for (std::size_t m = 0; m < prm.n_cols; ++m)
      h += phase(rx.x, rx.y, link.rx.elevation[d], link.rx.azimuth[d], lambda) * prm(d, m) *
           phase(tx.x, tx.y, link.tx.elevation[m], link.tx.azimuth[m], lambda);
  return h;
}

// |sum_i conj(h_i) w_i|^2
inline double gain(const arma::cx_vec& h, const arma::cx_vec& w) {
  cplx acc{0.0, 0.0};
  for (arma::uword i = 0; i < h.n_elem; ++i) acc += std::conj(h(i)) * w(i);
  return acc.real() * acc.real() + acc.imag() * acc.imag();
}

inline double si_power(double p_n, cplx h_si) { return p_n * std::norm(h_si); }

inline double sinr_nf(const arma::cx_vec& h_n, const arma::cx_vec& w_f, const arma::cx_vec& w_n,
                      double p_n, cplx h_si, double sigma2) {
  return gain(h_n, w_f) / (gain(h_n, w_n) + si_power(p_n, h_si) + sigma2);
}

inline double sinr_nn(const arma::cx_vec& h_n, const arma::cx_vec& w_n, double p_n, cplx h_si,
                      double sigma2) {
  return gain(h_n, w_n) / (si_power(p_n, h_si) + sigma2);
}

inline double sinr_mrc(const arma::cx_vec& h_f, const arma::cx_vec& w_f, const arma::cx_vec& w_n,
                       double p_n, cplx h_d, double sigma2) {
  return gain(h_f, w_f) / (gain(h_f, w_n) + sigma2) + p_n * std::norm(h_d) / sigma2;
}

// Scalar-loop forward pass of an Mlp on one input.
inline std::vector<double> mlp_forward(const Mlp& net, std::vector<double> x) {
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& W = layers[l].weight;
    std::vector<double> y(W.n_rows);
    for (std::size_t r = 0; r < W.n_rows; ++r) {
      double acc = layers[l].bias(r);
      for (std::size_t k = 0; k < W.n_cols; ++k) acc += W(r, k) * x[k];
      y[r] = acc;
    }
    const Activation act = l + 1 == layers.size() ? net.spec().output_activation
                                                  : net.spec().hidden_activation;
    for (double& v : y) {
      if (act == Activation::kRelu) v = v > 0.0 ? v : 0.0;
      if (act == Activation::kTanh) v = std::tanh(v);
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace macnoma::oracle

#endif  // MACNOMA_TESTS_ORACLES_HPP_
