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

#ifndef MACNOMA_NEURAL_HPP_
#define MACNOMA_NEURAL_HPP_

#include <armadillo>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "macnoma/rng.hpp"

namespace macnoma {

enum class Activation : std::uint8_t { kIdentity = 0, kRelu = 1, kTanh = 2 };

struct NetSpec {
  arma::uword input_dim = 1;
  arma::uword output_dim = 1;
  std::vector<arma::uword> hidden;
  Activation hidden_activation = Activation::kRelu;
  Activation output_activation = Activation::kIdentity;

  void validate() const;
};

// Parameters of one dense layer plus its Adam moments.
struct DenseLayer {
  arma::mat weight;  // out x in
  arma::vec bias;
  arma::mat m_weight;
  arma::mat v_weight;
  arma::vec m_bias;
  arma::vec v_bias;
};

// Samples are columns.
struct ForwardCache {
  std::vector<arma::mat> inputs;           // input to each layer
  std::vector<arma::mat> pre_activations;  // affine output of each layer
  arma::mat output;
};

struct LayerGradient {
  arma::mat weight;
  arma::vec bias;
};

struct Gradients {
  std::vector<LayerGradient> layers;
  arma::mat input;  // d/d(input), same shape as the forward input
};

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(NetSpec spec);  // all parameters zero

  // Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); the last layer is
  // additionally multiplied by final_layer_scale.
  void initialize(Rng& rng, double final_layer_scale = 1.0);

  ForwardCache forward(const arma::mat& inputs) const;
  arma::mat predict(const arma::mat& inputs) const;

  // Reverse-mode gradients of sum(output_gradient % output).
  Gradients backward(const ForwardCache& cache, const arma::mat& output_gradient) const;

  void adam_step(const Gradients& grads, const AdamOptions& options);

  // this <- tau * source + (1 - tau) * this, parameters only.
  void soft_update(const Mlp& source, double tau);

  arma::vec flat_parameters() const;
  void set_flat_parameters(const arma::vec& params);
  arma::uword parameter_count() const;

  const NetSpec& spec() const { return spec_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::uint64_t step_count() const { return step_; }

 private:
  NetSpec spec_;
  std::vector<DenseLayer> layers_;
  std::uint64_t step_ = 0;
};

// Flattens per-layer gradients in the same order as flat_parameters().
arma::vec flatten_gradients(const Gradients& grads);

// Binary checkpoint, little-endian:
//   "MACNOMA-CKPT" | u32 version | u32 count |
//   count x { u32 name_len | name | u32 in | u32 out | u32 n_hidden |
//             u32 widths[n_hidden] | u8 hidden_act | u8 output_act |
//             u64 n_params | f64 params[n_params] }
struct NamedNetwork {
  std::string name;
  Mlp net;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const std::vector<NamedNetwork>& nets);
std::vector<NamedNetwork> load_checkpoint(const std::string& path);
void write_checkpoint(std::ostream& out, const std::vector<NamedNetwork>& nets);
std::vector<NamedNetwork> read_checkpoint(std::istream& in);

}  // namespace macnoma

#endif  // MACNOMA_NEURAL_HPP_
