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

#include "macnoma/neural.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace macnoma {
namespace {

arma::mat activate(const arma::mat& z, Activation act) {
  switch (act) {
    case Activation::kRelu:
      return arma::clamp(z, 0.0, arma::datum::inf);
    case Activation::kTanh:
      return arma::tanh(z);
    case Activation::kIdentity:
      break;
  }
  return z;
}

// Derivative of the activation, given the pre-activation z and output a.
arma::mat activation_slope(const arma::mat& z, const arma::mat& a, Activation act) {
  switch (act) {
    case Activation::kRelu:
      return arma::conv_to<arma::mat>::from(z > 0.0);
    case Activation::kTanh:
      return 1.0 - arma::square(a);
    case Activation::kIdentity:
      break;
  }
  return arma::ones(arma::size(z));
}

Activation layer_activation(const NetSpec& spec, std::size_t layer, std::size_t n_layers) {
  return layer + 1 == n_layers ? spec.output_activation : spec.hidden_activation;
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return value;
}

constexpr char kMagic[] = "MACNOMA-CKPT";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

}  // namespace

void NetSpec::validate() const {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("NetSpec: dimensions must be >= 1");
  for (arma::uword w : hidden)
    if (w < 1) throw std::invalid_argument("NetSpec: hidden widths must be >= 1");
}

Mlp::Mlp(NetSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  std::vector<arma::uword> dims{spec_.input_dim};
  dims.insert(dims.end(), spec_.hidden.begin(), spec_.hidden.end());
  dims.push_back(spec_.output_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    layer.weight.zeros(dims[l + 1], dims[l]);
    layer.bias.zeros(dims[l + 1]);
    layer.m_weight.zeros(dims[l + 1], dims[l]);
    layer.v_weight.zeros(dims[l + 1], dims[l]);
    layer.m_bias.zeros(dims[l + 1]);
    layer.v_bias.zeros(dims[l + 1]);
    layers_.push_back(std::move(layer));
  }
}

void Mlp::initialize(Rng& rng, double final_layer_scale) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    DenseLayer& layer = layers_[l];
    double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.n_cols));
    if (l + 1 == layers_.size()) bound *= final_layer_scale;
    std::uniform_real_distribution<double> u(-bound, bound);
    // Row-major fill order, fixed for reproducibility.
    for (arma::uword i = 0; i < layer.weight.n_rows; ++i)
      for (arma::uword j = 0; j < layer.weight.n_cols; ++j) layer.weight(i, j) = u(rng);
    for (arma::uword i = 0; i < layer.bias.n_elem; ++i) layer.bias(i) = u(rng);
  }
}

ForwardCache Mlp::forward(const arma::mat& inputs) const {
  if (inputs.n_rows != spec_.input_dim)
    throw std::invalid_argument(
        fmt::format("Mlp::forward: input has {} rows, expected {}", inputs.n_rows, spec_.input_dim));
  ForwardCache cache;
  cache.inputs.reserve(layers_.size());
  cache.pre_activations.reserve(layers_.size());
  arma::mat a = inputs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    cache.inputs.push_back(a);
    arma::mat z = layers_[l].weight * a;
    z.each_col() += layers_[l].bias;
    a = activate(z, layer_activation(spec_, l, layers_.size()));
    cache.pre_activations.push_back(std::move(z));
  }
  cache.output = std::move(a);
  return cache;
}

arma::mat Mlp::predict(const arma::mat& inputs) const { return forward(inputs).output; }

Gradients Mlp::backward(const ForwardCache& cache, const arma::mat& output_gradient) const {
  if (cache.inputs.size() != layers_.size() ||
      arma::size(output_gradient) != arma::size(cache.output))
    throw std::invalid_argument("Mlp::backward: cache or gradient shape mismatch");
  Gradients grads;
  grads.layers.resize(layers_.size());
  arma::mat upstream = output_gradient;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const arma::mat& z = cache.pre_activations[l];
    const arma::mat& a = l + 1 == layers_.size() ? cache.output : cache.inputs[l + 1];
    const arma::mat delta =
        upstream % activation_slope(z, a, layer_activation(spec_, l, layers_.size()));
    grads.layers[l].weight = delta * cache.inputs[l].t();
    grads.layers[l].bias = arma::sum(delta, 1);
    upstream = layers_[l].weight.t() * delta;
  }
  grads.input = std::move(upstream);
  return grads;
}

void Mlp::adam_step(const Gradients& grads, const AdamOptions& o) {
  if (grads.layers.size() != layers_.size())
    throw std::invalid_argument("Mlp::adam_step: gradient layer count mismatch");
  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(o.beta1, t);
  const double c2 = 1.0 - std::pow(o.beta2, t);
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * arma::square(g);
    param -= o.lr * (m / c1) / (arma::sqrt(v / c2) + o.eps);
  };
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    DenseLayer& layer = layers_[l];
    update(layer.weight, layer.m_weight, layer.v_weight, grads.layers[l].weight);
    update(layer.bias, layer.m_bias, layer.v_bias, grads.layers[l].bias);
  }
}

void Mlp::soft_update(const Mlp& source, double tau) {
  if (source.layers_.size() != layers_.size())
    throw std::invalid_argument("Mlp::soft_update: layer count mismatch");
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("Mlp::soft_update: tau must be in (0, 1]");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    DenseLayer& dst = layers_[l];
    const DenseLayer& src = source.layers_[l];
    if (arma::size(dst.weight) != arma::size(src.weight))
      throw std::invalid_argument("Mlp::soft_update: layer shape mismatch");
    dst.weight = tau * src.weight + (1.0 - tau) * dst.weight;
    dst.bias = tau * src.bias + (1.0 - tau) * dst.bias;
  }
}

arma::uword Mlp::parameter_count() const {
  arma::uword n = 0;
  for (const auto& layer : layers_) n += layer.weight.n_elem + layer.bias.n_elem;
  return n;
}

arma::vec Mlp::flat_parameters() const {
  arma::vec flat(parameter_count());
  arma::uword k = 0;
  for (const auto& layer : layers_) {
    flat.subvec(k, k + layer.weight.n_elem - 1) = arma::vectorise(layer.weight);
    k += layer.weight.n_elem;
    flat.subvec(k, k + layer.bias.n_elem - 1) = layer.bias;
    k += layer.bias.n_elem;
  }
  return flat;
}

void Mlp::set_flat_parameters(const arma::vec& params) {
  if (params.n_elem != parameter_count())
    throw std::invalid_argument("Mlp::set_flat_parameters: wrong length");
  arma::uword k = 0;
  for (auto& layer : layers_) {
    std::memcpy(layer.weight.memptr(), params.memptr() + k, layer.weight.n_elem * sizeof(double));
    k += layer.weight.n_elem;
    std::memcpy(layer.bias.memptr(), params.memptr() + k, layer.bias.n_elem * sizeof(double));
    k += layer.bias.n_elem;
  }
}

arma::vec flatten_gradients(const Gradients& grads) {
  std::vector<arma::vec> parts;
  for (const auto& g : grads.layers) {
    parts.push_back(arma::vectorise(g.weight));
    parts.push_back(g.bias);
  }
  arma::uword n = 0;
  for (const auto& p : parts) n += p.n_elem;
  arma::vec flat(n);
  arma::uword k = 0;
  for (const auto& p : parts) {
    flat.subvec(k, k + p.n_elem - 1) = p;
    k += p.n_elem;
  }
  return flat;
}

void write_checkpoint(std::ostream& out, const std::vector<NamedNetwork>& nets) {
  out.write(kMagic, kMagicLen);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(nets.size()));
  for (const auto& [name, net] : nets) {
    const NetSpec& spec = net.spec();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.input_dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.output_dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.hidden.size()));
    for (arma::uword w : spec.hidden) put<std::uint32_t>(out, static_cast<std::uint32_t>(w));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(spec.hidden_activation));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(spec.output_activation));
    const arma::vec params = net.flat_parameters();
    put<std::uint64_t>(out, params.n_elem);
    out.write(reinterpret_cast<const char*>(params.memptr()),
              static_cast<std::streamsize>(params.n_elem * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

std::vector<NamedNetwork> read_checkpoint(std::istream& in) {
  char magic[kMagicLen];
  in.read(magic, kMagicLen);
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw std::runtime_error(fmt::format("checkpoint: unsupported version {}", version));
  const auto count = get<std::uint32_t>(in);
  std::vector<NamedNetwork> nets;
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedNetwork entry;
    entry.name.resize(get<std::uint32_t>(in));
    in.read(entry.name.data(), static_cast<std::streamsize>(entry.name.size()));
    NetSpec spec;
    spec.input_dim = get<std::uint32_t>(in);
    spec.output_dim = get<std::uint32_t>(in);
    spec.hidden.resize(get<std::uint32_t>(in));
    for (auto& w : spec.hidden) w = get<std::uint32_t>(in);
    const auto hidden_act = get<std::uint8_t>(in);
    const auto output_act = get<std::uint8_t>(in);
    if (hidden_act > 2 || output_act > 2) throw std::runtime_error("checkpoint: bad activation");
    spec.hidden_activation = static_cast<Activation>(hidden_act);
    spec.output_activation = static_cast<Activation>(output_act);
    entry.net = Mlp(spec);
    arma::vec params(get<std::uint64_t>(in));
    if (params.n_elem != entry.net.parameter_count())
      throw std::runtime_error("checkpoint: parameter count does not match layer shapes");
    in.read(reinterpret_cast<char*>(params.memptr()),
            static_cast<std::streamsize>(params.n_elem * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated parameters");
    entry.net.set_flat_parameters(params);
    nets.push_back(std::move(entry));
  }
  return nets;
}

void save_checkpoint(const std::string& path, const std::vector<NamedNetwork>& nets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("checkpoint: cannot open {}", path));
  write_checkpoint(out, nets);
}

std::vector<NamedNetwork> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("checkpoint: cannot open {}", path));
  return read_checkpoint(in);
}

}  // namespace macnoma
