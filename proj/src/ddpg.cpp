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

#include "macnoma/ddpg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace macnoma {

void AgentConfig::validate() const {
  auto fail = [](const char* field, const char* what) {
    throw ConfigError(fmt::format("{}: {}", field, what));
  };
  if (!(discount > 0.0 && discount < 1.0)) fail("discount", "must be in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) fail("tau", "must be in (0, 1]");
  if (buffer_capacity < 1) fail("buffer_capacity", "must be >= 1");
  if (batch_size < 1 || batch_size > buffer_capacity)
    fail("batch_size", "must be in [1, buffer_capacity]");
  if (!(noise_stddev_initial >= 0.0)) fail("noise_stddev_initial", "must be >= 0");
  if (!(noise_decay > 0.0 && noise_decay <= 1.0)) fail("noise_decay", "must be in (0, 1]");
  if (!(noise_floor >= 0.0)) fail("noise_floor", "must be >= 0");
  if (episodes < 1) fail("episodes", "must be >= 1");
  if (steps < 1) fail("steps", "must be >= 1");
  if (!(actor_lr > 0.0)) fail("actor_lr", "must be > 0");
  if (!(critic_lr > 0.0)) fail("critic_lr", "must be > 0");
  if (hidden.empty()) fail("hidden", "needs at least one layer");
}

double AgentConfig::noise_stddev(int episode) const {
  return std::max(noise_floor, noise_stddev_initial * std::pow(noise_decay, episode));
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  data_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
  const std::size_t oldest = data_.size() < capacity_ ? 0 : next_;
  return data_[(oldest + i) % data_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  if (batch > data_.size()) throw std::invalid_argument("ReplayBuffer: batch exceeds size");
  // Floyd's algorithm: `batch` distinct draws in O(batch).
  std::vector<std::size_t> picked;
  std::unordered_set<std::size_t> seen;
  const std::size_t n = data_.size();
  for (std::size_t j = n - batch; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    const std::size_t chosen = seen.count(t) ? j : t;
    seen.insert(chosen);
    picked.push_back(chosen);
  }
  return picked;
}

Minibatch make_minibatch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices,
                         const SystemConfig& config) {
  const arma::uword b = indices.size();
  Minibatch mb;
  mb.states.set_size(config.state_dim(), b);
  mb.next_states.set_size(config.state_dim(), b);
  mb.actions.set_size(config.action_dim(), b);
  mb.rewards.set_size(b);
  for (arma::uword i = 0; i < b; ++i) {
    const Transition& t = buffer.at(indices[i]);
    mb.states.col(i) = state_features(t.state, config);
    mb.next_states.col(i) = state_features(t.next_state, config);
    mb.actions.col(i) = t.action;
    mb.rewards(i) = t.reward;
  }
  return mb;
}

NetSpec DdpgAgent::actor_spec(arma::uword state_dim, arma::uword action_dim,
                              const std::vector<arma::uword>& hidden) {
  return {state_dim, action_dim, hidden, Activation::kRelu, Activation::kTanh};
}

NetSpec DdpgAgent::critic_spec(arma::uword state_dim, arma::uword action_dim,
                               const std::vector<arma::uword>& hidden) {
  return {state_dim + action_dim, 1, hidden, Activation::kRelu, Activation::kIdentity};
}

DdpgAgent::DdpgAgent(arma::uword state_dim, arma::uword action_dim, AgentConfig config,
                     std::uint64_t init_seed)
    : config_(std::move(config)),
      state_dim_(state_dim),
      action_dim_(action_dim),
      actor_(actor_spec(state_dim, action_dim, config_.hidden)),
      critic_(critic_spec(state_dim, action_dim, config_.hidden)) {
  config_.validate();
  Rng rng(init_seed);
  actor_.initialize(rng, config_.actor_final_layer_scale);
  critic_.initialize(rng);
  target_actor_ = actor_;
  target_critic_ = critic_;
}

RawAction DdpgAgent::select_action(const arma::vec& features, double noise_stddev,
                                   Rng& rng) const {
  RawAction a = actor_.predict(features);
  if (noise_stddev > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_stddev);
    for (auto& v : a) v += noise(rng);
  }
  return arma::clamp(a, -1.0, 1.0);
}

arma::rowvec DdpgAgent::critic_target(const Minibatch& batch) const {
  const arma::mat next_actions = target_actor_.predict(batch.next_states);
  const arma::rowvec next_q =
      target_critic_.predict(arma::join_cols(batch.next_states, next_actions));
  return batch.rewards + config_.discount * next_q;
}

Gradients DdpgAgent::actor_loss_gradient(const arma::mat& states, double* mean_q) const {
  const double b = static_cast<double>(states.n_cols);
  const ForwardCache actor_cache = actor_.forward(states);
  const ForwardCache q_cache = critic_.forward(arma::join_cols(states, actor_cache.output));
  if (mean_q) *mean_q = arma::accu(q_cache.output) / b;
  const Gradients q_grads =
      critic_.backward(q_cache, arma::rowvec(states.n_cols, arma::fill::value(-1.0 / b)));
  const arma::mat d_action = q_grads.input.rows(state_dim_, state_dim_ + action_dim_ - 1);
  return actor_.backward(actor_cache, d_action);
}

TrainStepStats DdpgAgent::update(const Minibatch& batch) {
  const double b = static_cast<double>(batch.size());
  TrainStepStats stats;

  // Critic: mean squared error against the frozen target.
  const arma::rowvec y = critic_target(batch);
  const ForwardCache critic_cache = critic_.forward(arma::join_cols(batch.states, batch.actions));
  const arma::rowvec err = critic_cache.output - y;
  stats.critic_loss = arma::accu(arma::square(err)) / b;
  critic_.adam_step(critic_.backward(critic_cache, 2.0 * err / b),
                    {config_.critic_lr, config_.beta1, config_.beta2, config_.adam_eps});

  // Actor: ascend mean Q(s, mu(s)) through the critic's action input.
  const Gradients actor_grads = actor_loss_gradient(batch.states, &stats.actor_objective);
  actor_.adam_step(actor_grads, {config_.actor_lr, config_.beta1, config_.beta2, config_.adam_eps});

  target_critic_.soft_update(critic_, config_.tau);
  target_actor_.soft_update(actor_, config_.tau);
  return stats;
}

std::optional<TrainStepStats> DdpgAgent::train_step(const ReplayBuffer& buffer, Rng& rng,
                                                    const SystemConfig& config) {
  if (buffer.size() < config_.batch_size) return std::nullopt;
  return update(make_minibatch(buffer, buffer.sample_indices(config_.batch_size, rng), config));
}

TrainingResult train(const SystemConfig& system, const AgentConfig& agent_config,
                     std::uint64_t master_seed, const EpisodeCallback& on_episode) {
  system.validate();
  agent_config.validate();
  TrainingResult result{DdpgAgent(system.state_dim(), system.action_dim(), agent_config,
                                  derive_seed(master_seed, Stream::kInit)),
                        {}};
  DdpgAgent& agent = result.agent;
  Rng explore = make_rng(master_seed, Stream::kExploration);
  Rng replay = make_rng(master_seed, Stream::kReplay);
  ReplayBuffer buffer(agent_config.buffer_capacity);
  Environment env(system);

  for (int episode = 0; episode < agent_config.episodes; ++episode) {
    env.reset(derive_seed(master_seed, Stream::kScenario, episode));
    const double sigma = agent_config.noise_stddev(episode);
    double reward_sum = 0.0;
    for (int t = 0; t < agent_config.steps; ++t) {
      const EnvState state = env.state();
      const RawAction action = agent.select_action(state_features(state, system), sigma, explore);
      const StepResult r = env.step(action);
      reward_sum += r.reward;
      buffer.push({state, action, r.reward, r.next_state});
      agent.train_step(buffer, replay, system);
    }
    const double mean_reward = reward_sum / agent_config.steps;
    result.learning_curve.push_back(mean_reward);
    if (on_episode) on_episode(episode, mean_reward);
  }
  return result;
}

PolicyRollout evaluate_policy(const Mlp& actor, const ScenarioRealization& scenario,
                              const SystemConfig& config, int steps) {
  Environment env(config);
  env.reset(scenario);
  PolicyRollout out;
  for (int t = 0; t < steps; ++t) {
    const RawAction action =
        arma::clamp(actor.predict(state_features(env.state(), config)), -1.0, 1.0);
    const StepResult r = env.step(action);
    if (r.evaluation.feasible &&
        (!out.any_feasible || r.evaluation.sum_rate > out.best_feasible_sum_rate)) {
      out.any_feasible = true;
      out.best_feasible_sum_rate = r.evaluation.sum_rate;
      out.best_solution = r.solution;
    }
    out.final_reward = r.reward;
    out.final_sum_rate = r.evaluation.sum_rate;
    out.final_feasible = r.evaluation.feasible;
  }
  return out;
}

}  // namespace macnoma
