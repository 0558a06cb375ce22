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

#ifndef MACNOMA_DDPG_HPP_
#define MACNOMA_DDPG_HPP_

#include <armadillo>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "macnoma/neural.hpp"
#include "macnoma/rl_env.hpp"
#include "macnoma/rng.hpp"

namespace macnoma {

struct AgentConfig {
  double discount = 0.99;
  double tau = 0.001;
  std::size_t buffer_capacity = 50000;
  std::size_t batch_size = 64;
  double noise_stddev_initial = 0.3;
  double noise_decay = 0.99;  // per episode
  double noise_floor = 0.02;
  int episodes = 400;
  int steps = 100;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::vector<arma::uword> hidden = {128, 128};
  double actor_final_layer_scale = 0.01;

  void validate() const;  // throws ConfigError
  double noise_stddev(int episode) const;
};

// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }

  // i = 0 is the oldest transition still stored.
  const Transition& at(std::size_t i) const;

  // Distinct indices, uniform over the stored transitions.
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

// Network-ready minibatch; samples are columns.
struct Minibatch {
  arma::mat states;
  arma::mat actions;
  arma::rowvec rewards;
  arma::mat next_states;

  arma::uword size() const { return rewards.n_elem; }
};

Minibatch make_minibatch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices,
                         const SystemConfig& config);

struct TrainStepStats {
  double critic_loss = 0.0;
  double actor_objective = 0.0;  // mean Q(s, mu(s)) before the actor step
};

class DdpgAgent {
 public:
  DdpgAgent(arma::uword state_dim, arma::uword action_dim, AgentConfig config,
            std::uint64_t init_seed);

  // actor(state) + N(0, noise_stddev^2) per component, clamped to [-1, 1].
  RawAction select_action(const arma::vec& features, double noise_stddev, Rng& rng) const;

  // r + discount * Q'(s', mu'(s')).
  arma::rowvec critic_target(const Minibatch& batch) const;

  // Gradient of -mean Q(s, mu(s)) over the columns of states with respect to
  // the actor parameters; the critic is held fixed. Optionally reports the
  // mean Q.
  Gradients actor_loss_gradient(const arma::mat& states, double* mean_q = nullptr) const;

  // One critic regression step, one actor ascent step, then soft updates.
  TrainStepStats update(const Minibatch& batch);

  // Samples a minibatch and calls update(); nullopt while the buffer holds
  // fewer than batch_size transitions.
  std::optional<TrainStepStats> train_step(const ReplayBuffer& buffer, Rng& rng,
                                           const SystemConfig& config);

  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& target_actor() const { return target_actor_; }
  const Mlp& target_critic() const { return target_critic_; }
  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  Mlp& target_actor() { return target_actor_; }
  Mlp& target_critic() { return target_critic_; }
  const AgentConfig& config() const { return config_; }

  static NetSpec actor_spec(arma::uword state_dim, arma::uword action_dim,
                            const std::vector<arma::uword>& hidden);
  static NetSpec critic_spec(arma::uword state_dim, arma::uword action_dim,
                             const std::vector<arma::uword>& hidden);

 private:
  AgentConfig config_;
  arma::uword state_dim_;
  arma::uword action_dim_;
  Mlp actor_;
  Mlp critic_;
  Mlp target_actor_;
  Mlp target_critic_;
};

struct TrainingResult {
  DdpgAgent agent;
  std::vector<double> learning_curve;  // mean reward per episode
};

using EpisodeCallback = std::function<void(int episode, double mean_reward)>;

// M episodes x T steps: fresh scenario per episode, act, step, store, update.
TrainingResult train(const SystemConfig& system, const AgentConfig& agent_config,
                     std::uint64_t master_seed, const EpisodeCallback& on_episode = {});

struct PolicyRollout {
  bool any_feasible = false;
  double best_feasible_sum_rate = 0.0;
  CandidateSolution best_solution;
  double final_reward = 0.0;
  double final_sum_rate = 0.0;
  bool final_feasible = false;
};

// Deterministic rollout of the actor on one scenario for `steps` steps.
PolicyRollout evaluate_policy(const Mlp& actor, const ScenarioRealization& scenario,
                              const SystemConfig& config, int steps);

}  // namespace macnoma

#endif  // MACNOMA_DDPG_HPP_
