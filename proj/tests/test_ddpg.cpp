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


#include <doctest.h>

#include <algorithm>
#include <set>

#include "checks.hpp"
#include "generators.hpp"
#include "macnoma/ddpg.hpp"
#include "oracles.hpp"

namespace macnoma {
namespace {

Transition tagged(double reward) {
  Transition t;
  t.reward = reward;
  return t;
}

TEST_SUITE("ddpg") {

TEST_CASE("config validation") {
  AgentConfig a;
  CHECK_NOTHROW(a.validate());
  a.discount = 1.0;
  CHECK_THROWS_AS(a.validate(), ConfigError);
  a = {};
  a.tau = 0.0;
  CHECK_THROWS_AS(a.validate(), ConfigError);
  a = {};
  a.batch_size = a.buffer_capacity + 1;
  CHECK_THROWS_AS(a.validate(), ConfigError);
}

TEST_CASE("exploration schedule") {
  AgentConfig a;
  CHECK(a.noise_stddev(0) == doctest::Approx(a.noise_stddev_initial));
  CHECK(a.noise_stddev(10) ==
        doctest::Approx(a.noise_stddev_initial * std::pow(a.noise_decay, 10)));
  CHECK(a.noise_stddev(1000000) == a.noise_floor);
}

TEST_CASE("replay buffer evicts the oldest first") {
  ReplayBuffer buf(3);
  for (int i = 0; i < 5; ++i) buf.push(tagged(i));
  CHECK(buf.size() == 3u);
  CHECK(buf.capacity() == 3u);
  CHECK(buf.at(0).reward == 2.0);
  CHECK(buf.at(1).reward == 3.0);
  CHECK(buf.at(2).reward == 4.0);
  CHECK_THROWS_AS(buf.at(3), std::out_of_range);
  CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("replay buffer never exceeds capacity") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int cap = testing::uniform_int(rng, 1, 20);
    const int pushes = testing::uniform_int(rng, 0, 60);
    ReplayBuffer buf(cap);
    for (int i = 0; i < pushes; ++i) buf.push(tagged(i));
    CHECK(buf.size() == static_cast<std::size_t>(std::min(cap, pushes)));
    for (std::size_t i = 0; i < buf.size(); ++i)
      CHECK(buf.at(i).reward == pushes - static_cast<int>(buf.size()) + static_cast<int>(i));
  }
}

TEST_CASE("minibatch indices are distinct and cover the buffer") {
  ReplayBuffer buf(100);
  for (int i = 0; i < 40; ++i) buf.push(tagged(i));
  Rng rng(2);
  std::vector<int> hits(40, 0);
  for (int k = 0; k < 2000; ++k) {
    const auto idx = buf.sample_indices(10, rng);
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 10u);
    for (std::size_t i : idx) {
      CHECK(i < 40u);
      ++hits[i];
    }
  }
  // 500 expected per slot.
  CHECK(*std::min_element(hits.begin(), hits.end()) > 400);
  CHECK(*std::max_element(hits.begin(), hits.end()) < 600);
  CHECK(buf.sample_indices(40, rng).size() == 40u);
  CHECK_THROWS_AS(buf.sample_indices(41, rng), std::invalid_argument);
}

TEST_CASE("targets start as copies") {
  const SystemConfig c;
  const DdpgAgent agent(c.state_dim(), c.action_dim(), {}, 3);
  CHECK(arma::approx_equal(agent.actor().flat_parameters(),
                           agent.target_actor().flat_parameters(), "absdiff", 0.0));
  CHECK(arma::approx_equal(agent.critic().flat_parameters(),
                           agent.target_critic().flat_parameters(), "absdiff", 0.0));
  CHECK(agent.actor().spec().output_activation == Activation::kTanh);
  CHECK(agent.critic().spec().input_dim == 44u + 23u);
  CHECK(agent.critic().spec().output_dim == 1u);
}

TEST_CASE("action selection") {
  const SystemConfig c;
  const DdpgAgent agent(c.state_dim(), c.action_dim(), {}, 4);
  Rng rng(5);
  const arma::vec s = testing::real_vector(rng, c.state_dim(), -1.0, 1.0);
  CHECK(arma::approx_equal(agent.select_action(s, 0.0, rng), agent.actor().predict(s),
                           "absdiff", 0.0));
  for (int i = 0; i < 50; ++i) {
    const RawAction a = agent.select_action(s, 2.0, rng);
    CHECK(a.min() >= -1.0);
    CHECK(a.max() <= 1.0);
  }
  Rng r1(6), r2(6);
  CHECK(arma::approx_equal(agent.select_action(s, 0.3, r1), agent.select_action(s, 0.3, r2),
                           "absdiff", 0.0));
}

TEST_CASE("critic target") {
  const SystemConfig c;
  Rng rng(7);
  ReplayBuffer buf(64);
  testing::fill_buffer(buf, c, rng, 16);
  std::vector<std::size_t> idx(16);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const Minibatch mb = make_minibatch(buf, idx, c);
  CHECK(mb.size() == 16u);
  CHECK(mb.states.n_rows == 44u);

  AgentConfig zero_discount;
  zero_discount.discount = 1e-300;
  const DdpgAgent myopic(c.state_dim(), c.action_dim(), zero_discount, 8);
  CHECK(arma::approx_equal(myopic.critic_target(mb), mb.rewards, "absdiff", 1e-250));

  DdpgAgent agent(c.state_dim(), c.action_dim(), {}, 9);
  const arma::rowvec y = agent.critic_target(mb);
  for (arma::uword i = 0; i < mb.size(); ++i) {
    const arma::vec s2 = mb.next_states.col(i);
    const std::vector<double> a2 =
        oracle::mlp_forward(agent.target_actor(), std::vector<double>(s2.begin(), s2.end()));
    std::vector<double> sa(s2.begin(), s2.end());
    sa.insert(sa.end(), a2.begin(), a2.end());
    const double q = oracle::mlp_forward(agent.target_critic(), sa)[0];
    CHECK(std::abs(y(i) - (mb.rewards(i) + 0.99 * q)) < 1e-10);
  }

  agent.target_critic().set_flat_parameters(arma::zeros(agent.target_critic().parameter_count()));
  CHECK(arma::approx_equal(agent.critic_target(mb), mb.rewards, "absdiff", 0.0));
}

TEST_CASE("train step waits for a full batch") {
  const SystemConfig c;
  Rng rng(10);
  AgentConfig a = testing::small_agent_config();
  ReplayBuffer buf(a.buffer_capacity);
  testing::fill_buffer(buf, c, rng, static_cast<int>(a.batch_size) - 1);
  DdpgAgent agent(c.state_dim(), c.action_dim(), a, 11);
  const arma::vec before = agent.actor().flat_parameters();
  CHECK_FALSE(agent.train_step(buf, rng, c).has_value());
  CHECK(arma::approx_equal(agent.actor().flat_parameters(), before, "absdiff", 0.0));
  testing::fill_buffer(buf, c, rng, 1);
  CHECK(agent.train_step(buf, rng, c).has_value());
}

TEST_CASE("identical agents and batches stay identical") {
  const SystemConfig c;
  Rng rng(12);
  ReplayBuffer buf(64);
  testing::fill_buffer(buf, c, rng, 64);
  DdpgAgent a(c.state_dim(), c.action_dim(), testing::small_agent_config(), 13);
  DdpgAgent b(c.state_dim(), c.action_dim(), testing::small_agent_config(), 13);
  Rng ra(14), rb(14);
  for (int i = 0; i < 5; ++i) {
    a.train_step(buf, ra, c);
    b.train_step(buf, rb, c);
  }
  CHECK(arma::approx_equal(a.actor().flat_parameters(), b.actor().flat_parameters(), "absdiff",
                           0.0));
  CHECK(arma::approx_equal(a.target_critic().flat_parameters(),
                           b.target_critic().flat_parameters(), "absdiff", 0.0));
}

TEST_CASE("critic regresses onto a constant reward") {
  const SystemConfig c;
  Rng rng(15);
  ReplayBuffer buf(64);
  testing::fill_buffer(buf, c, rng, 64, 2.5);
  std::vector<std::size_t> idx(64);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const Minibatch mb = make_minibatch(buf, idx, c);
  AgentConfig a = testing::small_agent_config();
  a.discount = 1e-12;
  a.critic_lr = 1e-3;
  DdpgAgent agent(c.state_dim(), c.action_dim(), a, 16);
  double last = agent.update(mb).critic_loss;
  const double first = last;
  int rises = 0;
  for (int i = 0; i < 100; ++i) {
    const double loss = agent.update(mb).critic_loss;
    rises += loss > last;
    last = loss;
  }
  CHECK(rises == 0);
  CHECK(last < 0.1 * first);
}

TEST_CASE("actor gradient through the critic") {
  Rng rng(17);
  CHECK(testing::actor_through_critic_max_relative_error(rng, 10) < 1e-3);
}

TEST_CASE("targets follow the soft update rule") {
  const SystemConfig c;
  CHECK(testing::soft_update_max_error(c, testing::small_agent_config(), 18) < 1e-12);
  AgentConfig big;
  big.batch_size = 8;
  CHECK(testing::soft_update_max_error(c, big, 19) < 1e-12);
}

TEST_CASE("short training run") {
  SystemConfig c;
  AgentConfig a = testing::small_agent_config();
  a.episodes = 3;
  a.steps = 10;
  std::vector<int> seen;
  const TrainingResult r = train(c, a, 20, [&](int ep, double) { seen.push_back(ep); });
  CHECK(r.learning_curve.size() == 3u);
  CHECK(seen == std::vector<int>{0, 1, 2});
  const TrainingResult again = train(c, a, 20);
  CHECK(again.learning_curve == r.learning_curve);
  CHECK(arma::approx_equal(again.agent.actor().flat_parameters(),
                           r.agent.actor().flat_parameters(), "absdiff", 0.0));
  const TrainingResult other = train(c, a, 21);
  CHECK(other.learning_curve != r.learning_curve);
}

TEST_CASE("deterministic rollouts") {
  const SystemConfig c;
  const DdpgAgent agent(c.state_dim(), c.action_dim(), {}, 22);
  const ScenarioRealization s = sample_scenario(c, 23);
  const PolicyRollout a = evaluate_policy(agent.actor(), s, c, 20);
  const PolicyRollout b = evaluate_policy(agent.actor(), s, c, 20);
  CHECK(a.final_reward == b.final_reward);
  CHECK(a.best_feasible_sum_rate == b.best_feasible_sum_rate);
  CHECK(a.any_feasible == b.any_feasible);
  if (!a.any_feasible) CHECK(a.best_feasible_sum_rate == 0.0);
}

}  // TEST_SUITE

}  // namespace
}  // namespace macnoma
