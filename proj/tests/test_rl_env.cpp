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

#include <cmath>

#include "generators.hpp"
#include "macnoma/rl_env.hpp"

namespace macnoma {
namespace {

double bs_power(const CandidateSolution& s) {
  return std::pow(arma::norm(s.w_f), 2) + std::pow(arma::norm(s.w_n), 2);
}

// Raw action whose decoded solution sits inside every box and keeps t_d and
// r_N apart.
RawAction tidy_action(Rng& rng, const SystemConfig& c) {
  RawAction a = testing::real_vector(rng, c.action_dim(), -1.0, 1.0);
  const arma::uword p = 4 * c.n_bs_antennas;
  a(p) = testing::uniform(rng, -0.6, 0.6);
  for (arma::uword i = p + 1; i < p + 7; ++i) a(i) = testing::uniform(rng, -0.6, 0.6);
  a(p + 1) = -0.6;  // t_d on the left edge
  a(p + 3) = 0.6;   // r_N on the right
  return a;
}

TEST_SUITE("rl_env") {

TEST_CASE("dimensions") {
  const SystemConfig c;
  CHECK(c.action_dim() == 23);
  CHECK(c.state_dim() == 44);
  Environment env(c);
  CHECK(env.reset(1).flatten().n_elem == 44u);
  CHECK(state_features(env.state(), c).n_elem == 44u);
  SystemConfig two;
  two.n_bs_antennas = 2;
  CHECK(two.action_dim() == 15);
  CHECK(two.state_dim() == 15 + 3 + 10);
}

TEST_CASE("reset is deterministic and starts from the region centre") {
  const SystemConfig c;
  Environment a(c), b(c);
  const arma::vec sa = a.reset(5).flatten();
  const arma::vec sb = b.reset(5).flatten();
  CHECK(arma::approx_equal(sa, sb, "absdiff", 0.0));
  CHECK(arma::all(a.state().prev_action == 0.0));
  CHECK(a.state().prev_power_wf == 0.0);
  CHECK(a.state().prev_p_n == 0.0);
  const MaPosition mid{c.region_center(), c.region_center()};
  const ChannelSet ch = a.synthesizer().channels(mid, mid, mid);
  CHECK(arma::approx_equal(a.state().channels, flatten_channels(ch), "absdiff", 0.0));
  CHECK_FALSE(arma::approx_equal(a.reset(6).flatten(), sa, "absdiff", 0.0));
}

TEST_CASE("decode examples") {
  const SystemConfig c;
  const arma::uword p = 4 * c.n_bs_antennas;
  const CandidateSolution mid = decode_action(arma::zeros(c.action_dim()), c);
  CHECK(mid.p_n == doctest::Approx(c.p_nf / 2.0));
  CHECK(mid.t_d.x == doctest::Approx(c.region_side / 2.0));
  CHECK(mid.r_f.y == doctest::Approx(c.region_side / 2.0));
  CHECK(arma::norm(mid.w_f) == 0.0);

  RawAction top(c.action_dim(), arma::fill::ones);
  const CandidateSolution hi = decode_action(top, c);
  CHECK(hi.r_n.x == doctest::Approx(1.25 * c.region_side));
  CHECK(hi.p_n == doctest::Approx(1.25 * c.p_nf));
  CHECK(hi.w_f(0).real() == doctest::Approx(std::sqrt(c.p_t)));
  CHECK(hi.w_n(3).imag() == doctest::Approx(std::sqrt(c.p_t)));

  const CandidateSolution lo = decode_action(-top, c);
  CHECK(lo.r_f.y == doctest::Approx(-0.25 * c.region_side));
  CHECK(lo.p_n == doctest::Approx(-0.25 * c.p_nf));

  RawAction wild = top * 7.0;
  wild(p) = -3.0;
  const CandidateSolution clamped = decode_action(wild, c);
  CHECK(clamped.t_d.y == doctest::Approx(hi.t_d.y));
  CHECK(clamped.p_n == doctest::Approx(lo.p_n));
}

TEST_CASE("decode follows a shifted region") {
  SystemConfig c;
  c.region_origin = 0.5;
  const CandidateSolution mid = decode_action(arma::zeros(c.action_dim()), c);
  CHECK(mid.t_d.x == doctest::Approx(c.region_center()));
  const RawAction back = encode_solution(mid, c);
  CHECK(arma::norm(back) < 1e-12);
}

TEST_CASE("encode inverts decode") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    SystemConfig c = testing::small_config(rng);
    c.region_side = testing::uniform(rng, 0.005, 0.05);
    const RawAction raw = testing::real_vector(rng, c.action_dim(), -1.0, 1.0);
    const CandidateSolution s = decode_action(raw, c);
    CHECK(arma::norm(encode_solution(s, c) - raw) < 1e-9);
    const CandidateSolution again = decode_action(encode_solution(s, c), c);
    CHECK(std::abs(again.r_f.x - s.r_f.x) < 1e-9 * c.region_side);
    CHECK(std::abs(again.p_n - s.p_n) < 1e-9 * c.p_nf);
  }
}

TEST_CASE("wrong action length is rejected") {
  const SystemConfig c;
  CHECK_THROWS_AS(decode_action(arma::zeros(22), c), ConfigError);
  Environment env(c);
  env.reset(1);
  CHECK_THROWS_AS(env.step(arma::zeros(24)), ConfigError);
}

TEST_CASE("step before reset") {
  Environment env{SystemConfig{}};
  CHECK_THROWS_AS(env.step(arma::zeros(23)), std::logic_error);
}

TEST_CASE("step normalizes and reports powers") {
  const SystemConfig c;
  Environment env(c);
  env.reset(3);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const StepResult r = env.step(testing::real_vector(rng, c.action_dim(), -1.0, 1.0));
    CHECK(std::abs(bs_power(r.solution) - c.p_t) < 1e-9);
    CHECK(std::abs(r.next_state.prev_power_wf + r.next_state.prev_power_wn - c.p_t) < 1e-9);
    CHECK(r.next_state.prev_p_n == r.solution.p_n);
    CHECK(r.reward == r.breakdown.total);
  }
}

TEST_CASE("zero beamformer action falls back to a uniform beam") {
  const SystemConfig c;
  Environment env(c);
  env.reset(4);
  const StepResult r = env.step(arma::zeros(c.action_dim()));
  CHECK(std::abs(bs_power(r.solution) - c.p_t) < 1e-9);
  CHECK(std::isfinite(r.reward));
}

TEST_CASE("feasible actions earn their sum rate, a stray MA costs one penalty") {
  const SystemConfig c;
  Environment env(c);
  Rng rng(5);
  int feasible = 0;
  for (int i = 0; i < 400 && feasible < 5; ++i) {
    env.reset(100 + i);
    const RawAction a = tidy_action(rng, c);
    const StepResult r = env.step(a);
    if (!r.evaluation.feasible) continue;
    ++feasible;
    CHECK(r.reward == r.evaluation.sum_rate);

    // Push r_F out of the box along x. Channels at r_F change, so compare
    // against the new sum rate and check that placement is the only new
    // penalty source.
    RawAction out = a;
    out(4 * c.n_bs_antennas + 5) = 1.0;
    const StepResult s = env.step(out);
    CHECK(s.evaluation.slacks.region_rf < 0.0);
    CHECK(s.breakdown.penalty_region == c.penalty);
    CHECK(s.reward == doctest::Approx(s.evaluation.sum_rate - c.penalty -
                                      s.breakdown.penalty_qos));
  }
  CHECK(feasible == 5);
}

TEST_CASE("step is pure and the scenario stays frozen") {
  const SystemConfig c;
  Environment env(c);
  const EnvState s0 = env.reset(7);
  Rng rng(6);
  const RawAction a = testing::real_vector(rng, c.action_dim(), -1.0, 1.0);
  const StepResult x = step(s0, a, env.synthesizer(), c);
  const StepResult y = step(s0, a, env.synthesizer(), c);
  CHECK(x.reward == y.reward);
  CHECK(arma::approx_equal(x.next_state.flatten(), y.next_state.flatten(), "absdiff", 0.0));

  const arma::cx_mat prm = env.synthesizer().scenario().prm_bf;
  for (int t = 0; t < 10; ++t) env.step(testing::real_vector(rng, c.action_dim(), -1.0, 1.0));
  CHECK(arma::approx_equal(env.synthesizer().scenario().prm_bf, prm, "absdiff", 0.0));
  // Same action, same channels, wherever the episode has wandered.
  const StepResult z = env.step(a);
  CHECK(z.reward == x.reward);
  CHECK(arma::approx_equal(z.next_state.channels, x.next_state.channels, "absdiff", 0.0));
}

TEST_CASE("state features scale powers and channels") {
  const SystemConfig c;
  Environment env(c);
  env.reset(8);
  Rng rng(7);
  env.step(testing::real_vector(rng, c.action_dim(), -1.0, 1.0));
  const EnvState& s = env.state();
  const arma::vec x = state_features(s, c);
  const arma::uword k = c.action_dim();
  CHECK(arma::approx_equal(x.head(k), s.prev_action, "absdiff", 0.0));
  CHECK(x(k) + x(k + 1) == doctest::Approx(1.0));
  CHECK(x(k + 2) == doctest::Approx(s.prev_p_n / c.p_nf));
  CHECK(x(k + 3) == doctest::Approx(s.channels(0) / std::sqrt(c.path_gain(c.d_bn))));
  CHECK(x(k + 3 + 8) == doctest::Approx(s.channels(8) / std::sqrt(c.path_gain(c.d_bf))));
  CHECK(x(k + 3 + 17) == doctest::Approx(s.channels(17) / std::sqrt(c.path_gain(c.d_nf))));
}

}  // TEST_SUITE

}  // namespace
}  // namespace macnoma
