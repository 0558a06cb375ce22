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

#include "macnoma/baselines.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "macnoma/problem.hpp"
#include "macnoma/rng.hpp"

namespace macnoma {
namespace {

// Feasible candidates rank above infeasible ones; within a class, higher value
// wins. value is the sum rate, or minus the total violation when infeasible.
struct Score {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
};

bool better(const Score& a, const Score& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return a.value > b.value;
}

double violation(const ConstraintSlacks& s, double wavelength) {
  auto neg = [](double v) { return std::max(0.0, -v); };
  return neg(s.qos_n) + neg(s.qos_f) + neg(s.sic) + neg(s.ma_separation) / wavelength +
         neg(s.bs_power) + neg(s.relay_power_low) + neg(s.relay_power_high) +
         (neg(s.region_td) + neg(s.region_rn) + neg(s.region_rf)) / wavelength;
}

// Box coordinates in [-1, 1] share the action layout; power and positions map
// onto the feasible ranges [0, P_NF] and [0, A].
CandidateSolution box_to_solution(const arma::vec& x, const SystemConfig& c) {
  const arma::uword n = c.n_bs_antennas;
  const double amp = std::sqrt(c.p_t);
  auto unit = [](double v) { return 0.5 * (v + 1.0); };
  CandidateSolution sol;
  sol.w_f = arma::cx_vec(amp * x.subvec(0, n - 1), amp * x.subvec(n, 2 * n - 1));
  sol.w_n = arma::cx_vec(amp * x.subvec(2 * n, 3 * n - 1), amp * x.subvec(3 * n, 4 * n - 1));
  const arma::uword p = 4 * n;
  const double a = c.region_side;
  const double o = c.region_origin;
  sol.p_n = c.p_nf * unit(x(p));
  sol.t_d = {o + a * unit(x(p + 1)), o + a * unit(x(p + 2))};
  sol.r_n = {o + a * unit(x(p + 3)), o + a * unit(x(p + 4))};
  sol.r_f = {o + a * unit(x(p + 5)), o + a * unit(x(p + 6))};
  return sol;
}

class Search {
 public:
  Search(const ScenarioRealization& scenario, const SystemConfig& config, SchemeSpec scheme,
         std::size_t budget)
      : config_(scheme_config(config, scheme)),
        scheme_(scheme),
        synth_(scenario, config_),
        budget_(budget) {
    const arma::uword n = config_.n_bs_antennas;
    for (arma::uword i = 0; i < 4 * n; ++i) free_.push_back(i);
    if (scheme.cooperation_enabled()) free_.push_back(4 * n);
    if (scheme.ma_enabled())
      for (arma::uword i = 4 * n + 1; i < 4 * n + 7; ++i) free_.push_back(i);
    dim_ = static_cast<arma::uword>(config_.action_dim());
  }

  bool exhausted() const { return used_ >= budget_; }
  std::size_t used() const { return used_; }
  const std::vector<arma::uword>& free_coords() const { return free_; }
  arma::uword dim() const { return dim_; }

  Score evaluate(const arma::vec& x) {
    ++used_;
    CandidateSolution sol = apply_scheme(box_to_solution(x, config_), scheme_, config_);
    std::tie(sol.w_f, sol.w_n) = normalize_beamformers_or_default(sol.w_f, sol.w_n, config_.p_t);
    const LinkEvaluation e = evaluate_links(synth_.channels(sol.t_d, sol.r_n, sol.r_f), sol, config_);
    Score s;
    s.feasible = e.feasible;
    s.value = e.feasible ? e.sum_rate : -violation(e.slacks, config_.wavelength);
    if (!have_best_ || better(s, best_score_)) {
      have_best_ = true;
      best_score_ = s;
      best_solution_ = sol;
      best_eval_ = e;
    }
    return s;
  }

  OptimizerReport report() const {
    OptimizerReport r;
    r.best_solution = best_solution_;
    r.evaluation = best_eval_;
    r.best_objective = best_eval_.sum_rate;
    r.feasible = have_best_ && best_score_.feasible;
    r.evaluations_used = used_;
    return r;
  }

 private:
  SystemConfig config_;
  SchemeSpec scheme_;
  ChannelSynthesizer synth_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::vector<arma::uword> free_;
  arma::uword dim_ = 0;
  bool have_best_ = false;
  Score best_score_;
  CandidateSolution best_solution_;
  LinkEvaluation best_eval_;
};

struct Probe {
  arma::vec x;
  Score score;
  double step = 0.0;
  std::size_t cursor = 0;
  bool improved_this_pass = false;
  bool converged = false;
};

// Coordinate moves +/- step, clamped to the box; the step halves after a full
// pass without improvement. Spends at most `slice` evaluations.
void refine(Probe& p, Search& search, std::size_t slice, double min_step) {
  const auto& coords = search.free_coords();
  const std::size_t stop_at = search.used() + slice;
  while (!p.converged && !search.exhausted() && search.used() < stop_at) {
    const arma::uword i = coords[p.cursor];
    for (double dir : {+1.0, -1.0}) {
      if (search.exhausted() || search.used() >= stop_at) break;
      const double moved = std::clamp(p.x(i) + dir * p.step, -1.0, 1.0);
      if (moved == p.x(i)) continue;
      arma::vec trial = p.x;
      trial(i) = moved;
      const Score s = search.evaluate(trial);
      if (better(s, p.score)) {
        p.x = std::move(trial);
        p.score = s;
        p.improved_this_pass = true;
        break;
      }
    }
    if (++p.cursor == coords.size()) {
      p.cursor = 0;
      if (!p.improved_this_pass) {
        p.step *= 0.5;
        if (p.step < min_step) p.converged = true;
      }
      p.improved_this_pass = false;
    }
  }
}

void keep_best(std::vector<Probe>& probes, std::size_t n) {
  std::stable_sort(probes.begin(), probes.end(),
                   [](const Probe& a, const Probe& b) { return better(a.score, b.score); });
  if (probes.size() > n) probes.resize(n);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kMaCnoma: return "MA-CNOMA";
    case Scheme::kMaNoma: return "MA-NOMA";
    case Scheme::kFCnoma: return "F-CNOMA";
    case Scheme::kFNoma: return "F-NOMA";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  throw std::invalid_argument(fmt::format("unknown scheme '{}'", name));
}

CandidateSolution apply_scheme(const CandidateSolution& sol, SchemeSpec scheme,
                               const SystemConfig& config) {
  CandidateSolution out = sol;
  if (!scheme.cooperation_enabled()) out.p_n = 0.0;
  if (!scheme.ma_enabled()) {
    const MaPosition center{config.region_center(), config.region_center()};
    out.t_d = out.r_n = out.r_f = center;
  }
  return out;
}

SystemConfig scheme_config(const SystemConfig& config, SchemeSpec scheme) {
  SystemConfig c = config;
  if (!scheme.ma_enabled()) c.enforce_ma_separation = false;
  return c;
}

OptimizerReport reference_optimize(const ScenarioRealization& scenario,
                                   const SystemConfig& config, SchemeSpec scheme,
                                   const OptimizerOptions& options, std::uint64_t seed) {
  if (options.budget < 1) throw std::invalid_argument("reference_optimize: budget must be >= 1");
  config.validate();
  Search search(scenario, config, scheme, options.budget);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const std::size_t per_pass = 2 * search.free_coords().size();
  struct Round {
    std::size_t keep;
    std::size_t slice;
  };
  const Round rounds[] = {{options.starts, per_pass},
                          {std::max<std::size_t>(options.starts / 4, 1), 4 * per_pass},
                          {std::max<std::size_t>(options.starts / 16, 1), 16 * per_pass}};

  // Whole cycles repeat until the budget runs out; the search remembers the
  // best point seen across cycles.
  while (!search.exhausted()) {
    // Global phase: each start keeps the best of its random samples.
    std::vector<Probe> probes;
    for (std::size_t s = 0; s < options.starts && !search.exhausted(); ++s) {
      Probe best;
      for (std::size_t k = 0; k < options.samples_per_start && !search.exhausted(); ++k) {
        arma::vec x(search.dim(), arma::fill::zeros);
        for (arma::uword i : search.free_coords()) x(i) = unit(rng);
        const Score score = search.evaluate(x);
        if (best.x.is_empty() || better(score, best.score)) {
          best.x = std::move(x);
          best.score = score;
        }
      }
      best.step = options.initial_step;
      probes.push_back(std::move(best));
    }

    // Successive halving: every start gets a short refinement, survivors longer.
    for (const Round& round : rounds) {
      keep_best(probes, round.keep);
      for (Probe& p : probes) refine(p, search, round.slice, options.min_step);
    }
    keep_best(probes, probes.size());
    for (Probe& p : probes) refine(p, search, options.budget, options.min_step);
  }
  return search.report();
}

OptimizerReport reference_optimize(const ScenarioRealization& scenario,
                                   const SystemConfig& config, SchemeSpec scheme,
                                   std::size_t budget, std::uint64_t seed) {
  OptimizerOptions options;
  options.budget = budget;
  return reference_optimize(scenario, config, scheme, options, seed);
}

std::string_view sweep_variable_name(SweepKind kind) {
  return kind == SweepKind::kPower ? "bs_power_dbm" : "region_scale";
}

SystemConfig sweep_point_config(const SystemConfig& base, SweepKind kind, double value) {
  SystemConfig c = base;
  if (kind == SweepKind::kPower) {
    c.p_t = dbm_to_watts(value);
  } else {
    // The square grows about a fixed centre, so fixed antennas stay put.
    c.region_side = base.region_side * value;
    c.region_origin = base.region_center() - 0.5 * c.region_side;
  }
  return c;
}

void parallel_for(int n, unsigned threads, const std::function<void(int)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<SweepRow> evaluate_scheme_sweep(const SystemConfig& base,
                                            const std::vector<Scheme>& schemes, SweepKind kind,
                                            const std::vector<double>& values, int n_scenarios,
                                            const OptimizerOptions& options,
                                            std::uint64_t master_seed, unsigned threads) {
  if (n_scenarios < 1) throw std::invalid_argument("evaluate_scheme_sweep: n_scenarios < 1");
  std::vector<SweepRow> rows;
  for (double value : values) {
    const SystemConfig config = sweep_point_config(base, kind, value);
    config.validate();
    std::vector<std::vector<double>> rates(schemes.size(), std::vector<double>(n_scenarios));
    std::vector<std::vector<char>> feasible(schemes.size(), std::vector<char>(n_scenarios));
    parallel_for(n_scenarios, threads, [&](int i) {
      const ScenarioRealization scenario =
          sample_scenario(config, derive_seed(master_seed, Stream::kScenario, i));
      const std::uint64_t opt_seed = derive_seed(master_seed, Stream::kOptimizer, i);
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const OptimizerReport r =
            reference_optimize(scenario, config, SchemeSpec{schemes[s]}, options, opt_seed);
        rates[s][i] = r.achieved_rate();
        feasible[s][i] = r.feasible;
      }
    });
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      SweepRow row;
      row.scheme = schemes[s];
      row.kind = kind;
      row.value = value;
      row.mean_rate = mean(rates[s]);
      row.stderr_rate = standard_error(rates[s]);
      row.n_scenarios = n_scenarios;
      row.n_feasible = static_cast<int>(std::count(feasible[s].begin(), feasible[s].end(), 1));
      row.per_scenario = std::move(rates[s]);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& provenance) {
  out << "# " << provenance << '\n';
  out << "scheme,sweep_variable,value,mean_rate,stderr,n_scenarios\n";
  for (const SweepRow& r : rows)
    out << fmt::format("{},{},{:.6g},{:.9f},{:.9f},{}\n", scheme_name(r.scheme),
                       sweep_variable_name(r.kind), r.value, r.mean_rate, r.stderr_rate,
                       r.n_scenarios);
}

}  // namespace macnoma
