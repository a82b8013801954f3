/* Copyright 2026 The fastcharge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 on any FAIL.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fastcharge/harness/trainer.hpp"
#include "fastcharge/protocols/evaluate.hpp"
#include "fastcharge/safety/safety_layer.hpp"
#include "fastcharge/verify/gp_oracle.hpp"
#include "fastcharge/verify/gradient_check.hpp"
#include "fastcharge/verify/projection_oracle.hpp"

using namespace fastcharge;
using harness::Mode;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kGpTol = 1e-8;
constexpr double kGpSeconds = 5.0;
constexpr double kGradTol = 1e-4;
constexpr double kGradSeconds = 30.0;
constexpr double kProjTol = 2e-4;
constexpr int kProjPoints = 1000000;
constexpr double kProjSeconds = 60.0;
constexpr double kPlainViolatingEpisodes = 0.30;
constexpr double kSafeViolatingSteps = 0.02;
constexpr double kOrderSlack = 1.0;  // steps
constexpr int kFinalEpisodes = 10;
constexpr int kDriftEpisode = 150;   // post-drift: zero-based episode index >= 150
constexpr int kLateEpisodes = 50;    // GP error window at the end of the run
constexpr double kGpErrorRatio = 2.0;
constexpr int kIdentityQueries = 1000;
constexpr double kIdentityTol = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& name, const Outcome& o) {
  std::printf("%s [%s] %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void progress(const std::string& what) {
  std::fprintf(stderr, "  .. %s\n", what.c_str());
}

double final_mean_steps(const std::vector<protocols::EpisodeLog>& logs) {
  const auto n = std::min<std::size_t>(kFinalEpisodes, logs.size());
  double s = 0.0;
  for (auto it = logs.end() - static_cast<std::ptrdiff_t>(n); it != logs.end(); ++it) s += it->metrics.steps;
  return s / static_cast<double>(n);
}

double violating_episode_fraction(const std::vector<protocols::EpisodeLog>& logs) {
  const auto bad = std::count_if(logs.begin(), logs.end(), [](const auto& l) { return l.metrics.violations() > 0; });
  return static_cast<double>(bad) / static_cast<double>(logs.size());
}

double violating_step_fraction(const std::vector<protocols::EpisodeLog>& logs, int first_episode,
                               const ExperimentConfig& cfg) {
  long steps = 0, bad = 0;
  for (const auto& l : logs) {
    if (l.episode < first_episode) continue;
    for (const auto& r : l.rows) {
      ++steps;
      bad += r.temperature > cfg.temperature_limit || r.voltage > cfg.voltage_limit;
    }
  }
  return steps ? static_cast<double>(bad) / static_cast<double>(steps) : 0.0;
}

void save_run(const fs::path& root, const std::string& name, const std::vector<protocols::EpisodeLog>& logs) {
  if (root.empty()) return;
  protocols::write_logs(logs, root / name);
}

void criterion_gp_oracle() {
  const auto start = Clock::now();
  const auto r = verify::gp_oracle_suite(50, 1);
  const double secs = seconds_since(start);
  report("1", "GP oracle equivalence",
         {r.datasets == 50 && r.max_error() <= kGpTol && secs < kGpSeconds,
          fmt("50 datasets, max rel err mean %.2e var %.2e lml %.2e (tol %.0e), %.2f s", r.max_mean_error,
              r.max_var_error, r.max_lml_error, kGpTol, secs)});
}

void criterion_gradients() {
  const auto start = Clock::now();
  const auto actor = verify::gradient_check_shape({4, 128, 128, 1}, mlp::OutputActivation::Tanh, 1);
  const auto critic = verify::gradient_check_shape({5, 128, 128, 1}, mlp::OutputActivation::Identity, 2);
  const double secs = seconds_since(start);
  const double worst = std::max(actor.max_relative_error, critic.max_relative_error);
  report("2", "MLP gradient check",
         {worst < kGradTol && secs < kGradSeconds && actor.checked > 0 && critic.checked > 0,
          fmt("actor %.2e over %zu (skipped %zu), critic %.2e over %zu (skipped %zu), tol %.0e, %.2f s",
              actor.max_relative_error, actor.checked, actor.skipped, critic.max_relative_error, critic.checked,
              critic.skipped, kGradTol, secs)});
}

void criterion_projection() {
  safety::ProjectionSettings settings;
  const auto cfg = fixed_condition_config();
  settings.action = cfg.action;
  settings.grid_points = cfg.projection_grid;
  settings.tolerance = cfg.projection_tolerance;
  const auto start = Clock::now();
  const auto r = verify::projection_oracle_suite(100, 7, kProjPoints, settings);
  const double secs = seconds_since(start);
  report("3", "projection optimality",
         {r.instances == 100 && r.flag_mismatches == 0 && r.unsound == 0 && r.max_action_error <= kProjTol &&
              secs < kProjSeconds,
          fmt("100 instances (%d feasible, %d raw-feasible), max |a - a_oracle| %.2e (tol %.0e), flag mismatches %d, "
              "unsound %d, %.1f s",
              r.feasible_instances, r.raw_feasible, r.max_action_error, kProjTol, r.flag_mismatches, r.unsound,
              secs)});
}

void criterion_fixed_study(const std::vector<std::uint64_t>& seeds, const fs::path& out) {
  const Mode modes[] = {Mode::Plain, Mode::StaticSafe, Mode::AdaptiveSafe};
  double plain_eps = 0.0, time[3] = {0, 0, 0}, safe_steps[3] = {0, 0, 0}, slowest = 0.0;
  for (auto seed : seeds) {
    for (int m = 0; m < 3; ++m) {
      auto cfg = fixed_condition_config();
      cfg.seed = seed;
      const auto start = Clock::now();
      const auto r = harness::train(cfg, modes[m]);
      const double secs = seconds_since(start);
      slowest = std::max(slowest, secs);
      const std::string name = harness::to_string(modes[m]) + "_seed" + std::to_string(seed);
      save_run(out, "fixed_" + name, r.logs);
      time[m] += final_mean_steps(r.logs);
      if (modes[m] == Mode::Plain) plain_eps += violating_episode_fraction(r.logs);
      else safe_steps[m] += violating_step_fraction(r.logs, cfg.warmup_episodes, cfg);
      progress(fmt("fixed %s: final-10 %.1f steps, %.0f s", name.c_str(), final_mean_steps(r.logs), secs));
    }
  }
  const double k = static_cast<double>(seeds.size());
  plain_eps /= k;
  for (int m = 0; m < 3; ++m) {
    time[m] /= k;
    safe_steps[m] /= k;
  }
  const auto cfg = fixed_condition_config();
  const auto cccv = protocols::evaluate(cfg, protocols::cccv_policy(cfg), {}).front().metrics;
  const double cccv_steps = cccv.steps;

  report("4a", "fixed study: plain TD3 violates",
         {plain_eps >= kPlainViolatingEpisodes,
          fmt("violating episodes %.1f%% (need >= %.0f%%), seeds %zu", 100 * plain_eps, 100 * kPlainViolatingEpisodes,
              seeds.size())});
  report("4b", "fixed study: safe modes respect the limits",
         {safe_steps[1] <= kSafeViolatingSteps && safe_steps[2] <= kSafeViolatingSteps,
          fmt("post-warmup violating steps static %.2f%%, adaptive %.2f%% (need <= %.0f%%)", 100 * safe_steps[1],
              100 * safe_steps[2], 100 * kSafeViolatingSteps)});
  const bool ordered = time[0] <= time[1] + kOrderSlack && time[1] <= time[2] + kOrderSlack &&
                       time[2] <= cccv_steps + kOrderSlack;
  report("4c", "fixed study: charge time ordering",
         {ordered, fmt("final-10 mean steps plain %.1f, static %.1f, adaptive %.1f, CCCV %.0f (slack %.0f); "
                       "slowest run %.0f s",
                       time[0], time[1], time[2], cccv_steps, kOrderSlack, slowest)});
}

void criterion_varying_study(const fs::path& out) {
  const auto cfg = varying_condition_config();
  const auto late = cfg.episodes - kLateEpisodes;

  auto start = Clock::now();
  const auto stat = harness::train(cfg, Mode::StaticSafe);
  const double stat_secs = seconds_since(start);
  save_run(out, "varying_static-safe", stat.logs);
  progress(fmt("varying static-safe: %.0f s", stat_secs));

  // Identity check rides along the adaptive run.
  Rng query_rng(99);
  int queries = 0, active_steps = 0;
  double worst_mean = 0.0;
  bool var_exact = true;
  const auto observer = [&](const harness::StepContext& c) {
    if (c.warmup || c.dynamic == nullptr) return;
    const gp::GpModel* dyn[] = {c.dynamic->temperature.model(), c.dynamic->voltage.model()};
    if (dyn[0] == nullptr && dyn[1] == nullptr) return;
    ++active_steps;
    if (queries >= kIdentityQueries || query_rng.uniform() > 0.1) return;
    const auto& s = c.transition->next_state;
    const double a_prev = c.transition->action;
    const double a = query_rng.uniform(cfg.action.min, cfg.action.max);
    const gp::GpModel* stat_models[] = {&*c.stat->temperature, &*c.stat->voltage};
    const double z[] = {s.temperature, s.voltage};
    for (int k = 0; k < 2 && queries < kIdentityQueries; ++k) {
      if (dyn[k] == nullptr) continue;
      const Eigen::Vector3d x(z[k], a_prev, a);
      const auto st = safety::next_state_posterior(*stat_models[k], x);
      const auto ad = safety::adaptive_posterior(*stat_models[k], dyn[k], x);
      const double d = dyn[k]->posterior(x).mean;
      worst_mean = std::max(worst_mean, std::abs((ad.mean - st.mean) - d) / std::max(std::abs(d), 1.0));
      var_exact = var_exact && ad.var == st.var;
      ++queries;
    }
  };
  start = Clock::now();
  const auto adap = harness::train(cfg, Mode::AdaptiveSafe, observer);
  const double adap_secs = seconds_since(start);
  save_run(out, "varying_adaptive-safe", adap.logs);
  progress(fmt("varying adaptive-safe: %.0f s", adap_secs));

  long viol_stat = 0, viol_adap = 0, steps_adap = 0;
  for (const auto& l : stat.logs) {
    if (l.episode >= kDriftEpisode) viol_stat += l.metrics.violation_steps_T;
  }
  for (const auto& l : adap.logs) {
    if (l.episode >= kDriftEpisode) {
      viol_adap += l.metrics.violation_steps_T;
      steps_adap += l.metrics.steps;
    }
  }
  const double adap_rate = violating_step_fraction(adap.logs, cfg.warmup_episodes, cfg);
  const auto err = [&](const std::vector<protocols::EpisodeLog>& logs, bool adaptive) {
    double s = 0.0;
    long n = 0;
    for (const auto& l : logs) {
      if (l.episode < late) continue;
      for (const auto& r : l.rows) {
        s += std::abs((adaptive ? r.gp_mean_T : r.static_mean_T) - r.temperature);
        ++n;
      }
    }
    return n ? s / static_cast<double>(n) : 0.0;
  };
  const double err_stat = err(stat.logs, false), err_adap = err(adap.logs, true);
  const double ratio = err_adap > 0 ? err_stat / err_adap : INFINITY;

  report("5", "varying study: adaptive layer tracks the drift",
         {viol_adap < viol_stat && adap_rate <= kSafeViolatingSteps && ratio >= kGpErrorRatio,
          fmt("post-drift T violation steps static %ld, adaptive %ld (of %ld); adaptive violating steps %.2f%% "
              "(need <= %.0f%%); late T error static %.3f, adaptive %.3f, ratio %.2f (need >= %.0f); %.0f s + %.0f s",
              viol_stat, viol_adap, steps_adap, 100 * adap_rate, 100 * kSafeViolatingSteps, err_stat, err_adap,
              ratio, kGpErrorRatio, stat_secs, adap_secs)});
  report("6", "adaptive composition identity",
         {queries == kIdentityQueries && worst_mean <= kIdentityTol && var_exact,
          fmt("%d queries over %d residual-active steps, max |delta mean - dynamic mean| %.2e (tol %.0e), "
              "variance %s",
              queries, active_steps, worst_mean, kIdentityTol, var_exact ? "identical" : "DIFFERS")});
}

void criterion_cccv(const fs::path& out) {
  const auto fixed = fixed_condition_config();
  const auto f = protocols::evaluate(fixed, protocols::cccv_policy(fixed), {});
  const auto varying = varying_condition_config();
  protocols::EvaluateOptions opts;
  opts.episodes = varying.episodes;
  const auto v = protocols::evaluate(varying, protocols::cccv_policy(varying), opts);
  save_run(out, "cccv_fixed", f);
  save_run(out, "cccv_varying", v);
  const auto& fm = f.front().metrics;
  const auto& vm = v.back().metrics;
  report("7", "CCCV sanity",
         {fm.finished() && fm.violations() == 0 && !vm.finished(),
          fmt("fixed: %s in %d steps, %d violations; harsh endpoint (episode %d): %s, final SOC %.3f",
              fm.finished() ? "reached 80%" : "did not finish", fm.steps, fm.violations(), v.back().episode,
              vm.finished() ? "reached 80%" : "did not reach 80%", v.back().rows.back().soc)});
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

void criterion_determinism(const fs::path& out) {
  auto cfg = fixed_condition_config();
  cfg.episodes = 20;
  cfg.seed = 5;
  const fs::path root = out.empty() ? fs::temp_directory_path() / "fc_acceptance_determinism" : out / "determinism";
  bool same = true;
  std::string detail;
  for (auto mode : {Mode::Plain, Mode::StaticSafe, Mode::AdaptiveSafe}) {
    const auto name = harness::to_string(mode);
    for (int run = 0; run < 2; ++run) {
      const auto dir = root / (name + "_run" + std::to_string(run));
      fs::remove_all(dir);
      protocols::write_logs(harness::train(cfg, mode).logs, dir);
    }
    const auto a = read_file(root / (name + "_run0") / "summary.csv");
    const auto b = read_file(root / (name + "_run1") / "summary.csv");
    const bool eq = !a.empty() && a == b;
    same = same && eq;
    detail += fmt("%s%s %zu bytes %s", detail.empty() ? "" : ", ", name.c_str(), a.size(), eq ? "identical" : "DIFFER");
  }
  report("8", "determinism", {same, detail + " (20 episodes, seed 5)"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<std::string> only;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string out;
  app.add_option("--only", only, "criteria to run: 1 2 3 4 5 6 7 8 (5 and 6 share a run)");
  app.add_option("--seeds", seeds, "seeds for the fixed-condition study");
  app.add_option("--out", out, "keep run logs under this directory");
  CLI11_PARSE(app, argc, argv);

  const std::set<std::string> pick(only.begin(), only.end());
  const auto want = [&](const char* id) { return pick.empty() || pick.count(id) > 0; };
  const fs::path out_dir = out;
  const auto start = Clock::now();

  if (want("1")) criterion_gp_oracle();
  if (want("2")) criterion_gradients();
  if (want("3")) criterion_projection();
  if (want("7")) criterion_cccv(out_dir);
  if (want("8")) criterion_determinism(out_dir);
  if (want("4")) criterion_fixed_study(seeds, out_dir);
  if (want("5") || want("6")) criterion_varying_study(out_dir);

  std::printf("%s: %d failing, %.0f s total\n", failures ? "FAIL" : "PASS", failures, seconds_since(start));
  return failures ? 1 : 0;
}
