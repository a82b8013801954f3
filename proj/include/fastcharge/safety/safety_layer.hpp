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

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fastcharge/gp/gp_model.hpp"

namespace fastcharge::safety {

class SafetyNotReady : public std::runtime_error {
 public:
  SafetyNotReady() : std::runtime_error("safety layer not ready") {}
};

/// Upper uncertainty bound: mean + kappa * sqrt(var).
inline double uub(const gp::Posterior& p, double kappa) { return p.mean + kappa * std::sqrt(p.var); }
double uub(const gp::GpModel& model, const Eigen::VectorXd& x, double kappa);

/// The surrogates regress the one-step change z_{t+1} - z_t on
/// x = [z_t, a_prev, a_t]; this adds z_t back to give the next-step posterior.
gp::Posterior next_state_posterior(const gp::GpModel& increment, const Eigen::VectorXd& x);
void next_state_posterior_batch(const gp::GpModel& increment, const Eigen::MatrixXd& xs, Eigen::VectorXd& mean,
                                Eigen::VectorXd& var);

/// Static next-step posterior with the residual GP's mean added (nothing
/// added when `dynamic` is null); the variance is the static one.
gp::Posterior adaptive_posterior(const gp::GpModel& stat, const gp::GpModel* dynamic,
                                 const Eigen::VectorXd& x);

/// Frozen surrogates of the next-step temperature and voltage (see
/// next_state_posterior).
struct StaticSafety {
  std::optional<gp::GpModel> temperature;
  std::optional<gp::GpModel> voltage;
  double temperature_limit = 45.0;
  double voltage_limit = 4.3;
  double kappa = 3.0;

  bool ready() const { return temperature.has_value() && voltage.has_value(); }

  nlohmann::json to_json() const;
  static StaticSafety from_json(const nlohmann::json& j);
};

/// Residual data for one constrained variable within the current episode
/// and the GP fitted to it once `min_points` residuals exist.
class ResidualChannel {
 public:
  ResidualChannel(const gp::KernelParams& kernel, int min_points);

  /// Appends (x, z_true - static_mean) and refits when enough points exist.
  void record(const Eigen::Vector3d& x, double z_true, double static_mean);
  void reset();

  bool active() const { return model_.has_value(); }
  const gp::GpModel* model() const { return model_ ? &*model_ : nullptr; }
  std::size_t size() const { return residuals_.size(); }
  const std::vector<double>& residuals() const { return residuals_; }
  int min_points() const { return min_points_; }

 private:
  gp::KernelParams kernel_;
  int min_points_;
  std::vector<Eigen::Vector3d> inputs_;
  std::vector<double> residuals_;
  std::optional<gp::GpModel> model_;
};

struct DynamicSafety {
  ResidualChannel temperature;
  ResidualChannel voltage;

  DynamicSafety(const gp::KernelParams& kernel, int min_points)
      : temperature(kernel, min_points), voltage(kernel, min_points) {}

  void reset_episode() {
    temperature.reset();
    voltage.reset();
  }
};

}  // namespace fastcharge::safety
