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

#include "fastcharge/safety/safety_layer.hpp"

#include <cmath>

namespace fastcharge::safety {

double uub(const gp::GpModel& model, const Eigen::VectorXd& x, double kappa) {
  return uub(model.posterior(x), kappa);
}

gp::Posterior next_state_posterior(const gp::GpModel& increment, const Eigen::VectorXd& x) {
  gp::Posterior p = increment.posterior(x);
  p.mean += x(0);
  return p;
}

void next_state_posterior_batch(const gp::GpModel& increment, const Eigen::MatrixXd& xs, Eigen::VectorXd& mean,
                                Eigen::VectorXd& var) {
  increment.posterior_batch(xs, mean, var);
  mean += xs.col(0);
}

gp::Posterior adaptive_posterior(const gp::GpModel& stat, const gp::GpModel* dynamic,
                                 const Eigen::VectorXd& x) {
  gp::Posterior p = next_state_posterior(stat, x);
  if (dynamic != nullptr) p.mean += dynamic->posterior(x).mean;
  return p;
}

nlohmann::json StaticSafety::to_json() const {
  nlohmann::json j = {{"temperature_limit", temperature_limit},
                      {"voltage_limit", voltage_limit},
                      {"kappa", kappa}};
  if (temperature) j["temperature_gp"] = temperature->to_json();
  if (voltage) j["voltage_gp"] = voltage->to_json();
  return j;
}

StaticSafety StaticSafety::from_json(const nlohmann::json& j) {
  StaticSafety s;
  s.temperature_limit = j.at("temperature_limit").get<double>();
  s.voltage_limit = j.at("voltage_limit").get<double>();
  s.kappa = j.at("kappa").get<double>();
  if (j.contains("temperature_gp")) s.temperature = gp::GpModel::from_json(j.at("temperature_gp"));
  if (j.contains("voltage_gp")) s.voltage = gp::GpModel::from_json(j.at("voltage_gp"));
  return s;
}

ResidualChannel::ResidualChannel(const gp::KernelParams& kernel, int min_points)
    : kernel_(kernel), min_points_(min_points) {}

void ResidualChannel::record(const Eigen::Vector3d& x, double z_true, double static_mean) {
  inputs_.push_back(x);
  residuals_.push_back(z_true - static_mean);
  if (static_cast<int>(residuals_.size()) < min_points_) return;
  const auto n = static_cast<Eigen::Index>(residuals_.size());
  Eigen::MatrixXd xm(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) xm.row(i) = inputs_[static_cast<std::size_t>(i)].transpose();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(residuals_.data(), n);
  model_ = gp::GpModel::fit(xm, y, kernel_);
}

void ResidualChannel::reset() {
  inputs_.clear();
  residuals_.clear();
  model_.reset();
}

}  // namespace fastcharge::safety
