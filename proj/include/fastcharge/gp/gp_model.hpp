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

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fastcharge/core/rng.hpp"
#include "fastcharge/gp/kernel.hpp"

namespace fastcharge::gp {

class GpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-dimension shift/scale applied before the kernel sees any data.
/// Population standard deviations; a zero spread is replaced by 1.
struct Standardization {
  Eigen::VectorXd input_mean;
  Eigen::VectorXd input_std;
  double target_mean = 0.0;
  double target_std = 1.0;

  static Standardization from_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
  Eigen::MatrixXd inputs(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd targets(const Eigen::VectorXd& y) const;
};

struct Posterior {
  double mean = 0.0;
  double var = 0.0;
};

struct FitOptions {
  bool optimize = false;
  int restarts = 3;               // random starts in addition to the given kernel
  std::uint64_t restart_seed = 0;
  int max_iterations = 60;
};

/// Log marginal likelihood at every accepted optimizer iterate, one vector
/// per start.
struct FitReport {
  std::vector<std::vector<double>> accepted_lml;
  double jitter = 0.0;
};

/// Marginal likelihood and its gradient with respect to
/// (log signal_var, log length_scale) on already standardized data.
struct LmlValue {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
};
/// Throws GpError if the kernel matrix cannot be factorized.
LmlValue lml_with_gradient(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const KernelParams& k);

/// Exact GP regression on standardized data with a Cholesky-factored
/// kernel matrix. Immutable once fitted.
class GpModel {
 public:
  /// Throws GpError("kernel matrix not PD") when jitter escalation up to
  /// 1e-4 cannot rescue the factorization.
  static GpModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& kernel,
                     const FitOptions& options = {});

  /// Mean and variance of the latent function, in target units.
  Posterior posterior(const Eigen::VectorXd& xq) const;

  /// Same as posterior() for each row of xq.
  void posterior_batch(const Eigen::MatrixXd& xq, Eigen::VectorXd& mean, Eigen::VectorXd& var) const;

  /// Prior variance in target units, signal_var * target_std^2.
  double prior_variance() const;

  /// -y'alpha/2 - sum log L_ii - n/2 log 2pi on the standardized targets.
  double log_marginal_likelihood() const;

  const KernelParams& kernel() const { return kernel_; }
  const Standardization& standardization() const { return stats_; }
  const Eigen::MatrixXd& inputs() const { return x_; }
  const Eigen::VectorXd& targets() const { return y_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const FitReport& report() const { return report_; }
  Eigen::Index size() const { return x_.rows(); }
  Eigen::Index dim() const { return x_.cols(); }

  /// Number of posterior variances that came out negative and were clamped.
  std::uint64_t clamped_variance_count() const { return clamped_->load(); }

  /// Inputs, targets, hyperparameters and standardization; the factor is
  /// recomputed by from_json.
  nlohmann::json to_json() const;
  static GpModel from_json(const nlohmann::json& j);

 private:
  GpModel() = default;
  void factorize();

  Eigen::MatrixXd x_;   // raw inputs, n x d
  Eigen::VectorXd y_;   // raw targets
  Eigen::MatrixXd xs_;  // standardized inputs
  Eigen::VectorXd ys_;
  KernelParams kernel_;
  Standardization stats_;
  Eigen::MatrixXd chol_;  // lower triangular
  Eigen::VectorXd alpha_;
  FitReport report_;
  std::shared_ptr<std::atomic<std::uint64_t>> clamped_ = std::make_shared<std::atomic<std::uint64_t>>(0);
};

/// Keeps a uniform random subset of n_max rows, preserving their order.
void thin(Eigen::MatrixXd& x, Eigen::VectorXd& y, Eigen::Index n_max, Rng& rng);

}  // namespace fastcharge::gp
