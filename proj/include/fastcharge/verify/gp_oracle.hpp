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

#include <cstdint>

#include <Eigen/Dense>

#include "fastcharge/gp/gp_model.hpp"

namespace fastcharge::verify {

/// Dense reference GP: same standardization, explicit inverse of the
/// kernel matrix, log-determinant from an LU factorization.
struct OracleGp {
  OracleGp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const gp::KernelParams& kernel);

  gp::Posterior posterior(const Eigen::VectorXd& xq) const;
  double log_marginal_likelihood() const;

 private:
  gp::Standardization stats_;
  Eigen::MatrixXd xs_;
  Eigen::VectorXd ys_;
  gp::KernelParams kernel_;
  Eigen::MatrixXd k_inv_;
  double log_det_ = 0.0;
};

/// |a - b| / max(|b|, 1)
double relative_error(double a, double b);

struct OracleReport {
  int datasets = 0;
  double max_mean_error = 0.0;
  double max_var_error = 0.0;
  double max_lml_error = 0.0;

  double max_error() const;
};

/// Random datasets (n <= 20, d <= 3) with random kernels, compared at
/// training and fresh query points.
OracleReport gp_oracle_suite(int datasets, std::uint64_t seed);

}  // namespace fastcharge::verify
