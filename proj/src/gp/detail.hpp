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

#include <Eigen/Dense>

#include "fastcharge/gp/gp_model.hpp"

namespace fastcharge::gp::detail {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

/// Lower Cholesky factor of signal + (noise + jitter) I, escalating jitter
/// from 0 through 1e-10 .. 1e-4. Returns false when every attempt fails.
bool factorize_with_jitter(const Eigen::MatrixXd& signal, double noise_var, Eigen::MatrixXd& chol,
                           double& jitter);

KernelParams optimize_hyperparameters(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                                      const KernelParams& initial, const FitOptions& options,
                                      FitReport& report);

}  // namespace fastcharge::gp::detail
