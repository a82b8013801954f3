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

namespace fastcharge::gp {

/// RBF signal plus white noise on the diagonal.
struct KernelParams {
  double signal_var = 1.0;
  double length_scale = 1.0;
  double noise_var = 1e-5;

  bool operator==(const KernelParams&) const = default;
};

/// signal_var * exp(-|x - x2|^2 / (2 l^2)), plus noise_var when the two
/// arguments are the same training point.
double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& k,
                   bool same_training_point = false);

/// Squared Euclidean distances between the rows of a and the rows of b.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// RBF part only (no noise), rows of a against rows of b.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KernelParams& k);

}  // namespace fastcharge::gp
