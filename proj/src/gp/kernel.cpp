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

#include "fastcharge/gp/kernel.hpp"

#include <cmath>

namespace fastcharge::gp {

double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& k,
                   bool same_training_point) {
  const double d2 = (x - x2).squaredNorm();
  const double rbf = k.signal_var * std::exp(-d2 / (2.0 * k.length_scale * k.length_scale));
  return same_training_point ? rbf + k.noise_var : rbf;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd d2(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    d2.col(j) = (a.rowwise() - b.row(j)).rowwise().squaredNorm();
  }
  return d2;
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KernelParams& k) {
  const double scale = -1.0 / (2.0 * k.length_scale * k.length_scale);
  return k.signal_var * (squared_distances(a, b).array() * scale).exp().matrix();
}

}  // namespace fastcharge::gp
