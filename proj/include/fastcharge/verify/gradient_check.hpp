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
#include <vector>

#include "fastcharge/mlp/network.hpp"

namespace fastcharge::verify {

struct GradientReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // perturbation moved a ReLU across its kink
};

/// Central differences with step h on L = sum(upstream .* net(x)) for every
/// parameter and every input entry.
GradientReport gradient_check(const mlp::Network& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& upstream,
                              double h = 1e-5);

/// A randomly initialized network of the given shape with a random batch.
GradientReport gradient_check_shape(const std::vector<int>& dims, mlp::OutputActivation output,
                                    std::uint64_t seed, int batch = 2);

}  // namespace fastcharge::verify
