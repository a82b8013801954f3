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

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fastcharge/gp/gp_model.hpp"

namespace fastcharge::gp {

void thin(Eigen::MatrixXd& x, Eigen::VectorXd& y, Eigen::Index n_max, Rng& rng) {
  if (n_max < 2) throw std::invalid_argument("thin: n_max must be >= 2");
  const Eigen::Index n = x.rows();
  if (n <= n_max) return;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  // Partial Fisher-Yates: the first n_max slots become a uniform subset.
  for (Eigen::Index i = 0; i < n_max; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(n_max));
  std::sort(idx.begin(), idx.end());

  Eigen::MatrixXd xk(n_max, x.cols());
  Eigen::VectorXd yk(n_max);
  for (Eigen::Index i = 0; i < n_max; ++i) {
    xk.row(i) = x.row(idx[static_cast<std::size_t>(i)]);
    yk(i) = y(idx[static_cast<std::size_t>(i)]);
  }
  x = std::move(xk);
  y = std::move(yk);
}

}  // namespace fastcharge::gp
