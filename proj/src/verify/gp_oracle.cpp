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

#include "fastcharge/verify/gp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastcharge::verify {
namespace {

double rbf(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const gp::KernelParams& k) {
  return k.signal_var * std::exp(-(a - b).squaredNorm() / (2.0 * k.length_scale * k.length_scale));
}

}  // namespace

OracleGp::OracleGp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const gp::KernelParams& kernel)
    : stats_(gp::Standardization::from_data(x, y)),
      xs_(stats_.inputs(x)),
      ys_(stats_.targets(y)),
      kernel_(kernel) {
  const Eigen::Index n = xs_.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = rbf(xs_.row(i).transpose(), xs_.row(j).transpose(), kernel_) + (i == j ? kernel_.noise_var : 0.0);
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  k_inv_ = lu.inverse();
  log_det_ = lu.matrixLU().diagonal().array().abs().log().sum();
}

gp::Posterior OracleGp::posterior(const Eigen::VectorXd& xq) const {
  const Eigen::VectorXd q = ((xq - stats_.input_mean).array() / stats_.input_std.array()).matrix();
  Eigen::VectorXd kstar(xs_.rows());
  for (Eigen::Index i = 0; i < xs_.rows(); ++i) kstar(i) = rbf(xs_.row(i).transpose(), q, kernel_);
  const double mean = kstar.dot(k_inv_ * ys_);
  const double var = std::max(0.0, kernel_.signal_var - kstar.dot(k_inv_ * kstar));
  return {mean * stats_.target_std + stats_.target_mean, var * stats_.target_std * stats_.target_std};
}

double OracleGp::log_marginal_likelihood() const {
  return -0.5 * ys_.dot(k_inv_ * ys_) - 0.5 * log_det_ -
         0.5 * static_cast<double>(ys_.size()) * std::log(2.0 * std::numbers::pi);
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

double OracleReport::max_error() const { return std::max({max_mean_error, max_var_error, max_lml_error}); }

OracleReport gp_oracle_suite(int datasets, std::uint64_t seed) {
  Rng rng(seed);
  OracleReport report;
  for (int s = 0; s < datasets; ++s) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(19));
    const auto d = static_cast<Eigen::Index>(1 + rng.index(3));
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < d; ++c) x(i, c) = rng.uniform(-5.0, 5.0);
      y(i) = std::sin(x.row(i).sum()) + 0.1 * rng.normal();
    }
    const gp::KernelParams k{std::exp(rng.uniform(-1.0, 1.0)), std::exp(rng.uniform(-0.7, 0.7)),
                             std::exp(rng.uniform(std::log(1e-4), std::log(1e-1)))};
    const auto model = gp::GpModel::fit(x, y, k);
    const OracleGp oracle(x, y, k);

    report.max_lml_error = std::max(report.max_lml_error,
                                    relative_error(model.log_marginal_likelihood(), oracle.log_marginal_likelihood()));
    for (int q = 0; q < 10; ++q) {
      Eigen::VectorXd xq(d);
      if (q < 3) {
        xq = x.row(static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)))).transpose();
      } else {
        for (Eigen::Index c = 0; c < d; ++c) xq(c) = rng.uniform(-6.0, 6.0);
      }
      const auto a = model.posterior(xq);
      const auto b = oracle.posterior(xq);
      report.max_mean_error = std::max(report.max_mean_error, relative_error(a.mean, b.mean));
      report.max_var_error = std::max(report.max_var_error, relative_error(a.var, b.var));
    }
    ++report.datasets;
  }
  return report;
}

}  // namespace fastcharge::verify
