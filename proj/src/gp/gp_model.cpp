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

#include "fastcharge/gp/gp_model.hpp"

#include <cmath>
#include <numbers>

#include "detail.hpp"

namespace fastcharge::gp {

Standardization Standardization::from_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Standardization s;
  const double n = static_cast<double>(x.rows());
  s.input_mean = x.colwise().mean().transpose();
  s.input_std.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double sd = std::sqrt((x.col(c).array() - s.input_mean(c)).square().sum() / n);
    s.input_std(c) = sd > 1e-12 ? sd : 1.0;
  }
  s.target_mean = y.mean();
  const double sd = std::sqrt((y.array() - s.target_mean).square().sum() / n);
  s.target_std = sd > 1e-12 ? sd : 1.0;
  return s;
}

Eigen::MatrixXd Standardization::inputs(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - input_mean.transpose()).array().rowwise() / input_std.transpose().array();
}

Eigen::VectorXd Standardization::targets(const Eigen::VectorXd& y) const {
  return (y.array() - target_mean) / target_std;
}

namespace detail {

bool factorize_with_jitter(const Eigen::MatrixXd& signal, double noise_var, Eigen::MatrixXd& chol,
                           double& jitter) {
  jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd k = signal;
    k.diagonal().array() += noise_var + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      chol = llt.matrixL();
      return true;
    }
    if (jitter >= kJitterMax) return false;
    jitter = jitter == 0.0 ? kJitterStart : jitter * 10.0;
  }
}

}  // namespace detail

LmlValue lml_with_gradient(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const KernelParams& k) {
  const Eigen::Index n = xs.rows();
  const Eigen::MatrixXd d2 = squared_distances(xs, xs);
  const Eigen::MatrixXd signal =
      k.signal_var * (d2.array() * (-1.0 / (2.0 * k.length_scale * k.length_scale))).exp().matrix();
  Eigen::MatrixXd chol;
  double jitter = 0.0;
  if (!detail::factorize_with_jitter(signal, k.noise_var, chol, jitter)) {
    throw GpError("kernel matrix not PD");
  }
  const auto lower = chol.triangularView<Eigen::Lower>();
  const auto upper = chol.transpose().triangularView<Eigen::Upper>();
  const Eigen::VectorXd alpha = upper.solve(lower.solve(ys));
  Eigen::MatrixXd inv = lower.solve(Eigen::MatrixXd::Identity(n, n));
  inv = upper.solve(inv);

  LmlValue out;
  out.value = -0.5 * ys.dot(alpha) - chol.diagonal().array().log().sum() -
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  // d lml / d theta = 1/2 tr((alpha alpha' - K^-1) dK/dtheta)
  const Eigen::MatrixXd a = alpha * alpha.transpose() - inv;
  const double l2 = k.length_scale * k.length_scale;
  out.gradient(0) = 0.5 * (a.array() * signal.array()).sum();
  out.gradient(1) = 0.5 * (a.array() * signal.array() * d2.array() / l2).sum();
  return out;
}

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& kernel,
                     const FitOptions& options) {
  if (x.rows() < 1) throw GpError("GP fit needs at least one point");
  if (x.rows() != y.size()) throw GpError("GP fit: input and target counts differ");
  if (!(kernel.signal_var > 0 && kernel.length_scale > 0 && kernel.noise_var > 0)) {
    throw GpError("GP fit: kernel parameters must be positive");
  }
  GpModel m;
  m.x_ = x;
  m.y_ = y;
  m.stats_ = Standardization::from_data(x, y);
  m.xs_ = m.stats_.inputs(x);
  m.ys_ = m.stats_.targets(y);
  m.kernel_ = kernel;
  if (options.optimize) {
    m.kernel_ = detail::optimize_hyperparameters(m.xs_, m.ys_, kernel, options, m.report_);
  }
  m.factorize();
  return m;
}

void GpModel::factorize() {
  const Eigen::MatrixXd signal = kernel_matrix(xs_, xs_, kernel_);
  if (!detail::factorize_with_jitter(signal, kernel_.noise_var, chol_, report_.jitter)) {
    throw GpError("kernel matrix not PD");
  }
  alpha_ = chol_.transpose().triangularView<Eigen::Upper>().solve(chol_.triangularView<Eigen::Lower>().solve(ys_));
}

Posterior GpModel::posterior(const Eigen::VectorXd& xq) const {
  Eigen::VectorXd mean, var;
  posterior_batch(xq.transpose(), mean, var);
  return {mean(0), var(0)};
}

void GpModel::posterior_batch(const Eigen::MatrixXd& xq, Eigen::VectorXd& mean,
                              Eigen::VectorXd& var) const {
  if (xq.cols() != x_.cols()) throw GpError("GP posterior: query dimension mismatch");
  const Eigen::MatrixXd cross = kernel_matrix(xs_, stats_.inputs(xq), kernel_);  // n x m
  mean = cross.transpose() * alpha_;
  Eigen::MatrixXd v = cross;
  chol_.triangularView<Eigen::Lower>().solveInPlace(v);
  var = (kernel_.signal_var - v.colwise().squaredNorm().array()).matrix().transpose();
  const double scale = stats_.target_std;
  for (Eigen::Index i = 0; i < var.size(); ++i) {
    if (var(i) < 0.0) {
      var(i) = 0.0;
      clamped_->fetch_add(1, std::memory_order_relaxed);
    }
  }
  mean = (mean.array() * scale + stats_.target_mean).matrix();
  var *= scale * scale;
}

double GpModel::prior_variance() const {
  return kernel_.signal_var * stats_.target_std * stats_.target_std;
}

double GpModel::log_marginal_likelihood() const {
  return -0.5 * ys_.dot(alpha_) - chol_.diagonal().array().log().sum() -
         0.5 * static_cast<double>(ys_.size()) * std::log(2.0 * std::numbers::pi);
}

nlohmann::json GpModel::to_json() const {
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < x_.rows(); ++r) {
    auto& row = rows.emplace_back(static_cast<std::size_t>(x_.cols()));
    for (Eigen::Index c = 0; c < x_.cols(); ++c) row[static_cast<std::size_t>(c)] = x_(r, c);
  }
  const std::vector<double> targets(y_.data(), y_.data() + y_.size());
  const std::vector<double> in_mean(stats_.input_mean.data(), stats_.input_mean.data() + stats_.input_mean.size());
  const std::vector<double> in_std(stats_.input_std.data(), stats_.input_std.data() + stats_.input_std.size());
  return {{"inputs", rows},
          {"targets", targets},
          {"kernel",
           {{"signal_var", kernel_.signal_var},
            {"length_scale", kernel_.length_scale},
            {"noise_var", kernel_.noise_var}}},
          {"standardization",
           {{"input_mean", in_mean},
            {"input_std", in_std},
            {"target_mean", stats_.target_mean},
            {"target_std", stats_.target_std}}}};
}

GpModel GpModel::from_json(const nlohmann::json& j) {
  GpModel m;
  const auto rows = j.at("inputs").get<std::vector<std::vector<double>>>();
  const auto targets = j.at("targets").get<std::vector<double>>();
  if (rows.empty() || rows.size() != targets.size()) throw GpError("GP json: bad inputs/targets");
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  m.x_.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != d) throw GpError("GP json: ragged inputs");
    for (Eigen::Index c = 0; c < d; ++c) m.x_(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  }
  m.y_ = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  const auto& k = j.at("kernel");
  m.kernel_ = {k.at("signal_var").get<double>(), k.at("length_scale").get<double>(),
               k.at("noise_var").get<double>()};
  const auto& s = j.at("standardization");
  const auto in_mean = s.at("input_mean").get<std::vector<double>>();
  const auto in_std = s.at("input_std").get<std::vector<double>>();
  m.stats_.input_mean = Eigen::Map<const Eigen::VectorXd>(in_mean.data(), static_cast<Eigen::Index>(in_mean.size()));
  m.stats_.input_std = Eigen::Map<const Eigen::VectorXd>(in_std.data(), static_cast<Eigen::Index>(in_std.size()));
  m.stats_.target_mean = s.at("target_mean").get<double>();
  m.stats_.target_std = s.at("target_std").get<double>();
  m.xs_ = m.stats_.inputs(m.x_);
  m.ys_ = m.stats_.targets(m.y_);
  m.factorize();
  return m;
}

}  // namespace fastcharge::gp
