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

#include "fastcharge/verify/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace fastcharge::verify {
namespace {

struct Probe {
  double loss;
  std::vector<Eigen::ArrayXX<bool>> masks;
};

Probe probe(const mlp::Network& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& upstream) {
  mlp::Network::Trace trace;
  const Eigen::MatrixXd out = net.forward_batch(x, trace);
  Probe p{(out.array() * upstream.array()).sum(), {}};
  for (std::size_t l = 0; l + 1 < trace.pre_activations.size(); ++l) {
    p.masks.emplace_back(trace.pre_activations[l].array() > 0.0);
  }
  return p;
}

bool same_masks(const Probe& a, const Probe& b) {
  for (std::size_t l = 0; l < a.masks.size(); ++l) {
    if ((a.masks[l] != b.masks[l]).any()) return false;
  }
  return true;
}

void compare(GradientReport& report, double analytic, const Probe& base, const Probe& plus, const Probe& minus,
             double h) {
  if (!same_masks(base, plus) || !same_masks(base, minus)) {
    ++report.skipped;
    return;
  }
  const double numeric = (plus.loss - minus.loss) / (2.0 * h);
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  report.max_relative_error = std::max(report.max_relative_error, std::abs(analytic - numeric) / scale);
  ++report.checked;
}

}  // namespace

GradientReport gradient_check(const mlp::Network& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& upstream,
                              double h) {
  GradientReport report;
  mlp::Network::Trace trace;
  net.forward_batch(x, trace);
  const auto grads = net.backward(trace, upstream);
  const Probe base = probe(net, x, upstream);

  mlp::Network work = net;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    auto& w = work.weight(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        const double keep = w(r, c);
        w(r, c) = keep + h;
        const Probe plus = probe(work, x, upstream);
        w(r, c) = keep - h;
        const Probe minus = probe(work, x, upstream);
        w(r, c) = keep;
        compare(report, grads.weights[l](r, c), base, plus, minus, h);
      }
    }
    auto& b = work.bias(l);
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      const double keep = b(r);
      b(r) = keep + h;
      const Probe plus = probe(work, x, upstream);
      b(r) = keep - h;
      const Probe minus = probe(work, x, upstream);
      b(r) = keep;
      compare(report, grads.biases[l](r), base, plus, minus, h);
    }
  }
  Eigen::MatrixXd xp = x;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      xp(r, c) = x(r, c) + h;
      const Probe plus = probe(net, xp, upstream);
      xp(r, c) = x(r, c) - h;
      const Probe minus = probe(net, xp, upstream);
      xp(r, c) = x(r, c);
      compare(report, grads.input(r, c), base, plus, minus, h);
    }
  }
  return report;
}

GradientReport gradient_check_shape(const std::vector<int>& dims, mlp::OutputActivation output,
                                    std::uint64_t seed, int batch) {
  Rng rng(seed);
  const auto net = mlp::Network::random(dims, output, rng);
  Eigen::MatrixXd x(dims.front(), batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform();
  Eigen::MatrixXd upstream(dims.back(), batch);
  for (Eigen::Index i = 0; i < upstream.size(); ++i) upstream(i) = rng.normal();
  return gradient_check(net, x, upstream);
}

}  // namespace fastcharge::verify
