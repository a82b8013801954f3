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

#include "fastcharge/mlp/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace fastcharge::mlp {
namespace {

std::vector<double> flatten(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  Eigen::Map<Eigen::MatrixXd>(out.data(), m.rows(), m.cols()) = m;
  return out;
}

Eigen::MatrixXd unflatten(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("AdamState: moment size mismatch");
  }
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", flatten(m)}};
}

}  // namespace

AdamState AdamState::for_network(const Network& net, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  const auto zero = net.zero_gradients();
  s.m_weights = zero.weights;
  s.v_weights = zero.weights;
  s.m_biases = zero.biases;
  s.v_biases = zero.biases;
  return s;
}

void adam_step(Network& net, const ParameterGradients& grads, AdamState& opt) {
  const std::size_t layers = net.layer_count();
  if (grads.weights.size() != layers || grads.biases.size() != layers ||
      opt.m_weights.size() != layers) {
    throw std::invalid_argument("adam_step: layer count mismatch");
  }
  ++opt.step;
  const double t = static_cast<double>(opt.step);
  const double correction1 = 1.0 - std::pow(opt.beta1, t);
  const double correction2 = 1.0 - std::pow(opt.beta2, t);
  const double step_size = opt.learning_rate / correction1;

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    if (g.rows() != param.rows() || g.cols() != param.cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    m = opt.beta1 * m + (1.0 - opt.beta1) * g;
    v = opt.beta2 * v + (1.0 - opt.beta2) * g.cwiseProduct(g);
    param.array() -= step_size * m.array() / ((v.array() / correction2).sqrt() + opt.epsilon);
  };
  for (std::size_t l = 0; l < layers; ++l) {
    update(net.weight(l), grads.weights[l], opt.m_weights[l], opt.v_weights[l]);
    update(net.bias(l), grads.biases[l], opt.m_biases[l], opt.v_biases[l]);
  }
}

nlohmann::json AdamState::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < m_weights.size(); ++l) {
    layers.push_back({{"m_w", matrix_json(m_weights[l])},
                      {"v_w", matrix_json(v_weights[l])},
                      {"m_b", matrix_json(m_biases[l])},
                      {"v_b", matrix_json(v_biases[l])}});
  }
  return {{"step", step},   {"learning_rate", learning_rate}, {"beta1", beta1},
          {"beta2", beta2}, {"epsilon", epsilon},             {"layers", layers}};
}

AdamState AdamState::from_json(const nlohmann::json& j) {
  AdamState s;
  s.step = j.at("step").get<std::int64_t>();
  s.learning_rate = j.at("learning_rate").get<double>();
  s.beta1 = j.at("beta1").get<double>();
  s.beta2 = j.at("beta2").get<double>();
  s.epsilon = j.at("epsilon").get<double>();
  for (const auto& layer : j.at("layers")) {
    s.m_weights.push_back(unflatten(layer.at("m_w")));
    s.v_weights.push_back(unflatten(layer.at("v_w")));
    s.m_biases.push_back(unflatten(layer.at("m_b")));
    s.v_biases.push_back(unflatten(layer.at("v_b")));
  }
  return s;
}

}  // namespace fastcharge::mlp
