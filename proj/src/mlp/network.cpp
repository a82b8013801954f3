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

#include "fastcharge/mlp/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fastcharge::mlp {
namespace {

const char* activation_name(OutputActivation a) {
  return a == OutputActivation::Tanh ? "tanh" : "identity";
}

OutputActivation activation_from(const std::string& name) {
  if (name == "tanh") return OutputActivation::Tanh;
  if (name == "identity") return OutputActivation::Identity;
  throw std::invalid_argument("unknown output activation '" + name + "'");
}

}  // namespace

Network::Network(std::vector<int> layer_dims, OutputActivation output)
    : dims_(std::move(layer_dims)), output_(output) {
  if (dims_.size() < 2) throw std::invalid_argument("Network needs at least input and output dims");
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("Network layer dims must be >= 1");
  }
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(dims_[l + 1]));
  }
}

Network Network::random(std::vector<int> layer_dims, OutputActivation output, Rng& rng,
                        double final_layer_scale) {
  Network net(std::move(layer_dims), output);
  for (std::size_t l = 0; l < net.weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
    const double scale = l + 1 == net.weights_.size() ? final_layer_scale : 1.0;
    auto& w = net.weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * rng.uniform(-bound, bound);
    }
    for (Eigen::Index r = 0; r < net.biases_[l].size(); ++r) {
      net.biases_[l](r) = scale * rng.uniform(-bound, bound);
    }
  }
  return net;
}

void Network::check_input(Eigen::Index rows) const {
  if (dims_.empty() || rows != dims_.front()) {
    throw std::invalid_argument("Network: input has " + std::to_string(rows) + " rows, expected " +
                                std::to_string(dims_.empty() ? 0 : dims_.front()));
  }
}

Eigen::VectorXd Network::forward(const Eigen::VectorXd& x) const {
  return forward_batch(Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& x) const {
  check_input(x.rows());
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    if (l + 1 < weights_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      a = output_ == OutputActivation::Tanh ? Eigen::MatrixXd(z.array().tanh()) : z;
    }
  }
  return a;
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& x, Trace& trace) const {
  check_input(x.rows());
  trace.activations.assign(1, x);
  trace.pre_activations.clear();
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * trace.activations.back();
    z.colwise() += biases_[l];
    trace.pre_activations.push_back(z);
    if (l + 1 < weights_.size()) {
      trace.activations.push_back(z.cwiseMax(0.0));
    } else {
      trace.activations.push_back(output_ == OutputActivation::Tanh ? Eigen::MatrixXd(z.array().tanh())
                                                                    : z);
    }
  }
  return trace.activations.back();
}

ParameterGradients Network::backward(const Trace& trace, const Eigen::MatrixXd& upstream) const {
  const std::size_t layers = weights_.size();
  if (trace.activations.size() != layers + 1) {
    throw std::invalid_argument("Network::backward: trace does not match this network");
  }
  if (upstream.rows() != dims_.back() || upstream.cols() != trace.activations.back().cols()) {
    throw std::invalid_argument("Network::backward: upstream gradient has the wrong shape");
  }
  Eigen::MatrixXd delta = upstream;
  if (output_ == OutputActivation::Tanh) {
    delta.array() *= 1.0 - trace.activations.back().array().square();
  }
  return backward_from_logits(trace, std::move(delta));
}

ParameterGradients Network::backward_from_logits(const Trace& trace, Eigen::MatrixXd delta) const {
  const std::size_t layers = weights_.size();
  if (trace.activations.size() != layers + 1 || trace.pre_activations.size() != layers) {
    throw std::invalid_argument("Network::backward: trace does not match this network");
  }
  if (delta.rows() != dims_.back() || delta.cols() != trace.activations.back().cols()) {
    throw std::invalid_argument("Network::backward: upstream gradient has the wrong shape");
  }
  ParameterGradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);

  // delta = dL/dz for the current layer.
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * trace.activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    Eigen::MatrixXd back = weights_[l].transpose() * delta;
    if (l > 0) {
      back.array() *= (trace.pre_activations[l - 1].array() > 0.0).cast<double>();
      delta = std::move(back);
    } else {
      g.input = std::move(back);
    }
  }
  return g;
}

ParameterGradients Network::backward(const Eigen::VectorXd& x, const Eigen::VectorXd& upstream) const {
  Trace trace;
  forward_batch(Eigen::MatrixXd(x), trace);
  return backward(trace, Eigen::MatrixXd(upstream));
}

ParameterGradients Network::zero_gradients() const {
  ParameterGradients g;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
  }
  return g;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

std::vector<double> Network::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out.push_back(w(r, c));
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) out.push_back(biases_[l](r));
  }
  return out;
}

void Network::set_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw std::invalid_argument("Network::set_flat_parameters: expected " +
                                std::to_string(parameter_count()) + " values, got " +
                                std::to_string(values.size()));
  }
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = values[k++];
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) biases_[l](r) = values[k++];
  }
}

void Network::soft_update_from(const Network& online, double tau) {
  if (online.dims_ != dims_) throw std::invalid_argument("soft_update_from: shape mismatch");
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] = (1.0 - tau) * weights_[l] + tau * online.weights_[l];
    biases_[l] = (1.0 - tau) * biases_[l] + tau * online.biases_[l];
  }
}

bool Network::operator==(const Network& other) const {
  return dims_ == other.dims_ && output_ == other.output_ &&
         flat_parameters() == other.flat_parameters();
}

nlohmann::json Network::to_json() const {
  return {{"layer_dims", dims_},
          {"output_activation", activation_name(output_)},
          {"parameters", flat_parameters()}};
}

Network Network::from_json(const nlohmann::json& j) {
  Network net(j.at("layer_dims").get<std::vector<int>>(),
              activation_from(j.at("output_activation").get<std::string>()));
  net.set_flat_parameters(j.at("parameters").get<std::vector<double>>());
  return net;
}

}  // namespace fastcharge::mlp
