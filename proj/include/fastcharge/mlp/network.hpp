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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fastcharge/core/rng.hpp"

namespace fastcharge::mlp {

enum class OutputActivation { Identity, Tanh };

/// Gradients with the same shapes as a Network's parameters, plus the
/// gradient with respect to the input batch (one column per sample).
struct ParameterGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd input;
};

/// Dense feed-forward network, ReLU on hidden layers. Samples are columns.
class Network {
 public:
  /// Activations recorded by a forward pass for the backward pass.
  struct Trace {
    std::vector<Eigen::MatrixXd> activations;  // [input, hidden..., output]
    std::vector<Eigen::MatrixXd> pre_activations;
  };

  Network() = default;

  /// All-zero parameters.
  Network(std::vector<int> layer_dims, OutputActivation output);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init; the last layer is
  /// additionally scaled by `final_layer_scale`.
  static Network random(std::vector<int> layer_dims, OutputActivation output, Rng& rng,
                        double final_layer_scale = 1.0);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, Trace& trace) const;

  /// Gradients of sum_j upstream(:, j) . output(:, j), summed over the batch.
  ParameterGradients backward(const Trace& trace, const Eigen::MatrixXd& upstream) const;
  ParameterGradients backward(const Eigen::VectorXd& x, const Eigen::VectorXd& upstream) const;
  /// Same as backward() but `delta` is already dL/d(output pre-activation).
  ParameterGradients backward_from_logits(const Trace& trace, Eigen::MatrixXd delta) const;

  ParameterGradients zero_gradients() const;

  std::size_t layer_count() const { return weights_.size(); }
  const std::vector<int>& layer_dims() const { return dims_; }
  OutputActivation output_activation() const { return output_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }

  Eigen::MatrixXd& weight(std::size_t layer) { return weights_.at(layer); }
  const Eigen::MatrixXd& weight(std::size_t layer) const { return weights_.at(layer); }
  Eigen::VectorXd& bias(std::size_t layer) { return biases_.at(layer); }
  const Eigen::VectorXd& bias(std::size_t layer) const { return biases_.at(layer); }

  std::size_t parameter_count() const;
  /// Layer by layer: row-major weights, then biases.
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);

  /// this <- (1 - tau) * this + tau * online.
  void soft_update_from(const Network& online, double tau);

  bool operator==(const Network& other) const;

  nlohmann::json to_json() const;
  static Network from_json(const nlohmann::json& j);

 private:
  void check_input(Eigen::Index rows) const;

  std::vector<int> dims_;
  OutputActivation output_ = OutputActivation::Identity;
  std::vector<Eigen::MatrixXd> weights_;  // out x in
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace fastcharge::mlp
