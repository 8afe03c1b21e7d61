#pragma once

#include <vector>

#include <Eigen/Dense>

#include "entisac/rng.hpp"

namespace entisac {

/// Multilayer perceptron: affine -> layer normalization -> leaky rectifier
/// (slope 0.01) per hidden layer, linear output. Parameters live in one flat
/// vector (per layer: row-major weights, biases, then the normalization gain
/// and shift for hidden layers), which is also the checkpoint order.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int param_count() const { return static_cast<int>(params_.size()); }
  const Eigen::VectorXd& params() const { return params_; }
  Eigen::VectorXd& params() { return params_; }

  void init_weights(RandomStream& rng);

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  /// Per-layer forward caches consumed by backward().
  struct Trace {
    std::vector<Eigen::VectorXd> inputs;    ///< input to each affine layer
    std::vector<Eigen::VectorXd> normed;    ///< standardized pre-activation
    std::vector<Eigen::VectorXd> pre_act;   ///< after gain/shift
    std::vector<double> inv_std;            ///< 1/sqrt(var + eps)
    Eigen::VectorXd output;
  };
  Eigen::VectorXd forward(const Eigen::VectorXd& input, Trace& trace) const;

  /// Accumulates d(loss)/d(params) into `grad` (same layout as params())
  /// given d(loss)/d(output); returns d(loss)/d(input).
  Eigen::VectorXd backward(const Trace& trace, const Eigen::VectorXd& d_output,
                           Eigen::VectorXd& grad) const;

 private:
  struct Offsets {
    int w = 0, b = 0, gamma = -1, beta = -1;
  };
  int num_affine() const { return static_cast<int>(sizes_.size()) - 1; }
  bool is_hidden(int layer) const { return layer < num_affine() - 1; }

  std::vector<int> sizes_;
  std::vector<Offsets> offsets_;
  Eigen::VectorXd params_;

  static constexpr double kLeakSlope = 0.01;
  static constexpr double kNormEps = 1e-5;
};

/// Adaptive moment-estimation gradient descent on a flat parameter vector.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(int n, double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  double learning_rate() const { return lr_; }

 private:
  Eigen::VectorXd m_, v_;
  double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

}  // namespace entisac
