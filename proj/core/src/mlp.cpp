#include "entisac/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace entisac {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least [in, out] sizes");
  int total = 0;
  offsets_.resize(num_affine());
  for (int li = 0; li < num_affine(); ++li) {
    const int in = sizes_[li];
    const int out = sizes_[li + 1];
    offsets_[li].w = total;
    total += in * out;
    offsets_[li].b = total;
    total += out;
    if (is_hidden(li)) {
      offsets_[li].gamma = total;
      total += out;
      offsets_[li].beta = total;
      total += out;
    }
  }
  params_ = Eigen::VectorXd::Zero(total);
  for (int li = 0; li < num_affine(); ++li) {
    if (is_hidden(li)) {
      params_.segment(offsets_[li].gamma, sizes_[li + 1]).setOnes();
    }
  }
}

void Mlp::init_weights(RandomStream& rng) {
  for (int li = 0; li < num_affine(); ++li) {
    const int in = sizes_[li];
    const int out = sizes_[li + 1];
    const double bound = std::sqrt(6.0 / (in + out));
    for (int i = 0; i < in * out; ++i) {
      params_[offsets_[li].w + i] = rng.uniform(-bound, bound);
    }
    params_.segment(offsets_[li].b, out).setZero();
    if (is_hidden(li)) {
      params_.segment(offsets_[li].gamma, out).setOnes();
      params_.segment(offsets_[li].beta, out).setZero();
    }
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  Trace scratch;
  return forward(input, scratch);
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input, Trace& trace) const {
  if (input.size() != sizes_.front()) {
    throw std::invalid_argument("Mlp::forward: input length " + std::to_string(input.size()) +
                                ", expected " + std::to_string(sizes_.front()));
  }
  const int layers = num_affine();
  trace.inputs.assign(layers, {});
  trace.normed.assign(layers, {});
  trace.pre_act.assign(layers, {});
  trace.inv_std.assign(layers, 0.0);

  Eigen::VectorXd x = input;
  for (int li = 0; li < layers; ++li) {
    const int in = sizes_[li];
    const int out = sizes_[li + 1];
    trace.inputs[li] = x;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        w(params_.data() + offsets_[li].w, out, in);
    Eigen::VectorXd z = w * x + params_.segment(offsets_[li].b, out);
    if (!is_hidden(li)) {
      x = std::move(z);
      continue;
    }
    const double mu = z.mean();
    const double var = (z.array() - mu).square().sum() / out;
    const double inv_std = 1.0 / std::sqrt(var + kNormEps);
    trace.inv_std[li] = inv_std;
    Eigen::VectorXd zhat = (z.array() - mu).matrix() * inv_std;
    trace.normed[li] = zhat;
    Eigen::VectorXd y = params_.segment(offsets_[li].gamma, out).cwiseProduct(zhat) +
                        params_.segment(offsets_[li].beta, out);
    trace.pre_act[li] = y;
    x = y.unaryExpr([](double v) { return v > 0.0 ? v : kLeakSlope * v; });
  }
  trace.output = x;
  return x;
}

Eigen::VectorXd Mlp::backward(const Trace& trace, const Eigen::VectorXd& d_output,
                              Eigen::VectorXd& grad) const {
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("Mlp::backward: gradient buffer size mismatch");
  }
  const int layers = num_affine();
  Eigen::VectorXd dx = d_output;
  for (int li = layers - 1; li >= 0; --li) {
    const int in = sizes_[li];
    const int out = sizes_[li + 1];
    Eigen::VectorXd dz;
    if (!is_hidden(li)) {
      dz = dx;
    } else {
      // Activation, then gain/shift, then normalization.
      Eigen::VectorXd dy = dx;
      for (int i = 0; i < out; ++i) {
        if (trace.pre_act[li][i] <= 0.0) dy[i] *= kLeakSlope;
      }
      grad.segment(offsets_[li].gamma, out) += dy.cwiseProduct(trace.normed[li]);
      grad.segment(offsets_[li].beta, out) += dy;
      Eigen::VectorXd dzhat = dy.cwiseProduct(params_.segment(offsets_[li].gamma, out));
      const double mean_dzhat = dzhat.mean();
      const double mean_cross = dzhat.cwiseProduct(trace.normed[li]).mean();
      dz = trace.inv_std[li] *
           (dzhat.array() - mean_dzhat - trace.normed[li].array() * mean_cross).matrix();
    }
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dw(
        grad.data() + offsets_[li].w, out, in);
    dw.noalias() += dz * trace.inputs[li].transpose();
    grad.segment(offsets_[li].b, out) += dz;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        w(params_.data() + offsets_[li].w, out, in);
    dx = w.transpose() * dz;
  }
  return dx;
}

AdamOptimizer::AdamOptimizer(int n, double lr, double beta1, double beta2, double eps)
    : m_(Eigen::VectorXd::Zero(n)),
      v_(Eigen::VectorXd::Zero(n)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void AdamOptimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params -= (lr_ / bc1) * m_.cwiseQuotient(((v_ / bc2).cwiseSqrt().array() + eps_).matrix());
}

}  // namespace entisac
