#ifndef PURSUIT_NEURAL_HPP
#define PURSUIT_NEURAL_HPP

// Dense multilayer perceptrons with hand-written reverse mode, plus the
// optimizer utilities used by the DDPG learners. Batches are column-major:
// one sample per column.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit::nn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Activation { Identity, Relu, Tanh };

struct Dense {
  MatrixXd weight;  // out x in
  VectorXd bias;    // out

  Eigen::Index in() const noexcept { return weight.cols(); }
  Eigen::Index out() const noexcept { return weight.rows(); }
};

struct MlpParams {
  std::vector<Dense> layers;
  Activation hidden = Activation::Relu;
  Activation output = Activation::Identity;

  Eigen::Index input_size() const { return layers.front().in(); }
  Eigen::Index output_size() const { return layers.back().out(); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
  }

  std::vector<int> layer_sizes() const {
    std::vector<int> sizes{static_cast<int>(input_size())};
    for (const auto& l : layers) sizes.push_back(static_cast<int>(l.out()));
    return sizes;
  }
};

/// Partial derivatives laid out exactly like MlpParams::layers.
struct GradientBundle {
  std::vector<Dense> layers;

  double squared_norm() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
    return s;
  }
  double global_norm() const { return std::sqrt(squared_norm()); }

  bool all_finite() const {
    for (const auto& l : layers) {
      if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
  }
};

namespace detail {

inline void require_congruent(const std::vector<Dense>& a, const std::vector<Dense>& b, const char* what) {
  if (a.size() != b.size()) throw ShapeMismatch(std::string(what) + ": layer count differs");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].weight.rows() != b[i].weight.rows() || a[i].weight.cols() != b[i].weight.cols() ||
        a[i].bias.size() != b[i].bias.size()) {
      throw ShapeMismatch(std::string(what) + ": layer " + std::to_string(i) + " shape differs");
    }
  }
}

inline std::vector<Dense> zeros_like(const std::vector<Dense>& layers) {
  std::vector<Dense> out;
  out.reserve(layers.size());
  for (const auto& l : layers) {
    out.push_back({MatrixXd::Zero(l.weight.rows(), l.weight.cols()), VectorXd::Zero(l.bias.size())});
  }
  return out;
}

inline MatrixXd activate(Activation act, const MatrixXd& z) {
  switch (act) {
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Identity: break;
  }
  return z;
}

/// dL/dz given dL/da and the pre-activation z.
inline MatrixXd activate_backward(Activation act, const MatrixXd& z, const MatrixXd& grad) {
  switch (act) {
    case Activation::Relu: return (z.array() > 0.0).select(grad, 0.0);
    case Activation::Tanh: return (grad.array() * (1.0 - z.array().tanh().square())).matrix();
    case Activation::Identity: break;
  }
  return grad;
}

}  // namespace detail

inline GradientBundle zero_gradients(const MlpParams& params) {
  return {detail::zeros_like(params.layers)};
}

/// Weights uniform on +-1/sqrt(fan_in), biases zero.
template <class Rng>
MlpParams mlp_init(std::span<const int> layer_sizes, Rng& rng,
                   Activation hidden = Activation::Relu,
                   Activation output = Activation::Identity) {
  if (layer_sizes.size() < 2) throw InvalidArgument("mlp_init: need at least two layer sizes");
  for (int s : layer_sizes) {
    if (s <= 0) throw InvalidArgument("mlp_init: layer sizes must be positive");
  }
  MlpParams params;
  params.hidden = hidden;
  params.output = output;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const int in = layer_sizes[i];
    const int out = layer_sizes[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Dense layer{MatrixXd(out, in), VectorXd::Zero(out)};
    // Column-major fill order is part of the seeded determinism contract.
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = u(rng);
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

template <class Rng>
MlpParams mlp_init(std::initializer_list<int> layer_sizes, Rng& rng,
                   Activation hidden = Activation::Relu,
                   Activation output = Activation::Identity) {
  const std::vector<int> sizes(layer_sizes);
  return mlp_init(std::span<const int>(sizes), rng, hidden, output);
}

/// Everything backward() needs from a forward pass.
struct ForwardCache {
  std::vector<MatrixXd> inputs;  // input to layer l
  std::vector<MatrixXd> pre;     // pre-activation of layer l
};

inline std::pair<MatrixXd, ForwardCache> forward_batch(const MlpParams& params, const MatrixXd& input) {
  if (params.layers.empty()) throw InvalidArgument("forward: empty network");
  if (input.rows() != params.input_size()) throw ShapeMismatch("forward: input size does not match first layer");
  ForwardCache cache;
  cache.inputs.reserve(params.layers.size());
  cache.pre.reserve(params.layers.size());
  MatrixXd a = input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Dense& layer = params.layers[l];
    MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    const Activation act = (l + 1 == params.layers.size()) ? params.output : params.hidden;
    cache.inputs.push_back(std::move(a));
    a = detail::activate(act, z);
    cache.pre.push_back(std::move(z));
  }
  return {std::move(a), std::move(cache)};
}

inline std::pair<VectorXd, ForwardCache> forward(const MlpParams& params, const VectorXd& input) {
  auto [out, cache] = forward_batch(params, MatrixXd(input));
  return {VectorXd(out.col(0)), std::move(cache)};
}

/// Output only, no cache.
inline MatrixXd predict(const MlpParams& params, const MatrixXd& input) {
  if (input.rows() != params.input_size()) throw ShapeMismatch("predict: input size does not match first layer");
  MatrixXd a = input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Dense& layer = params.layers[l];
    MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    a = detail::activate(l + 1 == params.layers.size() ? params.output : params.hidden, z);
  }
  return a;
}

/// Reverse mode for sum over columns of <output, output_gradient>.
/// Returns parameter gradients and the gradient with respect to the input.
inline std::pair<GradientBundle, MatrixXd> backward(const MlpParams& params, const ForwardCache& cache,
                                                    const MatrixXd& output_gradient) {
  const std::size_t depth = params.layers.size();
  if (cache.inputs.size() != depth || cache.pre.size() != depth) {
    throw ShapeMismatch("backward: cache does not match network depth");
  }
  if (output_gradient.rows() != params.output_size() || output_gradient.cols() != cache.pre.back().cols()) {
    throw ShapeMismatch("backward: output gradient shape mismatch");
  }
  GradientBundle grads;
  grads.layers.resize(depth);
  MatrixXd g = output_gradient;
  for (std::size_t l = depth; l-- > 0;) {
    const Activation act = (l + 1 == depth) ? params.output : params.hidden;
    const MatrixXd dz = detail::activate_backward(act, cache.pre[l], g);
    grads.layers[l].weight = dz * cache.inputs[l].transpose();
    grads.layers[l].bias = dz.rowwise().sum();
    g = params.layers[l].weight.transpose() * dz;
  }
  return {std::move(grads), std::move(g)};
}

inline std::pair<GradientBundle, VectorXd> backward(const MlpParams& params, const ForwardCache& cache,
                                                    const VectorXd& output_gradient) {
  auto [grads, gin] = backward(params, cache, MatrixXd(output_gradient));
  return {std::move(grads), VectorXd(gin.col(0))};
}

/// Rescales so the norm over every entry is at most max_norm.
inline GradientBundle clip_global_norm(GradientBundle grads, double max_norm) {
  if (!(max_norm > 0.0)) throw InvalidArgument("clip_global_norm: max_norm must be > 0");
  const double norm = grads.global_norm();
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& l : grads.layers) {
      l.weight *= scale;
      l.bias *= scale;
    }
  }
  return grads;
}

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  GradientBundle first;
  GradientBundle second;
  long step = 0;
};

inline AdamState adam_init(const MlpParams& params) {
  return {zero_gradients(params), zero_gradients(params), 0};
}

/// Bias-corrected adaptive-moment descent step, in place.
inline void adam_step(MlpParams& params, const GradientBundle& grads, AdamState& state, double learning_rate,
                      const AdamConfig& cfg = {}) {
  detail::require_congruent(params.layers, grads.layers, "adam_step");
  detail::require_congruent(params.layers, state.first.layers, "adam_step");
  detail::require_congruent(params.layers, state.second.layers, "adam_step");
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    p.array() -= learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weight, grads.layers[l].weight, state.first.layers[l].weight,
           state.second.layers[l].weight);
    update(params.layers[l].bias, grads.layers[l].bias, state.first.layers[l].bias,
           state.second.layers[l].bias);
  }
}

/// target <- (1 - tau) target + tau online, in place.
inline void polyak_update(MlpParams& target, const MlpParams& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("polyak_update: tau must lie in [0, 1]");
  detail::require_congruent(target.layers, online.layers, "polyak_update");
  for (std::size_t l = 0; l < target.layers.size(); ++l) {
    target.layers[l].weight = (1.0 - tau) * target.layers[l].weight + tau * online.layers[l].weight;
    target.layers[l].bias = (1.0 - tau) * target.layers[l].bias + tau * online.layers[l].bias;
  }
}

inline MlpParams polyak_updated(MlpParams target, const MlpParams& online, double tau) {
  polyak_update(target, online, tau);
  return target;
}

inline bool all_finite(const MlpParams& params) {
  for (const auto& l : params.layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

}  // namespace pursuit::nn

#endif  // PURSUIT_NEURAL_HPP
