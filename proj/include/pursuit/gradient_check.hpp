#ifndef PURSUIT_GRADIENT_CHECK_HPP
#define PURSUIT_GRADIENT_CHECK_HPP

// Central finite-difference checks for the hand-written backward passes.
// Finite differences only call nn::predict, never nn::backward. Entries whose
// +-h perturbation flips a ReLU are skipped: the derivative is undefined there.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "pursuit/ddpg.hpp"
#include "pursuit/neural.hpp"

namespace pursuit::gradcheck {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Options {
  double step = 1e-5;
  /// Denominator floor of the relative error.
  double floor = 1e-6;
  int probes = 100;
  /// Parameter entries finite-differenced per probe (input entries are all checked).
  int entries_per_probe = 48;
  /// Multiplies every analytic gradient; 1.0 except in negative-control fixtures.
  double analytic_scale = 1.0;
};

struct Result {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;

  bool passed(double tolerance) const { return checked > 0 && max_relative_error < tolerance; }

  void merge(const Result& o) {
    max_relative_error = std::max(max_relative_error, o.max_relative_error);
    checked += o.checked;
    skipped_kinks += o.skipped_kinks;
  }
};

inline double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

namespace detail {

/// Sign pattern of every hidden pre-activation, for kink detection.
inline std::vector<bool> relu_pattern(const nn::MlpParams& params, const MatrixXd& input) {
  std::vector<bool> mask;
  MatrixXd a = input;
  for (std::size_t l = 0; l + 1 < params.layers.size(); ++l) {
    MatrixXd z = params.layers[l].weight * a;
    z.colwise() += params.layers[l].bias;
    for (Eigen::Index i = 0; i < z.size(); ++i) mask.push_back(z.data()[i] > 0.0);
    a = nn::detail::activate(params.hidden, z);
  }
  return mask;
}

struct EntryRef {
  std::size_t layer;
  bool bias;
  Eigen::Index index;
};

inline double& entry(nn::MlpParams& p, const EntryRef& e) {
  auto& l = p.layers[e.layer];
  return e.bias ? l.bias.data()[e.index] : l.weight.data()[e.index];
}

inline double entry(const nn::GradientBundle& g, const EntryRef& e) {
  const auto& l = g.layers[e.layer];
  return e.bias ? l.bias.data()[e.index] : l.weight.data()[e.index];
}

template <class Rng>
std::vector<EntryRef> pick_entries(const nn::MlpParams& p, int count, Rng& rng) {
  std::vector<EntryRef> all;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < p.layers[l].weight.size(); ++i) all.push_back({l, false, i});
    for (Eigen::Index i = 0; i < p.layers[l].bias.size(); ++i) all.push_back({l, true, i});
  }
  if (static_cast<std::size_t>(count) >= all.size()) return all;
  // One weight and one bias from every layer, the rest uniformly.
  std::vector<EntryRef> out;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    std::uniform_int_distribution<Eigen::Index> w(0, p.layers[l].weight.size() - 1);
    std::uniform_int_distribution<Eigen::Index> b(0, p.layers[l].bias.size() - 1);
    out.push_back({l, false, w(rng)});
    out.push_back({l, true, b(rng)});
  }
  std::uniform_int_distribution<std::size_t> any(0, all.size() - 1);
  while (out.size() < static_cast<std::size_t>(count)) out.push_back(all[any(rng)]);
  return out;
}

}  // namespace detail

/// Checks backward() of one network on random probes. Each probe draws fresh
/// parameters, a random input and a random output gradient; the scalar under
/// test is <predict(x), g>.
template <class Rng>
Result check_mlp(std::span<const int> layer_sizes, nn::Activation output, const Options& opt, Rng& rng) {
  Result res;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int probe = 0; probe < opt.probes; ++probe) {
    nn::MlpParams params = nn::mlp_init(layer_sizes, rng, nn::Activation::Relu, output);
    // Non-zero biases so bias gradients are exercised away from the init point.
    for (auto& l : params.layers) {
      for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = 0.1 * normal(rng);
    }
    VectorXd x(layer_sizes.front());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    VectorXd g(layer_sizes.back());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(rng);

    auto [y, cache] = nn::forward(params, x);
    auto [grads, gin] = nn::backward(params, cache, g);

    auto scalar = [&](const nn::MlpParams& p, const VectorXd& in) {
      return nn::predict(p, MatrixXd(in)).col(0).dot(g);
    };
    const auto base_mask = detail::relu_pattern(params, MatrixXd(x));

    for (const auto& e : detail::pick_entries(params, opt.entries_per_probe, rng)) {
      nn::MlpParams p = params;
      double& w = detail::entry(p, e);
      const double w0 = w;
      w = w0 + opt.step;
      const bool kink_plus = detail::relu_pattern(p, MatrixXd(x)) != base_mask;
      const double fp = scalar(p, x);
      w = w0 - opt.step;
      const bool kink_minus = detail::relu_pattern(p, MatrixXd(x)) != base_mask;
      const double fm = scalar(p, x);
      if (kink_plus || kink_minus) {
        ++res.skipped_kinks;
        continue;
      }
      const double numeric = (fp - fm) / (2.0 * opt.step);
      const double analytic = opt.analytic_scale * detail::entry(grads, e);
      res.max_relative_error = std::max(res.max_relative_error, relative_error(analytic, numeric, opt.floor));
      ++res.checked;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      VectorXd xp = x, xm = x;
      xp[i] += opt.step;
      xm[i] -= opt.step;
      if (detail::relu_pattern(params, MatrixXd(xp)) != base_mask ||
          detail::relu_pattern(params, MatrixXd(xm)) != base_mask) {
        ++res.skipped_kinks;
        continue;
      }
      const double numeric = (scalar(params, xp) - scalar(params, xm)) / (2.0 * opt.step);
      res.max_relative_error =
          std::max(res.max_relative_error, relative_error(opt.analytic_scale * gin[i], numeric, opt.floor));
      ++res.checked;
    }
  }
  return res;
}

/// d/du of (u/|u|) . g against finite differences, away from |u| < 1e-6.
template <class Rng>
Result check_normalization_head(const Options& opt, Rng& rng) {
  Result res;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int probe = 0; probe < opt.probes; ++probe) {
    Eigen::Vector2d u(normal(rng), normal(rng));
    if (u.norm() < 1e-6) continue;
    Eigen::Vector2d g(normal(rng), normal(rng));
    const Eigen::Vector2d analytic = normalize_actions_backward(MatrixXd(u), MatrixXd(g)).col(0);
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d up = u, um = u;
      up[i] += opt.step;
      um[i] -= opt.step;
      const double numeric = (normalize_action(up).dot(g) - normalize_action(um).dot(g)) / (2.0 * opt.step);
      res.max_relative_error =
          std::max(res.max_relative_error, relative_error(opt.analytic_scale * analytic[i], numeric, opt.floor));
      ++res.checked;
    }
  }
  return res;
}

/// Full policy-gradient chain: d/dphi of mean_s Q(s, mu(s)/|mu(s)|) through a
/// learner's actor and critic, on small random batches of observations.
template <class Rng>
Result check_actor_chain(int obs_dim, const DdpgConfig& config, const Options& opt, Rng& rng) {
  Result res;
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kBatch = 4;
  for (int probe = 0; probe < opt.probes; ++probe) {
    AgentLearner learner(obs_dim, config, rng);
    for (auto* net : {&learner.actor(), &learner.critic()}) {
      for (auto& l : net->layers) {
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = 0.1 * normal(rng);
      }
    }
    MatrixXd obs(obs_dim, kBatch);
    for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = normal(rng);

    // actor_gradient returns the gradient of -mean Q.
    const nn::GradientBundle grads = learner.actor_gradient(obs).first;

    auto mean_q = [&](const nn::MlpParams& actor) {
      const MatrixXd a = normalize_actions(nn::predict(actor, obs));
      return nn::predict(learner.critic(), AgentLearner::stack(obs, a)).sum() / kBatch;
    };
    auto pattern = [&](const nn::MlpParams& actor) {
      auto m = detail::relu_pattern(actor, obs);
      const MatrixXd a = normalize_actions(nn::predict(actor, obs));
      const auto c = detail::relu_pattern(learner.critic(), AgentLearner::stack(obs, a));
      m.insert(m.end(), c.begin(), c.end());
      return m;
    };
    const nn::MlpParams actor0 = learner.actor();
    const auto base_mask = pattern(actor0);

    for (const auto& e : detail::pick_entries(actor0, opt.entries_per_probe, rng)) {
      nn::MlpParams p = actor0;
      double& w = detail::entry(p, e);
      const double w0 = w;
      w = w0 + opt.step;
      const bool kink_plus = pattern(p) != base_mask;
      const double fp = mean_q(p);
      w = w0 - opt.step;
      const bool kink_minus = pattern(p) != base_mask;
      const double fm = mean_q(p);
      if (kink_plus || kink_minus) {
        ++res.skipped_kinks;
        continue;
      }
      const double numeric = (fp - fm) / (2.0 * opt.step);
      const double analytic = -opt.analytic_scale * detail::entry(grads, e);
      res.max_relative_error = std::max(res.max_relative_error, relative_error(analytic, numeric, opt.floor));
      ++res.checked;
    }
  }
  return res;
}

}  // namespace pursuit::gradcheck

#endif  // PURSUIT_GRADIENT_CHECK_HPP
