#ifndef PURSUIT_DDPG_HPP
#define PURSUIT_DDPG_HPP

// Independent DDPG learner for one pursuer. Actions are unit 2-vectors
// (cos h, sin h): the actor emits a raw vector u and the policy is u/|u|.
// Nothing here touches another pursuer's networks or buffer.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/neural.hpp"

namespace pursuit {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

struct DdpgConfig {
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double gamma = 0.99;
  double tau = 0.001;
  std::size_t buffer_capacity = 500000;
  std::size_t batch_size = 512;
  double clip_norm = 0.5;
  double ou_theta = 0.15;
  double ou_sigma = 0.2;
  std::vector<int> actor_hidden{128, 128};
  std::vector<int> critic_hidden{128, 128, 128};
  nn::AdamConfig adam{};
};

inline constexpr double kMinActionNorm = 1e-12;

/// u/|u|, or (1, 0) when |u| < 1e-12.
inline Vector2d normalize_action(const Vector2d& u) {
  const double n = u.norm();
  if (n < kMinActionNorm) return {1.0, 0.0};
  return u / n;
}

inline double action_heading(const Vector2d& a) { return normalize_angle(std::atan2(a.y(), a.x())); }

inline Vector2d heading_action(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Column-wise normalize_action.
inline MatrixXd normalize_actions(const MatrixXd& u) {
  MatrixXd a(2, u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) a.col(c) = normalize_action(u.col(c));
  return a;
}

/// Pulls dL/da back through a = u/|u|: dL/du = (dL/da - a (a . dL/da)) / |u|.
inline MatrixXd normalize_actions_backward(const MatrixXd& u, const MatrixXd& grad_a) {
  MatrixXd g(2, u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const double n = u.col(c).norm();
    if (n < kMinActionNorm) {
      g.col(c).setZero();
      continue;
    }
    const Vector2d a = u.col(c) / n;
    const Vector2d ga = grad_a.col(c);
    g.col(c) = (ga - a * a.dot(ga)) / n;
  }
  return g;
}

struct Transition {
  Observation obs;
  Vector2d action{1.0, 0.0};
  double reward = 0.0;
  Observation next_obs;
  bool terminal = false;  // capture only; time limits stay bootstrappable
};

/// Columns of a sampled batch.
struct Batch {
  MatrixXd obs;       // obs_dim x B
  MatrixXd actions;   // 2 x B
  VectorXd rewards;   // B
  MatrixXd next_obs;  // obs_dim x B
  VectorXd terminal;  // B, 1.0 for terminal

  Eigen::Index size() const noexcept { return rewards.size(); }

  static Batch from_transitions(std::span<const Transition* const> items) {
    if (items.empty()) throw InvalidArgument("Batch: empty");
    const Eigen::Index dim = items.front()->obs.size();
    const auto b = static_cast<Eigen::Index>(items.size());
    Batch out{MatrixXd(dim, b), MatrixXd(2, b), VectorXd(b), MatrixXd(dim, b), VectorXd(b)};
    for (Eigen::Index c = 0; c < b; ++c) {
      const Transition& t = *items[static_cast<std::size_t>(c)];
      if (t.obs.size() != dim || t.next_obs.size() != dim) throw ShapeMismatch("Batch: observation size differs");
      out.obs.col(c) = t.obs;
      out.actions.col(c) = t.action;
      out.rewards[c] = t.reward;
      out.next_obs.col(c) = t.next_obs;
      out.terminal[c] = t.terminal ? 1.0 : 0.0;
    }
    return out;
  }

  static Batch from_transitions(std::span<const Transition> items) {
    std::vector<const Transition*> ptrs;
    ptrs.reserve(items.size());
    for (const auto& t : items) ptrs.push_back(&t);
    return from_transitions(std::span<const Transition* const>(ptrs));
  }
};

/// Fixed-capacity FIFO ring.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidArgument("ReplayBuffer: capacity must be >= 1");
  }

  void push(Transition t) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(t));
    } else {
      items_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

  /// i-th oldest stored transition.
  const Transition& at(std::size_t i) const { return items_[(head_ + i) % items_.size()]; }

  /// Uniform with replacement; indices refer to at().
  template <class Rng>
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const {
    if (batch_size == 0) throw InvalidArgument("ReplayBuffer: batch size must be >= 1");
    if (items_.size() < batch_size) throw NotReady("ReplayBuffer: fewer transitions than batch size");
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<std::size_t> idx(batch_size);
    for (auto& i : idx) i = pick(rng);
    return idx;
  }

  template <class Rng>
  Batch sample(std::size_t batch_size, Rng& rng) const {
    const auto idx = sample_indices(batch_size, rng);
    std::vector<const Transition*> ptrs;
    ptrs.reserve(idx.size());
    for (std::size_t i : idx) ptrs.push_back(&at(i));
    return Batch::from_transitions(std::span<const Transition* const>(ptrs));
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest entry once full
  std::vector<Transition> items_;
};

/// Discrete Ornstein-Uhlenbeck process around zero, one value per action component.
struct OuNoise {
  Vector2d state = Vector2d::Zero();
  double theta = 0.15;
  double sigma = 0.2;

  void reset() noexcept { state.setZero(); }

  template <class Rng>
  const Vector2d& advance(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double g0 = g(rng);
    const double g1 = g(rng);
    state += theta * (-state) + sigma * Vector2d(g0, g1);
    return state;
  }
};

class AgentLearner {
 public:
  template <class Rng>
  AgentLearner(int obs_dim, DdpgConfig config, Rng& rng)
      : config_(std::move(config)), buffer_(config_.buffer_capacity) {
    if (obs_dim < 1) throw InvalidArgument("AgentLearner: obs_dim must be >= 1");
    std::vector<int> actor_sizes{obs_dim};
    actor_sizes.insert(actor_sizes.end(), config_.actor_hidden.begin(), config_.actor_hidden.end());
    actor_sizes.push_back(2);
    std::vector<int> critic_sizes{obs_dim + 2};
    critic_sizes.insert(critic_sizes.end(), config_.critic_hidden.begin(), config_.critic_hidden.end());
    critic_sizes.push_back(1);
    actor_ = nn::mlp_init(std::span<const int>(actor_sizes), rng);
    critic_ = nn::mlp_init(std::span<const int>(critic_sizes), rng);
    actor_target_ = actor_;
    critic_target_ = critic_;
    actor_opt_ = nn::adam_init(actor_);
    critic_opt_ = nn::adam_init(critic_);
    noise_.theta = config_.ou_theta;
    noise_.sigma = config_.ou_sigma;
  }

  int obs_dim() const { return static_cast<int>(actor_.input_size()); }

  Vector2d raw_action(const Observation& obs) const {
    check_obs(obs);
    return nn::predict(actor_, MatrixXd(obs)).col(0);
  }

  Vector2d action_vector(const Observation& obs) const { return normalize_action(raw_action(obs)); }

  /// Deterministic policy heading.
  double act(const Observation& obs) const { return action_heading(action_vector(obs)); }

  /// Policy plus OU noise, normalized.
  template <class Rng>
  double act_explore(const Observation& obs, Rng& rng) {
    const Vector2d u = raw_action(obs);
    const Vector2d& x = noise_.advance(rng);
    return action_heading(normalize_action(u + x));
  }

  void reset_noise() noexcept { noise_.reset(); }

  /// y = r + gamma (1 - terminal) Q'(s', mu'(s')); minimizes mean (Q(s,a) - y)^2.
  /// Returns the loss before the update.
  double critic_update(const Batch& batch) {
    check_batch(batch);
    const double b = static_cast<double>(batch.size());
    const MatrixXd next_actions = normalize_actions(nn::predict(actor_target_, batch.next_obs));
    const MatrixXd q_next = nn::predict(critic_target_, stack(batch.next_obs, next_actions));
    const VectorXd y =
        batch.rewards.array() + config_.gamma * (1.0 - batch.terminal.array()) * q_next.row(0).transpose().array();

    auto [q, cache] = nn::forward_batch(critic_, stack(batch.obs, batch.actions));
    const VectorXd diff = q.row(0).transpose() - y;
    const double loss = diff.squaredNorm() / b;
    const MatrixXd dq = (2.0 / b) * diff.transpose();
    auto grads = nn::backward(critic_, cache, dq).first;
    nn::adam_step(critic_, nn::clip_global_norm(std::move(grads), config_.clip_norm), critic_opt_,
                  config_.critic_lr, config_.adam);
    return loss;
  }

  /// Gradient of mean Q(s, mu(s)) with respect to the actor (minus sign: it
  /// is the descent direction for -J). Also returns mean Q.
  std::pair<nn::GradientBundle, double> actor_gradient(const MatrixXd& obs) const {
    const double b = static_cast<double>(obs.cols());
    auto [u, actor_cache] = nn::forward_batch(actor_, obs);
    const MatrixXd a = normalize_actions(u);
    auto [q, critic_cache] = nn::forward_batch(critic_, stack(obs, a));
    const double mean_q = q.sum() / b;
    const MatrixXd dq = MatrixXd::Constant(1, obs.cols(), -1.0 / b);
    const MatrixXd dx = nn::backward(critic_, critic_cache, dq).second;
    const MatrixXd du = normalize_actions_backward(u, dx.bottomRows(2));
    return {nn::backward(actor_, actor_cache, du).first, mean_q};
  }

  /// Ascends mean Q(s, mu(s)); returns the value before the update.
  double actor_update(const Batch& batch) {
    check_batch(batch);
    auto [grads, mean_q] = actor_gradient(batch.obs);
    nn::adam_step(actor_, nn::clip_global_norm(std::move(grads), config_.clip_norm), actor_opt_, config_.actor_lr,
                  config_.adam);
    return mean_q;
  }

  void soft_update_targets() { soft_update_targets(config_.tau); }

  void soft_update_targets(double tau) {
    nn::polyak_update(actor_target_, actor_, tau);
    nn::polyak_update(critic_target_, critic_, tau);
  }

  void remember(Transition t) { buffer_.push(std::move(t)); }

  bool ready() const noexcept { return buffer_.size() >= config_.batch_size; }

  /// One critic step, one actor step and one soft target update, if the
  /// buffer holds at least one batch. Returns {critic loss, mean Q}.
  template <class Rng>
  std::optional<std::pair<double, double>> train_step(Rng& rng) {
    if (!ready()) return std::nullopt;
    const Batch batch = buffer_.sample(config_.batch_size, rng);
    const double loss = critic_update(batch);
    const double q = actor_update(batch);
    soft_update_targets();
    return std::make_pair(loss, q);
  }

  const DdpgConfig& config() const noexcept { return config_; }
  const nn::MlpParams& actor() const noexcept { return actor_; }
  const nn::MlpParams& critic() const noexcept { return critic_; }
  const nn::MlpParams& actor_target() const noexcept { return actor_target_; }
  const nn::MlpParams& critic_target() const noexcept { return critic_target_; }
  const nn::AdamState& actor_optimizer() const noexcept { return actor_opt_; }
  const nn::AdamState& critic_optimizer() const noexcept { return critic_opt_; }
  const OuNoise& noise() const noexcept { return noise_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }

  // Mutable access for checkpoint restore and test fixtures.
  nn::MlpParams& actor() noexcept { return actor_; }
  nn::MlpParams& critic() noexcept { return critic_; }
  nn::MlpParams& actor_target() noexcept { return actor_target_; }
  nn::MlpParams& critic_target() noexcept { return critic_target_; }
  nn::AdamState& actor_optimizer() noexcept { return actor_opt_; }
  nn::AdamState& critic_optimizer() noexcept { return critic_opt_; }
  OuNoise& noise() noexcept { return noise_; }
  ReplayBuffer& buffer() noexcept { return buffer_; }

  static MatrixXd stack(const MatrixXd& obs, const MatrixXd& actions) {
    MatrixXd x(obs.rows() + actions.rows(), obs.cols());
    x.topRows(obs.rows()) = obs;
    x.bottomRows(actions.rows()) = actions;
    return x;
  }

 private:
  void check_obs(const Observation& obs) const {
    if (obs.size() != actor_.input_size()) throw ShapeMismatch("AgentLearner: observation size mismatch");
  }
  void check_batch(const Batch& batch) const {
    if (batch.size() == 0) throw InvalidArgument("AgentLearner: empty batch");
    if (batch.obs.rows() != actor_.input_size() || batch.next_obs.rows() != actor_.input_size() ||
        batch.actions.rows() != 2) {
      throw ShapeMismatch("AgentLearner: batch dimension mismatch");
    }
  }

  DdpgConfig config_;
  nn::MlpParams actor_;
  nn::MlpParams critic_;
  nn::MlpParams actor_target_;
  nn::MlpParams critic_target_;
  nn::AdamState actor_opt_;
  nn::AdamState critic_opt_;
  OuNoise noise_;
  ReplayBuffer buffer_;
};

}  // namespace pursuit

#endif  // PURSUIT_DDPG_HPP
