#ifndef PURSUIT_ENVIRONMENT_HPP
#define PURSUIT_ENVIRONMENT_HPP

// Toroidal pursuit-evasion game: n pursuers chase one analytic evader. All
// agents move simultaneously at constant speed along their chosen heading.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/evader.hpp"
#include "pursuit/torus.hpp"

namespace pursuit {

inline constexpr double kCaptureReward = 50.0;
inline constexpr double kStepReward = -0.1;

struct Pose {
  Point2 position;
  double heading = 0.0;  // [-pi, pi)
};

struct WorldState {
  std::vector<Pose> pursuers;
  Pose evader;
  int step = 0;

  std::vector<Point2> pursuer_positions() const {
    std::vector<Point2> out;
    out.reserve(pursuers.size());
    for (const auto& p : pursuers) out.push_back(p.position);
    return out;
  }
};

struct EnvConfig {
  int n_pursuers = 3;
  double evader_speed = 0.05;
  double velocity_ratio = 1.2;
  double capture_radius = 0.05;
  int episode_length = 500;
  /// Reset resamples until every pursuer starts farther than this from the evader.
  double spawn_clearance = 0.1;
  std::uint64_t seed = 0;

  double pursuer_speed() const noexcept { return velocity_ratio * evader_speed; }

  void validate() const {
    if (n_pursuers < 1) throw InvalidArgument("EnvConfig: n_pursuers must be >= 1");
    if (!(evader_speed > 0.0)) throw InvalidArgument("EnvConfig: evader_speed must be > 0");
    if (!(velocity_ratio > 0.0)) throw InvalidArgument("EnvConfig: velocity_ratio must be > 0");
    if (!(capture_radius > 0.0 && capture_radius < 0.5)) {
      throw InvalidArgument("EnvConfig: capture_radius must lie in (0, 0.5)");
    }
    if (episode_length < 1) throw InvalidArgument("EnvConfig: episode_length must be >= 1");
    if (!(spawn_clearance >= 0.0 && spawn_clearance < 0.5)) {
      throw InvalidArgument("EnvConfig: spawn_clearance must lie in [0, 0.5)");
    }
  }
};

struct StepOutcome {
  std::vector<double> rewards;
  bool captured = false;
  bool done = false;
  bool truncated = false;
};

using Observation = Eigen::VectorXd;

enum class ObservationMode { Full, Partial };

inline int observation_size(ObservationMode mode, int n_pursuers) {
  return mode == ObservationMode::Full ? 4 + 2 * (n_pursuers - 1) : 4;
}

inline double min_evader_distance(const WorldState& state) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : state.pursuers) {
    best = std::min(best, distance(p.position, state.evader.position));
  }
  return best;
}

inline bool is_captured(const WorldState& state, const EnvConfig& config) {
  return min_evader_distance(state) <= config.capture_radius;
}

inline bool is_terminal(const WorldState& state, const EnvConfig& config) {
  return state.step >= config.episode_length || is_captured(state, config);
}

template <class Rng>
WorldState reset_world(const EnvConfig& config, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  auto draw_pose = [&] {
    const double x = unit(rng);
    const double y = unit(rng);
    return Pose{Point2(x, y), normalize_angle(angle(rng))};
  };
  WorldState state;
  for (;;) {
    state.pursuers.clear();
    for (int i = 0; i < config.n_pursuers; ++i) state.pursuers.push_back(draw_pose());
    state.evader = draw_pose();
    state.step = 0;
    if (min_evader_distance(state) > config.spawn_clearance) return state;
  }
}

namespace detail {

inline Point2 advance(const Point2& p, double heading, double speed) {
  return wrap(p.vec() + Vec2{speed * std::cos(heading), speed * std::sin(heading)});
}

}  // namespace detail

/// One simultaneous move. The evader's heading depends only on `state`.
template <class Rng>
std::pair<WorldState, StepOutcome> step_world(const WorldState& state,
                                              std::span<const double> pursuer_headings,
                                              const EnvConfig& config, Rng& evader_rng) {
  if (is_terminal(state, config)) throw ContractViolation("step_world: episode already done");
  if (pursuer_headings.size() != state.pursuers.size()) {
    throw InvalidArgument("step_world: one heading per pursuer required");
  }
  for (double h : pursuer_headings) {
    if (!std::isfinite(h)) throw InvalidArgument("step_world: non-finite heading");
  }

  const auto positions = state.pursuer_positions();
  const double evader_heading =
      evade_heading(state.evader.position, std::span<const Point2>(positions), evader_rng);

  WorldState next;
  next.step = state.step + 1;
  next.pursuers.reserve(state.pursuers.size());
  const double vp = config.pursuer_speed();
  for (std::size_t i = 0; i < state.pursuers.size(); ++i) {
    const double h = normalize_angle(pursuer_headings[i]);
    next.pursuers.push_back({detail::advance(state.pursuers[i].position, h, vp), h});
  }
  next.evader = {detail::advance(state.evader.position, evader_heading, config.evader_speed),
                 evader_heading};

  StepOutcome out;
  out.captured = is_captured(next, config);
  out.truncated = !out.captured && next.step >= config.episode_length;
  out.done = out.captured || out.truncated;
  out.rewards.assign(state.pursuers.size(), out.captured ? kCaptureReward : kStepReward);
  return {std::move(next), std::move(out)};
}

/// [cos h, sin h, d(self -> evader), d(self -> teammate j) for j != i ascending].
inline Observation observe_full(const WorldState& state, int i) {
  const int n = static_cast<int>(state.pursuers.size());
  if (i < 0 || i >= n) throw InvalidArgument("observe_full: pursuer index out of range");
  Observation obs(observation_size(ObservationMode::Full, n));
  const Pose& self = state.pursuers[static_cast<std::size_t>(i)];
  obs[0] = std::cos(self.heading);
  obs[1] = std::sin(self.heading);
  const Displacement2 de = displacement(self.position, state.evader.position);
  obs[2] = de.dx();
  obs[3] = de.dy();
  int k = 4;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const Displacement2 dt = displacement(self.position, state.pursuers[static_cast<std::size_t>(j)].position);
    obs[k++] = dt.dx();
    obs[k++] = dt.dy();
  }
  return obs;
}

/// [cos h, sin h, d(self -> evader)]; no teammate information.
inline Observation observe_partial(const WorldState& state, int i) {
  const int n = static_cast<int>(state.pursuers.size());
  if (i < 0 || i >= n) throw InvalidArgument("observe_partial: pursuer index out of range");
  Observation obs(4);
  const Pose& self = state.pursuers[static_cast<std::size_t>(i)];
  obs[0] = std::cos(self.heading);
  obs[1] = std::sin(self.heading);
  const Displacement2 de = displacement(self.position, state.evader.position);
  obs[2] = de.dx();
  obs[3] = de.dy();
  return obs;
}

inline Observation observe(const WorldState& state, int i, ObservationMode mode) {
  return mode == ObservationMode::Full ? observe_full(state, i) : observe_partial(state, i);
}

/// Owns one episode's state together with the random stream that drives
/// resets and the evader's symmetric-case tie breaks.
class Environment {
 public:
  explicit Environment(EnvConfig config) : config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
  }

  const WorldState& reset() {
    state_ = reset_world(config_, rng_);
    return state_;
  }

  StepOutcome step(std::span<const double> headings) {
    auto [next, outcome] = step_world(state_, headings, config_, rng_);
    state_ = std::move(next);
    return outcome;
  }

  const WorldState& state() const noexcept { return state_; }
  const EnvConfig& config() const noexcept { return config_; }
  bool done() const { return is_terminal(state_, config_); }

  /// Takes effect from the next step; the curriculum only changes it between episodes.
  void set_velocity_ratio(double ratio) {
    if (!(ratio > 0.0)) throw InvalidArgument("velocity ratio must be > 0");
    config_.velocity_ratio = ratio;
  }

  std::mt19937_64& rng() noexcept { return rng_; }
  const std::mt19937_64& rng() const noexcept { return rng_; }

 private:
  EnvConfig config_;
  std::mt19937_64 rng_;
  WorldState state_;
};

}  // namespace pursuit

#endif  // PURSUIT_ENVIRONMENT_HPP
