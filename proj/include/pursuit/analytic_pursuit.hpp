#ifndef PURSUIT_ANALYTIC_PURSUIT_HPP
#define PURSUIT_ANALYTIC_PURSUIT_HPP

// Scripted pursuer baselines.
//
// Greedy: each pursuer follows -grad of U_att = k_att/2 * d^2, i.e. heads
// straight at the evader along the shortest wrapped path. Only the direction
// of the force is used, so k_att drops out.
//
// Pincer: the torus is unrolled k tiles in every direction and each pursuer
// picks one of its own (2k+1)^2 images. The joint pick maximizes the evader's
// best achievable cost min_theta U(theta), which is -sqrt(A^2 + B^2) in closed
// form, so the pick balances the bearings around the evader. Among near-best
// picks the tightest encirclement wins. Active images then head straight at
// the evader's centre-tile position.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/torus.hpp"

namespace pursuit {

struct GreedyParams {
  double k_att = 1.5;
};

inline double greedy_heading(const Pose& pursuer, const Point2& evader) {
  const Displacement2 d = displacement(pursuer.position, evader);
  if (d.dx() == 0.0 && d.dy() == 0.0) throw SingularityError("greedy_heading: co-located with evader");
  return normalize_angle(d.bearing());
}

/// Attractive force -k_att * (q - goal) on the torus, exposed for completeness;
/// the heading above is its direction.
inline Vec2 attractive_force(const Pose& pursuer, const Point2& goal, const GreedyParams& params) {
  return params.k_att * displacement(pursuer.position, goal).vec();
}

inline std::vector<double> greedy_headings(const WorldState& state) {
  std::vector<double> out;
  out.reserve(state.pursuers.size());
  for (const auto& p : state.pursuers) out.push_back(greedy_heading(p, state.evader.position));
  return out;
}

/// Evader's best cost against a set of planar (unrolled) pursuer positions.
inline double pincer_objective(std::span<const Vec2> replicas, Vec2 evader) {
  double a = 0.0;
  double b = 0.0;
  for (const Vec2& q : replicas) {
    const Vec2 d = q - evader;
    const double r2 = d.x * d.x + d.y * d.y;
    if (r2 == 0.0) throw SingularityError("pincer_objective: replica on evader");
    a += d.x / r2;  // cos(bearing) / r
    b += d.y / r2;  // sin(bearing) / r
  }
  return -std::hypot(a, b);
}

struct ReplicaSelection {
  std::vector<int> replica_index_per_pursuer;
  double objective_value = 0.0;  // pincer_objective of the selected images
  double score = 0.0;            // value the search maximized
  double total_distance = 0.0;
  std::size_t evaluated = 0;
};

enum class PincerScore {
  /// min_theta sum_i cos(theta - bearing_i) / n = -|sum of unit bearings| / n, in [-1, 0].
  /// Scale free, so far images are not preferred just for being far.
  BearingBalance,
  /// min_theta U(theta) with the 1/r weights, i.e. pincer_objective.
  WeightedObjective,
};

struct PincerOptions {
  int k = 1;
  PincerScore score = PincerScore::BearingBalance;
  /// Selections scoring within this of the best are treated as ties.
  double tie_tolerance = 0.3;
};

inline constexpr double kExactTieTolerance = 1e-9;

/// Exhaustive search over one image per pursuer ((2k+1)^2)^n candidates. Ties
/// (score within tie_tolerance of the best) go to the smallest total
/// image-evader distance, then to the lexicographically first index tuple.
inline ReplicaSelection pincer_select(const WorldState& state, const PincerOptions& opts = {}) {
  if (opts.k < 1) throw InvalidArgument("pincer_select: k must be >= 1");
  if (!(opts.tie_tolerance >= 0.0)) throw InvalidArgument("pincer_select: tie tolerance must be >= 0");
  const std::size_t n = state.pursuers.size();
  if (n == 0) throw InvalidArgument("pincer_select: no pursuers");
  const Vec2 e = state.evader.position.vec();
  const std::size_t m = static_cast<std::size_t>((2 * opts.k + 1) * (2 * opts.k + 1));

  // Per-image (x, y) contribution to the scored resultant, and distance.
  struct Image {
    double cx, cy, dist;
  };
  std::vector<std::vector<Image>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Vec2& q : replicate(state.pursuers[i].position, opts.k)) {
      const Vec2 d = q - e;
      const double r = d.norm();
      if (r == 0.0) throw SingularityError("pincer_select: pursuer on evader");
      const double w = opts.score == PincerScore::BearingBalance ? 1.0 / r : 1.0 / (r * r);
      images[i].push_back({d.x * w, d.y * w, r});
    }
  }
  const double norm = opts.score == PincerScore::BearingBalance ? static_cast<double>(n) : 1.0;

  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;

  std::vector<int> idx(n);
  auto decode = [&](std::size_t code) {
    for (std::size_t i = n; i-- > 0;) {
      idx[i] = static_cast<int>(code % m);
      code /= m;
    }
  };
  auto evaluate = [&](double& score, double& dist) {
    double a = 0.0, b = 0.0;
    dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Image& im = images[i][static_cast<std::size_t>(idx[i])];
      a += im.cx;
      b += im.cy;
      dist += im.dist;
    }
    score = -std::hypot(a, b) / norm;
  };

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    decode(code);
    double score, dist;
    evaluate(score, dist);
    if (score > best) best = score;
  }

  ReplicaSelection sel;
  sel.evaluated = total;
  sel.total_distance = std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    decode(code);
    double score, dist;
    evaluate(score, dist);
    if (score >= best - opts.tie_tolerance && dist < sel.total_distance) {
      sel.replica_index_per_pursuer = idx;
      sel.score = score;
      sel.total_distance = dist;
    }
  }

  std::vector<Vec2> chosen;
  chosen.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    chosen.push_back(replicate(state.pursuers[i].position, opts.k)[static_cast<std::size_t>(sel.replica_index_per_pursuer[i])]);
  }
  sel.objective_value = pincer_objective(chosen, e);
  return sel;
}

/// Headings from each selected image toward the evader's centre-tile position.
inline std::vector<double> pincer_headings(const WorldState& state, const PincerOptions& opts = {},
                                           ReplicaSelection* selection_out = nullptr) {
  ReplicaSelection sel = pincer_select(state, opts);
  const Vec2 e = state.evader.position.vec();
  std::vector<double> out;
  out.reserve(state.pursuers.size());
  for (std::size_t i = 0; i < state.pursuers.size(); ++i) {
    const auto reps = replicate(state.pursuers[i].position, opts.k);
    const Vec2 q = reps[static_cast<std::size_t>(sel.replica_index_per_pursuer[i])];
    out.push_back(normalize_angle((e - q).bearing()));
  }
  if (selection_out) *selection_out = std::move(sel);
  return out;
}

}  // namespace pursuit

#endif  // PURSUIT_ANALYTIC_PURSUIT_HPP
