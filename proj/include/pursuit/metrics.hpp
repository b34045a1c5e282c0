#ifndef PURSUIT_METRICS_HPP
#define PURSUIT_METRICS_HPP

// Post-hoc coordination analysis over logged trajectories.
//
// Instantaneous coordination (IC) from agent i to agent j is the plug-in
// mutual information, in bits, between i's binned heading at step t and j's
// binned heading at step t+1, pooled over every (t, t+1) pair of every
// trajectory. The per-step reading is the pointwise mutual information of the
// observed pair under the pooled distribution; a step pair is high-influence
// when its PMI exceeds the mean PMI (which equals the pooled MI).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/torus.hpp"

namespace pursuit {

inline int discretize_heading(double theta, int bins) {
  if (bins < 2) throw InvalidArgument("discretize_heading: need at least 2 bins");
  if (!std::isfinite(theta)) throw InvalidArgument("discretize_heading: non-finite heading");
  const double t = normalize_angle(theta);
  const double width = 2.0 * std::numbers::pi / bins;
  const int b = static_cast<int>(std::floor((t + std::numbers::pi) / width));
  return std::clamp(b, 0, bins - 1);
}

/// Joint counts of (row, column) bin pairs.
class ActionHistogram {
 public:
  explicit ActionHistogram(int bins) : bins_(bins), joint_(static_cast<std::size_t>(bins) * bins, 0) {
    if (bins < 2) throw InvalidArgument("ActionHistogram: need at least 2 bins");
  }

  void add(int row, int col, std::int64_t count = 1) {
    if (row < 0 || row >= bins_ || col < 0 || col >= bins_) throw InvalidArgument("ActionHistogram: bin out of range");
    joint_[index(row, col)] += count;
    total_ += count;
  }

  int bins() const noexcept { return bins_; }
  std::int64_t total() const noexcept { return total_; }
  std::int64_t count(int row, int col) const { return joint_[index(row, col)]; }

  std::vector<std::int64_t> row_marginal() const {
    std::vector<std::int64_t> m(static_cast<std::size_t>(bins_), 0);
    for (int r = 0; r < bins_; ++r)
      for (int c = 0; c < bins_; ++c) m[static_cast<std::size_t>(r)] += count(r, c);
    return m;
  }

  std::vector<std::int64_t> col_marginal() const {
    std::vector<std::int64_t> m(static_cast<std::size_t>(bins_), 0);
    for (int r = 0; r < bins_; ++r)
      for (int c = 0; c < bins_; ++c) m[static_cast<std::size_t>(c)] += count(r, c);
    return m;
  }

  ActionHistogram transposed() const {
    ActionHistogram t(bins_);
    for (int r = 0; r < bins_; ++r)
      for (int c = 0; c < bins_; ++c)
        if (count(r, c) != 0) t.add(c, r, count(r, c));
    return t;
  }

  /// log2(p(r, c) / (p(r) p(c))) for an observed cell.
  double pointwise_mi(int row, int col) const {
    const auto rows = row_marginal();
    const auto cols = col_marginal();
    return pmi(count(row, col), rows[static_cast<std::size_t>(row)], cols[static_cast<std::size_t>(col)]);
  }

  /// Plug-in mutual information in bits, with 0 log 0 = 0.
  double mutual_information() const {
    if (total_ == 0) throw InvalidArgument("ActionHistogram: empty");
    const auto rows = row_marginal();
    const auto cols = col_marginal();
    const double n = static_cast<double>(total_);
    double mi = 0.0;
    for (int r = 0; r < bins_; ++r) {
      for (int c = 0; c < bins_; ++c) {
        const std::int64_t k = count(r, c);
        if (k == 0) continue;
        mi += (static_cast<double>(k) / n) * pmi(k, rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
      }
    }
    return std::max(mi, 0.0);
  }

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * static_cast<std::size_t>(bins_) + static_cast<std::size_t>(c); }

  double pmi(std::int64_t joint, std::int64_t row, std::int64_t col) const {
    const double n = static_cast<double>(total_);
    return std::log2(static_cast<double>(joint) * n / (static_cast<double>(row) * static_cast<double>(col)));
  }

  int bins_;
  std::vector<std::int64_t> joint_;
  std::int64_t total_ = 0;
};

/// Headings chosen in one trajectory: steps[t][agent].
struct ActionTrajectory {
  std::vector<std::vector<double>> steps;
};

namespace detail {

inline void check_pair(std::span<const ActionTrajectory> trajectories, int i, int j) {
  if (i == j) throw InvalidArgument("coordination: agents must differ");
  if (i < 0 || j < 0) throw InvalidArgument("coordination: negative agent index");
  for (const auto& tr : trajectories) {
    for (const auto& s : tr.steps) {
      if (static_cast<int>(s.size()) <= std::max(i, j)) throw InvalidArgument("coordination: agent index out of range");
    }
  }
}

}  // namespace detail

inline ActionHistogram coordination_histogram(std::span<const ActionTrajectory> trajectories, int i, int j, int bins) {
  detail::check_pair(trajectories, i, j);
  ActionHistogram h(bins);
  for (const auto& tr : trajectories) {
    for (std::size_t t = 0; t + 1 < tr.steps.size(); ++t) {
      h.add(discretize_heading(tr.steps[t][static_cast<std::size_t>(i)], bins),
            discretize_heading(tr.steps[t + 1][static_cast<std::size_t>(j)], bins));
    }
  }
  if (h.total() == 0) throw InvalidArgument("coordination: no (t, t+1) step pairs");
  return h;
}

inline double instantaneous_coordination(std::span<const ActionTrajectory> trajectories, int i, int j, int bins) {
  return coordination_histogram(trajectories, i, j, bins).mutual_information();
}

/// PMI of every pooled step pair, in trajectory order.
inline std::vector<double> pointwise_coordination(std::span<const ActionTrajectory> trajectories, int i, int j,
                                                  int bins) {
  const ActionHistogram h = coordination_histogram(trajectories, i, j, bins);
  const auto rows = h.row_marginal();
  const auto cols = h.col_marginal();
  const double n = static_cast<double>(h.total());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(h.total()));
  for (const auto& tr : trajectories) {
    for (std::size_t t = 0; t + 1 < tr.steps.size(); ++t) {
      const int r = discretize_heading(tr.steps[t][static_cast<std::size_t>(i)], bins);
      const int c = discretize_heading(tr.steps[t + 1][static_cast<std::size_t>(j)], bins);
      out.push_back(std::log2(static_cast<double>(h.count(r, c)) * n /
                              (static_cast<double>(rows[static_cast<std::size_t>(r)]) *
                               static_cast<double>(cols[static_cast<std::size_t>(c)]))));
    }
  }
  return out;
}

/// Fraction of step pairs whose PMI is strictly above the mean PMI.
inline double high_influence_fraction(std::span<const double> pointwise) {
  if (pointwise.empty()) throw InvalidArgument("high_influence_fraction: empty input");
  double mean = 0.0;
  for (double v : pointwise) mean += v;
  mean /= static_cast<double>(pointwise.size());
  // Constant PMI up to rounding counts as no excess.
  const double slack = 1e-12 * std::max(1.0, std::abs(mean));
  std::size_t above = 0;
  for (double v : pointwise) above += v > mean + slack ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(pointwise.size());
}

inline double high_influence_fraction(std::span<const ActionTrajectory> trajectories, int i, int j, int bins) {
  const auto pmi = pointwise_coordination(trajectories, i, j, bins);
  return high_influence_fraction(std::span<const double>(pmi));
}

struct PairCoordination {
  int from = 0;
  int to = 1;
  double mi_bits = 0.0;
  double high_influence_fraction = 0.0;
  std::int64_t samples = 0;
  std::vector<double> pointwise;
};

struct IcReport {
  int bins = 16;
  std::vector<PairCoordination> pairs;  // every ordered pair (i, j), i != j

  double mean_mi_bits() const {
    if (pairs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : pairs) s += p.mi_bits;
    return s / static_cast<double>(pairs.size());
  }

  double mean_high_influence_fraction() const {
    if (pairs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : pairs) s += p.high_influence_fraction;
    return s / static_cast<double>(pairs.size());
  }
};

inline IcReport coordination_report(std::span<const ActionTrajectory> trajectories, int n_agents, int bins) {
  if (n_agents < 2) throw InvalidArgument("coordination_report: need at least two agents");
  IcReport report;
  report.bins = bins;
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      if (i == j) continue;
      const ActionHistogram h = coordination_histogram(trajectories, i, j, bins);
      PairCoordination pc;
      pc.from = i;
      pc.to = j;
      pc.mi_bits = h.mutual_information();
      pc.samples = h.total();
      pc.pointwise = pointwise_coordination(trajectories, i, j, bins);
      pc.high_influence_fraction = high_influence_fraction(std::span<const double>(pc.pointwise));
      report.pairs.push_back(std::move(pc));
    }
  }
  return report;
}

/// Positions at the capture step of one successful trajectory.
struct CaptureSnapshot {
  Point2 evader;
  std::vector<Point2> pursuers;
};

struct CaptureAngleHistogram {
  int bins = 0;
  std::size_t captures = 0;
  std::vector<std::vector<std::int64_t>> counts;  // [pursuer][bin]
  std::vector<double> circular_mean;              // [0, 2pi)
  std::vector<double> circular_variance;          // 1 - mean resultant length
};

/// Bearing from evader to pursuer in [0, 2pi).
inline double capture_bearing(const Point2& evader, const Point2& pursuer) {
  double b = displacement(evader, pursuer).bearing();
  if (b < 0.0) b += 2.0 * std::numbers::pi;
  if (b >= 2.0 * std::numbers::pi) b = 0.0;
  return b;
}

/// nullopt when there is nothing to analyze.
inline std::optional<CaptureAngleHistogram> capture_angle_histogram(std::span<const CaptureSnapshot> captures,
                                                                    int bins) {
  if (bins < 1) throw InvalidArgument("capture_angle_histogram: need at least 1 bin");
  if (captures.empty()) return std::nullopt;
  const std::size_t n = captures.front().pursuers.size();
  CaptureAngleHistogram h;
  h.bins = bins;
  h.captures = captures.size();
  h.counts.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0));
  std::vector<double> sx(n, 0.0), sy(n, 0.0);
  const double width = 2.0 * std::numbers::pi / bins;
  for (const auto& cap : captures) {
    if (cap.pursuers.size() != n) throw InvalidArgument("capture_angle_histogram: pursuer count differs");
    for (std::size_t i = 0; i < n; ++i) {
      const double b = capture_bearing(cap.evader, cap.pursuers[i]);
      const int bin = std::min(static_cast<int>(std::floor(b / width)), bins - 1);
      ++h.counts[i][static_cast<std::size_t>(bin)];
      sx[i] += std::cos(b);
      sy[i] += std::sin(b);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double m = static_cast<double>(captures.size());
    double mean = std::atan2(sy[i], sx[i]);
    if (mean < 0.0) mean += 2.0 * std::numbers::pi;
    h.circular_mean.push_back(mean);
    h.circular_variance.push_back(std::max(0.0, 1.0 - std::hypot(sx[i], sy[i]) / m));
  }
  return h;
}

/// Fraction of episodes whose final outcome is a capture.
inline double capture_success_rate(std::span<const StepOutcome> final_outcomes) {
  if (final_outcomes.empty()) throw InvalidArgument("capture_success_rate: no episodes");
  std::size_t captured = 0;
  for (const auto& o : final_outcomes) captured += o.captured ? 1 : 0;
  return static_cast<double>(captured) / static_cast<double>(final_outcomes.size());
}

inline double capture_success_rate(std::span<const bool> captured) {
  if (captured.empty()) throw InvalidArgument("capture_success_rate: no episodes");
  std::size_t k = 0;
  for (bool c : captured) k += c ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(captured.size());
}

}  // namespace pursuit

#endif  // PURSUIT_METRICS_HPP
