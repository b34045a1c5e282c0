#ifndef PURSUIT_SELFCHECK_HPP
#define PURSUIT_SELFCHECK_HPP

// Built-in numerical checks: evader cases, closed forms against brute-force
// oracles, backward passes against finite differences, the annealing
// schedule, and the MI estimator. Failures are reported, never thrown.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pursuit/analytic_pursuit.hpp"
#include "pursuit/curriculum.hpp"
#include "pursuit/ddpg.hpp"
#include "pursuit/evader.hpp"
#include "pursuit/gradient_check.hpp"
#include "pursuit/metrics.hpp"

namespace pursuit::selfcheck {

/// Compact number text for check details.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 12345;
  /// Scales analytic gradients inside the gradient checks; anything but 1
  /// must make them fail.
  double gradient_scale = 1.0;
  int gradient_probes = 100;
  int random_states = 1000;
};

// ------------------------------------------------------------------ oracles

/// Brute-force minimum of the evasion cost over `grid` uniformly spaced
/// headings in [-pi, pi). Returns {heading, cost}.
inline std::pair<double, double> grid_minimum(std::span<const PolarContact> contacts, int grid) {
  double best_theta = -std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < grid; ++g) {
    const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * g / grid;
    const double c = evade_cost(theta, contacts);
    if (c < best) {
      best = c;
      best_theta = theta;
    }
  }
  return {best_theta, best};
}

/// Grid minimum polished by golden-section search on the bracketing cell.
inline double refined_grid_minimum(std::span<const PolarContact> contacts, int grid) {
  const double cell = 2.0 * std::numbers::pi / grid;
  double lo = grid_minimum(contacts, grid).first - cell;
  double hi = lo + 2.0 * cell;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = evade_cost(a, contacts), fb = evade_cost(b, contacts);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = evade_cost(a, contacts);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = evade_cost(b, contacts);
    }
  }
  return std::min(fa, fb);
}

/// Planar replicas as evader contacts.
inline std::vector<PolarContact> planar_contacts(std::span<const Vec2> replicas, Vec2 evader) {
  std::vector<PolarContact> out;
  for (const Vec2& q : replicas) {
    const Vec2 d = q - evader;
    out.push_back({d.norm(), d.bearing()});
  }
  return out;
}

/// Random contact set: 1..6 contacts, distances in [0.05, 0.7].
template <class Rng>
std::vector<PolarContact> random_contacts(Rng& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> r(0.05, 0.7);
  std::uniform_real_distribution<double> b(-std::numbers::pi, std::numbers::pi);
  std::vector<PolarContact> out(static_cast<std::size_t>(count(rng)));
  for (auto& c : out) c = {r(rng), b(rng)};
  return out;
}

// ------------------------------------------------------------------- checks

inline CheckResult evader_case(const std::string& name, std::vector<double> bearings, double expected) {
  std::vector<PolarContact> contacts;
  for (double b : bearings) contacts.push_back({1.0, b});
  std::mt19937_64 rng(0);
  const double h = evade_heading(std::span<const PolarContact>(contacts), rng);
  const double err = angular_distance(h, expected);
  return {name, err <= 1e-9,
          "heading " + num(h) + " rad, expected " + num(expected) + ", error " +
              num(err)};
}

inline CheckResult evader_case_1() {
  return evader_case("evader case 1 (bearings 0, pi/2, pi)", {0.0, std::numbers::pi / 2, std::numbers::pi},
                     -std::numbers::pi / 2);
}

inline CheckResult evader_case_2() {
  return evader_case("evader case 2 (bearings 0, pi/2, -pi/2)", {0.0, std::numbers::pi / 2, -std::numbers::pi / 2},
                     std::numbers::pi);
}

inline CheckResult evader_optimality(const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  double worst = -std::numeric_limits<double>::infinity();
  int failures = 0;
  for (int s = 0; s < opt.random_states; ++s) {
    const auto contacts = random_contacts(rng);
    const double h = evade_heading(std::span<const PolarContact>(contacts), rng);
    const double cost = evade_cost(h, contacts);
    const double grid = grid_minimum(contacts, 10000).second;
    worst = std::max(worst, cost - grid);
    failures += cost <= grid + 1e-9 ? 0 : 1;
  }
  return {"evader closed form vs 10000-point grid", failures == 0,
          num(opt.random_states) + " sets, worst cost - grid min = " + num(worst)};
}

inline CheckResult pincer_inner_minimum(const Options& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  double worst = 0.0;
  for (int s = 0; s < opt.random_states; ++s) {
    const Vec2 e{unit(rng), unit(rng)};
    std::vector<Vec2> reps;
    const int n = count(rng);
    while (static_cast<int>(reps.size()) < n) {
      // Images anywhere in the 3x3 unrolled square, kept off the evader.
      const Vec2 q{3.0 * unit(rng) - 1.0, 3.0 * unit(rng) - 1.0};
      if ((q - e).norm() > 0.05) reps.push_back(q);
    }
    const double closed = pincer_objective(reps, e);
    const double grid = refined_grid_minimum(planar_contacts(reps, e), 10000);
    worst = std::max(worst, std::abs(closed - grid));
  }

  WorldState st;
  for (double x : {0.1, 0.5, 0.8}) st.pursuers.push_back({Point2(x, 0.3), 0.0});
  st.evader = {Point2(0.45, 0.7), 0.0};
  const std::size_t evaluated = pincer_select(st, PincerOptions{1, PincerScore::BearingBalance, 0.3}).evaluated;

  const bool ok = worst < 1e-6 && evaluated == 729;
  return {"pincer closed-form inner minimum vs grid", ok,
          num(opt.random_states) + " states, max |closed - grid| = " + num(worst) +
              "; n=3, k=1 enumerates " + num(evaluated) + " selections"};
}

inline CheckResult gradients(const Options& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  gradcheck::Options g;
  g.probes = opt.gradient_probes;
  g.analytic_scale = opt.gradient_scale;
  const DdpgConfig dc;
  constexpr int kObs = 8;  // full observation, three pursuers
  std::vector<int> actor{kObs};
  actor.insert(actor.end(), dc.actor_hidden.begin(), dc.actor_hidden.end());
  actor.push_back(2);
  std::vector<int> critic{kObs + 2};
  critic.insert(critic.end(), dc.critic_hidden.begin(), dc.critic_hidden.end());
  critic.push_back(1);

  const auto ra = gradcheck::check_mlp(actor, nn::Activation::Identity, g, rng);
  const auto rc = gradcheck::check_mlp(critic, nn::Activation::Identity, g, rng);
  const auto rn = gradcheck::check_normalization_head(g, rng);
  const auto rchain = gradcheck::check_actor_chain(kObs, dc, g, rng);
  const double tol = 1e-4;
  const bool ok = ra.passed(tol) && rc.passed(tol) && rn.passed(tol) && rchain.passed(tol);
  auto fmt = [](const char* what, const gradcheck::Result& r) {
    return std::string(what) + " " + num(r.max_relative_error) + " (" + num(r.checked) +
           " entries, " + num(r.skipped_kinks) + " kinks skipped)";
  };
  return {"backward passes vs central differences", ok,
          fmt("actor", ra) + "; " + fmt("critic", rc) + "; " + fmt("unit head", rn) + "; " + fmt("policy chain", rchain)};
}

inline CheckResult velocity_schedule() {
  const VelocitySchedule s{1.2, 0.4, 15000};
  double worst = 0.0;
  for (long i = 0; i <= 2L * s.v_decay; ++i) {
    // Exact rational form (v0*(D-i) + vt*i)/D before saturation.
    const double expected = i >= s.v_decay ? s.v_target : s.v_target + (s.v0 - s.v_target) * (s.v_decay - i) / s.v_decay;
    worst = std::max(worst, std::abs(velocity_at_epoch(s, i) - expected));
  }
  const double pins[4][2] = {{0, 1.2}, {7500, 0.8}, {15000, 0.4}, {22500, 0.4}};
  double pin_err = 0.0;
  for (const auto& p : pins) pin_err = std::max(pin_err, std::abs(velocity_at_epoch(s, static_cast<long>(p[0])) - p[1]));
  return {"velocity schedule (1.2 -> 0.4 over 15000)", worst <= 1e-12 && pin_err <= 1e-12,
          "max grid error " + num(worst) + ", max pinned error " + num(pin_err)};
}

/// Direct-summation MI of a count table, independent of ActionHistogram.
inline double direct_mi_bits(const std::vector<std::vector<double>>& counts) {
  double total = 0.0;
  std::vector<double> rows(counts.size(), 0.0), cols(counts.front().size(), 0.0);
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < counts[a].size(); ++b) {
      total += counts[a][b];
      rows[a] += counts[a][b];
      cols[b] += counts[a][b];
    }
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < counts[a].size(); ++b) {
      if (counts[a][b] == 0.0) continue;
      const double p = counts[a][b] / total;
      mi += p * std::log2(p / ((rows[a] / total) * (cols[b] / total)));
    }
  }
  return mi;
}

inline double bin_centre(int bin, int bins) {
  return -std::numbers::pi + (bin + 0.5) * 2.0 * std::numbers::pi / bins;
}

/// One two-step trajectory per (bin_i, bin_j) sample: a_0 at t = 0, a_1 at t = 1.
inline std::vector<ActionTrajectory> trajectories_from_bins(std::span<const std::pair<int, int>> samples, int bins) {
  std::vector<ActionTrajectory> out;
  out.reserve(samples.size());
  for (const auto& [a, b] : samples) {
    ActionTrajectory t;
    t.steps = {{bin_centre(a, bins), 0.0}, {0.0, bin_centre(b, bins)}};
    out.push_back(std::move(t));
  }
  return out;
}

inline CheckResult mi_estimator(const Options& opt) {
  constexpr int kBins = 16;
  std::mt19937_64 rng(opt.seed + 3);
  std::uniform_int_distribution<int> bin(0, kBins - 1);

  // Independent uniform: each action drawn afresh per step.
  ActionTrajectory indep;
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int t = 0; t <= 50000; ++t) indep.steps.push_back({angle(rng), angle(rng)});
  const std::vector<ActionTrajectory> indep_v{indep};
  const double mi_indep = instantaneous_coordination(indep_v, 0, 1, kBins);

  // Deterministic copy: a_1^{t+1} = a_0^t with uniform a_0.
  ActionTrajectory copy;
  double prev = 0.0;
  for (int t = 0; t <= 50000; ++t) {
    const double a0 = bin_centre(t % kBins, kBins);
    copy.steps.push_back({a0, prev});
    prev = a0;
  }
  const std::vector<ActionTrajectory> copy_v{copy};
  const double mi_copy = instantaneous_coordination(copy_v, 0, 1, kBins);

  // Hand table {(0,0):40, (0,1):10, (1,0):10, (1,1):40} on 2 bins.
  std::vector<std::pair<int, int>> samples;
  for (int k = 0; k < 40; ++k) samples.push_back({0, 0});
  for (int k = 0; k < 10; ++k) samples.push_back({0, 1});
  for (int k = 0; k < 10; ++k) samples.push_back({1, 0});
  for (int k = 0; k < 40; ++k) samples.push_back({1, 1});
  const auto hand = trajectories_from_bins(samples, 2);
  const double mi_hand = instantaneous_coordination(hand, 0, 1, 2);
  const double oracle = direct_mi_bits({{40, 10}, {10, 40}});

  const bool ok = mi_indep < 0.05 && std::abs(mi_copy - 4.0) <= 0.01 && std::abs(mi_hand - oracle) <= 1e-12;
  return {"mutual information estimator", ok,
          "independent " + num(mi_indep) + " bits; copy " + num(mi_copy) + " bits; hand table " +
              num(mi_hand) + " vs oracle " + num(oracle)};
}

inline std::vector<CheckResult> run_all(const Options& opt = {}) {
  std::vector<std::function<CheckResult()>> checks{
      [] { return evader_case_1(); },
      [] { return evader_case_2(); },
      [&] { return evader_optimality(opt); },
      [&] { return pincer_inner_minimum(opt); },
      [&] { return gradients(opt); },
      [] { return velocity_schedule(); },
      [&] { return mi_estimator(opt); },
  };
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c();
    } catch (const std::exception& e) {
      r = {"(check threw)", false, e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

inline bool report(std::ostream& os, std::span<const CheckResult> results) {
  bool all = true;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << num(r.seconds) << " s]\n";
    all = all && r.passed;
  }
  os << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all;
}

}  // namespace pursuit::selfcheck

#endif  // PURSUIT_SELFCHECK_HPP
