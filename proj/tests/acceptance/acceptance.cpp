// Acceptance runner: one PASS/FAIL line per criterion, exit code 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pursuit/experiment.hpp"
#include "pursuit/selfcheck.hpp"

using namespace pursuit;
namespace fs = std::filesystem;
using selfcheck::num;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_root() {
  const fs::path p = fs::temp_directory_path() / ("pursuit_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Runs the real CLI so criteria 8 and 9 cover the shipped command path.
void cli_train(const std::string& config, const fs::path& out) {
  const std::string cmd = std::string("\"") + PURSUIT_CLI + "\" train --quiet --config \"" +
                          (fs::path(PURSUIT_CONFIG_DIR) / config).string() + "\" --out \"" + out.string() + "\"";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + cmd);
}

struct CurveSummary {
  long epochs = 0;
  long warmup_rows = 0;
  int learned_captures = 0;
  int all_captures = 0;
  bool all_minus_twenty = true;
};

CurveSummary summarize_curve(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);  // version
  std::getline(in, line);  // header
  CurveSummary s;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 8) throw std::runtime_error("short curve row: " + line);
    const double ret = std::stod(f[5]);
    const bool captured = f[6] == "1";
    ++s.epochs;
    s.all_captures += captured ? 1 : 0;
    s.all_minus_twenty = s.all_minus_twenty && std::abs(ret + 20.0) < 1e-9;
    if (f[4] == "scripted") {
      ++s.warmup_rows;
    } else {
      s.learned_captures += captured ? 1 : 0;
    }
  }
  return s;
}

double warmup_mean_return(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  double sum = 0.0;
  long n = 0;
  while (std::getline(in, line)) {
    if (line.find(",scripted,") == std::string::npos) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    sum += std::stod(f[5]);
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

// ------------------------------------------------------------- criteria

Verdict c1_evader_cases() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = selfcheck::evader_case_1();
  const auto b = selfcheck::evader_case_2();
  const double t = seconds_since(t0);
  return {a.passed && b.passed && t < 1.0, a.detail + "; " + b.detail + "; " + num(t) + " s"};
}

Verdict c2_evader_grid() {
  selfcheck::Options o;
  o.random_states = 1000;
  const auto r = selfcheck::evader_optimality(o);
  return {r.passed, r.detail};
}

Verdict c3_pincer() {
  selfcheck::Options o;
  o.random_states = 1000;
  const auto r = selfcheck::pincer_inner_minimum(o);
  return {r.passed, r.detail};
}

Verdict c4_analytic_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = load_config((fs::path(PURSUIT_CONFIG_DIR) / "analytic_sweep.json").string());
  EvalOptions opt;
  opt.ratios = {1.1, 1.0, 0.9, 0.7};
  opt.episodes = 100;
  std::map<std::string, std::map<double, double>> rate;
  for (Strategy s : {Strategy::Greedy, Strategy::Pincer}) {
    const std::string label(to_string(s));
    const auto rows =
        run_eval(cfg, label, [&](std::mt19937_64& rng) { return make_analytic_policy(s, cfg, rng); }, opt);
    for (const auto& r : rows) rate[label][r.ratio] = r.success_rate();
  }
  const double t = seconds_since(t0);
  auto& g = rate["greedy"];
  auto& p = rate["pincer"];
  const bool ok = g[1.1] >= 0.9 && g[0.9] <= 0.1 && p[1.0] >= g[1.0] && p[0.7] <= 0.1 && t < 600.0;
  std::string detail;
  for (double v : opt.ratios) detail += "r=" + num(v) + " greedy " + num(g[v]) + " pincer " + num(p[v]) + "; ";
  return {ok, detail + num(t) + " s"};
}

Verdict c5_gradients() {
  selfcheck::Options o;
  o.gradient_probes = 100;
  const auto r = selfcheck::gradients(o);
  return {r.passed, r.detail};
}

Verdict c6_schedule() {
  const auto r = selfcheck::velocity_schedule();
  return {r.passed, r.detail};
}

Verdict c7_mi() {
  const auto r = selfcheck::mi_estimator({});
  return {r.passed, r.detail};
}

struct SmokeRuns {
  fs::path cd_a, cd_b, nc;
  double seconds_cd = 0.0, seconds_nc = 0.0;
};

Verdict c8_smoke(const SmokeRuns& runs) {
  const auto nc = summarize_curve(runs.nc / "training_curve.csv");
  const auto cd = summarize_curve(runs.cd_a / "training_curve.csv");
  const auto nc_cfg = load_config((runs.nc / "config.json").string());
  const double nc_ratio = nc_cfg.curriculum.sessions.front().v0;
  const double warm_mean = warmup_mean_return(runs.cd_a / "training_curve.csv");
  const double t = std::max(runs.seconds_cd, runs.seconds_nc);
  const bool nc_ok = nc.epochs == 300 && nc.all_minus_twenty && nc.all_captures == 0 && std::abs(nc_ratio - 0.7) < 1e-12;
  const bool cd_ok = cd.epochs == 300 && cd.warmup_rows > 0 && warm_mean > 0.0 && cd.learned_captures >= 1;
  return {nc_ok && cd_ok && t < 1800.0,
          "no-curriculum at " + num(nc_ratio) + ": " + num(static_cast<double>(nc.all_captures)) +
              " captures, constant -20 " + (nc.all_minus_twenty ? "yes" : "no") + "; cd-ddpg warm-up mean return " +
              num(warm_mean) + " over " + num(static_cast<double>(cd.warmup_rows)) + " epochs, " +
              num(static_cast<double>(cd.learned_captures)) + " captures after warm-up; slowest run " + num(t) + " s"};
}

Verdict c9_determinism(const SmokeRuns& runs) {
  const std::string a = slurp(runs.cd_a / "training_curve.csv");
  const std::string b = slurp(runs.cd_b / "training_curve.csv");
  return {!a.empty() && a == b, num(static_cast<double>(a.size())) + " bytes, identical " + (a == b ? "yes" : "no")};
}

// Independent uniform actions: pointwise MI is roughly symmetric about the
// plug-in mean, so about half of the steps sit above it.
constexpr double kIndependentBandLo = 0.40;
constexpr double kIndependentBandHi = 0.60;

Verdict c10_estimator_sanity() {
  auto cfg = load_config((fs::path(PURSUIT_CONFIG_DIR) / "analytic_sweep.json").string());
  EvalOptions opt;
  opt.ratios = cfg.metrics.ratios;
  opt.episodes = cfg.metrics.episodes_per_ratio;
  std::ostringstream log;
  opt.log = &log;
  run_eval(cfg, "random", [&](std::mt19937_64& rng) { return make_analytic_policy(Strategy::Random, cfg, rng); },
           opt);
  const auto res = analyze_logs(read_trajectory_log_text(log.str()), cfg.metrics, "random");
  double worst_ic = 0.0;
  for (const auto& r : res.ic_report.at("ratios")) {
    for (const auto& p : r.at("pairs")) worst_ic = std::max(worst_ic, p.at("mi_bits").get<double>());
  }

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  ActionTrajectory indep;
  for (int t = 0; t <= 50000; ++t) indep.steps.push_back({angle(rng), angle(rng)});
  const std::vector<ActionTrajectory> v{indep};
  const double frac = high_influence_fraction(v, 0, 1, cfg.metrics.heading_bins);

  // Degenerate end: a balanced copy has constant PMI and no high-influence steps.
  ActionTrajectory copy;
  double prev = 0.0;
  for (int t = 0; t <= 16 * 3125; ++t) {
    const double a0 = selfcheck::bin_centre(t % 16, 16);
    copy.steps.push_back({a0, prev});
    prev = a0;
  }
  const std::vector<ActionTrajectory> c{copy};
  const double frac_copy = high_influence_fraction(c, 0, 1, 16);

  const bool ok = worst_ic < 0.05 && frac >= kIndependentBandLo && frac <= kIndependentBandHi && frac_copy == 0.0;
  return {ok, "random team max pair IC " + num(worst_ic) + " bits over " +
                  num(static_cast<double>(opt.ratios.size())) + " ratios; independent high-influence fraction " +
                  num(frac) + " (band " + num(kIndependentBandLo) + ".." + num(kIndependentBandHi) +
                  "); balanced copy " + num(frac_copy)};
}

}  // namespace

int main() {
  const fs::path root = scratch_root();
  SmokeRuns runs{root / "cd_a", root / "cd_b", root / "nc"};
  bool smoke_ready = true;
  std::string smoke_error;
  try {
    auto t0 = std::chrono::steady_clock::now();
    cli_train("smoke_cd_ddpg.json", runs.cd_a);
    runs.seconds_cd = seconds_since(t0);
    cli_train("smoke_cd_ddpg.json", runs.cd_b);
    t0 = std::chrono::steady_clock::now();
    cli_train("smoke_no_curriculum.json", runs.nc);
    runs.seconds_nc = seconds_since(t0);
  } catch (const std::exception& e) {
    smoke_ready = false;
    smoke_error = e.what();
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 evader reference cases", c1_evader_cases},
      {"2 evader closed form vs grid", c2_evader_grid},
      {"3 pincer inner minimum and enumeration", c3_pincer},
      {"4 analytic capture-success sweep", c4_analytic_sweep},
      {"5 gradient checks", c5_gradients},
      {"6 velocity schedule", c6_schedule},
      {"7 mutual information estimator", c7_mi},
      {"8 smoke training", [&] { return smoke_ready ? c8_smoke(runs) : Verdict{false, smoke_error}; }},
      {"9 training determinism", [&] { return smoke_ready ? c9_determinism(runs) : Verdict{false, smoke_error}; }},
      {"10 estimator sanity", c10_estimator_sanity},
  };

  // ctest hides stdout of passing tests, so keep a copy next to the build.
  std::ofstream report("acceptance_report.txt");
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const std::string line = std::string(v.passed ? "PASS" : "FAIL") + " criterion " + name + ": " + v.detail +
                             " [" + num(seconds_since(t0)) + " s]";
    std::cout << line << std::endl;
    report << line << '\n';
    all = all && v.passed;
  }
  fs::remove_all(root);
  return all ? 0 : 1;
}
