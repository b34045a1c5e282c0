// pursuit: train, evaluate and analyze pursuit-evasion teams.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pursuit/config.hpp"
#include "pursuit/evader.hpp"
#include "pursuit/experiment.hpp"
#include "pursuit/selfcheck.hpp"
#include "pursuit/trajectory_log.hpp"

namespace fs = std::filesystem;
using namespace pursuit;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string ratios;
  std::optional<int> episodes;
};

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0)) throw InvalidArgument("bad ratio '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty ratio list");
  return out;
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) {
    cfg.run.seed = *c.seed;
    cfg.env.seed = *c.seed;
  }
  if (!c.out.empty()) cfg.run.output_dir = c.out;
  if (!c.ratios.empty()) cfg.metrics.ratios = parse_ratio_list(c.ratios);
  if (c.episodes) cfg.metrics.episodes_per_ratio = *c.episodes;
  return cfg;
}

int cmd_train(const Common& c, const std::string& resume, long stop_after, bool quiet) {
  const ExperimentConfig cfg = resolve(c);
  TrainOptions opt;
  opt.out_dir = cfg.run.output_dir;
  if (!resume.empty()) opt.resume = resume;
  opt.stop_after = stop_after;
  opt.progress = quiet ? nullptr : &std::cerr;
  const Trainer t = run_training(cfg, opt);
  std::cout << "trained " << t.next_epoch() << " of " << t.total_epochs() << " epochs; outputs in "
            << opt.out_dir.string() << '\n';
  return 0;
}

int cmd_eval(const Common& c, const std::string& strategy_name, const std::string& checkpoint,
             std::optional<int> seeds, bool logs) {
  ExperimentConfig cfg = resolve(c);
  if (!strategy_name.empty()) cfg.run.strategy = parse_strategy(strategy_name);
  if (seeds) cfg.metrics.eval_seeds = *seeds;
  const fs::path out = cfg.run.output_dir;
  fs::create_directories(out);

  EvalOptions opt;
  opt.ratios = cfg.metrics.ratios;
  opt.episodes = cfg.metrics.episodes_per_ratio;
  opt.seeds = cfg.metrics.eval_seeds;
  std::ofstream log_file;
  if (logs) {
    log_file.open(out / "trajectories.csv", std::ios::binary);
    if (!log_file) throw InvalidArgument("cannot write trajectories.csv");
    opt.log = &log_file;
  }

  std::vector<SuccessRow> rows;
  std::optional<LoadedPolicies> loaded;
  if (!checkpoint.empty()) {
    loaded = load_policies(checkpoint);
    if (loaded->trained_config.env.n_pursuers != cfg.env.n_pursuers) {
      std::cerr << "note: using the checkpoint's pursuer count " << loaded->trained_config.env.n_pursuers << '\n';
      cfg.env.n_pursuers = loaded->trained_config.env.n_pursuers;
    }
    const std::string label(to_string(loaded->trained_config.run.strategy));
    rows = run_eval(cfg, label, [&](std::mt19937_64&) { return make_learned_policy(loaded->agents, loaded->mode); },
                    opt);
  } else {
    if (is_learned(cfg.run.strategy)) throw InvalidArgument("eval: strategy " + std::string(to_string(cfg.run.strategy)) + " needs --checkpoint");
    rows = run_eval(cfg, std::string(to_string(cfg.run.strategy)),
                    [&](std::mt19937_64& rng) { return make_analytic_policy(cfg.run.strategy, cfg, rng); }, opt);
  }
  {
    std::ofstream f(out / "success.csv", std::ios::binary);
    write_success(f, rows);
  }
  write_success(std::cout, rows);
  return 0;
}

int cmd_analyze(const Common& c, const std::string& logs, const std::string& label, bool pointwise) {
  const ExperimentConfig cfg = resolve(c);
  std::ifstream in(logs, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + logs);
  const auto rows = read_trajectory_log(in);
  const AnalysisResult res = analyze_logs(rows, cfg.metrics, label, pointwise);
  const fs::path out = cfg.run.output_dir;
  fs::create_directories(out);
  write_text_file(out / "ic_report.json", res.ic_report.dump(2) + "\n");
  write_text_file(out / "capture_angles.csv", res.capture_angles_csv);
  write_text_file(out / "capture_stats.csv", res.capture_stats_csv);
  {
    std::ofstream f(out / "success.csv", std::ios::binary);
    write_success(f, res.success);
  }
  for (const auto& r : res.ic_report.at("ratios")) {
    std::cout << "ratio " << r.at("ratio").get<double>() << ": mean IC ";
    if (r.at("mean_mi_bits").is_null()) {
      std::cout << "n/a";
    } else {
      std::cout << r.at("mean_mi_bits").get<double>() << " bits, high-influence "
                << r.at("mean_high_influence_fraction").get<double>();
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_selfcheck(std::uint64_t seed, double perturb) {
  selfcheck::Options opt;
  opt.seed = seed;
  opt.gradient_scale = perturb;
  const auto results = selfcheck::run_all(opt);
  return selfcheck::report(std::cout, results) ? 0 : 1;
}

int cmd_evader_check(const std::string& bearings, const std::string& distances) {
  std::mt19937_64 rng(0);
  auto show = [&](const std::string& name, const std::vector<PolarContact>& contacts) {
    const double h = evade_heading(std::span<const PolarContact>(contacts), rng);
    std::cout << name << ": heading " << format_g9(h) << " rad (" << format_g9(h * 180.0 / std::numbers::pi)
              << " deg), cost " << format_g9(evade_cost(h, contacts)) << '\n';
  };
  if (bearings.empty()) {
    const auto c1 = selfcheck::evader_case_1();
    const auto c2 = selfcheck::evader_case_2();
    std::cout << (c1.passed ? "PASS " : "FAIL ") << c1.name << ": " << c1.detail << '\n';
    std::cout << (c2.passed ? "PASS " : "FAIL ") << c2.name << ": " << c2.detail << '\n';
    return c1.passed && c2.passed ? 0 : 1;
  }
  std::vector<double> b, r;
  std::stringstream sb(bearings), sr(distances);
  for (std::string item; std::getline(sb, item, ',');) b.push_back(std::stod(item));
  for (std::string item; std::getline(sr, item, ',');) r.push_back(std::stod(item));
  if (r.empty()) r.assign(b.size(), 1.0);
  if (r.size() != b.size()) throw InvalidArgument("--distances must match --bearings");
  std::vector<PolarContact> contacts;
  for (std::size_t i = 0; i < b.size(); ++i) contacts.push_back({r[i], b[i]});
  show("custom", contacts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pursuit-evasion on the unit torus: training, evaluation and coordination analysis"};
  app.require_subcommand(1);

  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "master seed (overrides run.seed)");
    sub->add_option("--out", c.out, "output directory (overrides run.output_dir)");
  };

  Common train_c, eval_c, analyze_c;
  std::string resume;
  long stop_after = -1;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "train CD-DDPG pursuers over the configured session plan");
  add_common(train, train_c);
  train->add_option("--resume", resume, "checkpoint to resume from")->check(CLI::ExistingFile);
  train->add_option("--stop-after", stop_after, "stop after this many epochs and checkpoint");
  train->add_flag("--quiet", quiet, "no progress lines");

  std::string strategy, checkpoint;
  std::optional<int> seeds;
  bool no_logs = false;
  auto* eval = app.add_subcommand("eval", "capture success over a ratio sweep");
  add_common(eval, eval_c);
  eval->add_option("--ratios", eval_c.ratios, "comma-separated velocity ratios");
  eval->add_option("--episodes", eval_c.episodes, "episodes per ratio and seed");
  eval->add_option("--seeds", seeds, "evaluation seeds per ratio");
  eval->add_option("--strategy", strategy, "greedy | pincer | random | cd_ddpg | cd_ddpg_partial");
  eval->add_option("--checkpoint,--resume", checkpoint, "trained checkpoint for learned strategies")
      ->check(CLI::ExistingFile);
  eval->add_flag("--no-logs", no_logs, "skip trajectories.csv");

  std::string logs, label = "logged";
  bool pointwise = false;
  auto* analyze = app.add_subcommand("analyze", "coordination, capture-angle and success tables from logs");
  add_common(analyze, analyze_c);
  analyze->add_option("--logs", logs, "trajectories.csv from eval")->required()->check(CLI::ExistingFile);
  analyze->add_option("--label", label, "strategy label for success.csv");
  analyze->add_flag("--pointwise", pointwise, "include per-step PMI values in ic_report.json");

  std::uint64_t check_seed = 12345;
  double perturb = 1.0;
  auto* check = app.add_subcommand("selfcheck", "run the built-in numerical checks");
  check->add_option("--seed", check_seed, "seed for the randomized checks");
  check->add_option("--perturb-gradients", perturb, "scale analytic gradients (negative control)");

  std::string bearings, distances;
  auto* evader = app.add_subcommand("evader-check", "evader heading for the reference or a custom contact set");
  evader->add_option("--bearings", bearings, "comma-separated bearings (rad) from evader to pursuers");
  evader->add_option("--distances", distances, "comma-separated distances (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(train_c, resume, stop_after, quiet);
    if (*eval) return cmd_eval(eval_c, strategy, checkpoint, seeds, !no_logs);
    if (*analyze) return cmd_analyze(analyze_c, logs, label, pointwise);
    if (*check) return cmd_selfcheck(check_seed, perturb);
    if (*evader) return cmd_evader_check(bearings, distances);
  } catch (const SchemaError& e) {
    std::cerr << "config error at " << e.path() << ": " << e.what() << '\n';
    return 2;
  } catch (const DigestMismatch& e) {
    std::cerr << "digest mismatch: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
