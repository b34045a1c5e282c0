#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "pursuit/experiment.hpp"

using namespace pursuit;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  return parse_config_text(R"({"schema_version":1,
    "env":{"n_pursuers":2,"episode_length":30},
    "curriculum":{"warmup_epochs":4,"sessions":[
      {"v0":1.2,"v_target":1.1,"v_decay":6,"epochs":6,"use_scripted_warmup":true},
      {"v0":1.1,"v_target":1.0,"v_decay":6,"epochs":6,"use_scripted_warmup":false}]},
    "ddpg":{"batch_size":8,"buffer_capacity":500,"actor_hidden":[8],"critic_hidden":[8]},
    "run":{"seed":5,"strategy":"cd_ddpg","checkpoint_every":0}})");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pursuit_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Seeds, DeriveSeedSeparatesStreams) {
  EXPECT_EQ(derive_seed(1, stream::kEnv), derive_seed(1, stream::kEnv));
  EXPECT_NE(derive_seed(1, stream::kEnv), derive_seed(1, stream::kAgent));
  EXPECT_NE(derive_seed(1, stream::kAgent, 0), derive_seed(1, stream::kAgent, 1));
  EXPECT_NE(derive_seed(1, stream::kEnv), derive_seed(2, stream::kEnv));
}

TEST(Trainer, CurveLayoutAndPhases) {
  Trainer t(tiny_config());
  while (!t.finished()) t.run_epoch();
  ASSERT_EQ(t.curve().size(), 12u);
  EXPECT_EQ(t.curve()[0].phase, BehaviorPhase::Scripted);
  EXPECT_EQ(t.curve()[4].phase, BehaviorPhase::Learned);
  EXPECT_EQ(t.curve()[6].phase, BehaviorPhase::Learned);
  EXPECT_EQ(t.curve()[6].session, 1);
  EXPECT_EQ(t.curve()[6].session_epoch, 0);
  EXPECT_DOUBLE_EQ(t.curve()[0].ratio, 1.2);
  EXPECT_DOUBLE_EQ(t.curve()[6].ratio, 1.1);
  for (const auto& r : t.curve()) {
    const double expected = r.captured ? -0.1 * (r.steps - 1) + 50.0 : -0.1 * r.steps;
    EXPECT_NEAR(r.mean_return, expected, 1e-9);
  }
  std::ostringstream out;
  write_curve(out, t.curve());
  EXPECT_EQ(out.str().rfind("# pursuit-training-curve v1\nepoch,session,", 0), 0u);
  EXPECT_THROW(t.run_epoch(), ContractViolation);
}

TEST(Trainer, RejectsAnalyticStrategy) {
  auto c = tiny_config();
  c.run.strategy = Strategy::Greedy;
  EXPECT_THROW(Trainer{c}, InvalidArgument);
}

TEST(Training, DeterministicBytes) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_training(tiny_config(), {a, std::nullopt, -1, nullptr});
  run_training(tiny_config(), {b, std::nullopt, -1, nullptr});
  EXPECT_EQ(slurp(a / "training_curve.csv"), slurp(b / "training_curve.csv"));
  EXPECT_EQ(slurp(a / "checkpoint.json"), slurp(b / "checkpoint.json"));
  auto other = tiny_config();
  other.run.seed = 6;
  const auto c = scratch("det_c");
  run_training(other, {c, std::nullopt, -1, nullptr});
  EXPECT_NE(slurp(a / "training_curve.csv"), slurp(c / "training_curve.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST(Training, ResumeMatchesUninterrupted) {
  const auto full = scratch("full"), part = scratch("part");
  run_training(tiny_config(), {full, std::nullopt, -1, nullptr});
  // Stop mid-warm-up, then again inside session 1.
  run_training(tiny_config(), {part, std::nullopt, 3, nullptr});
  const fs::path ck = part / "checkpoint.json";
  const fs::path copy = part / "resume_from.json";
  fs::copy_file(ck, copy);
  run_training(tiny_config(), {part, copy, 5, nullptr});
  fs::copy_file(ck, copy, fs::copy_options::overwrite_existing);
  const Trainer t = run_training(tiny_config(), {part, copy, -1, nullptr});
  EXPECT_TRUE(t.finished());
  EXPECT_EQ(slurp(full / "training_curve.csv"), slurp(part / "training_curve.csv"));
  EXPECT_EQ(slurp(full / "checkpoint.json"), slurp(part / "checkpoint.json"));
  fs::remove_all(full);
  fs::remove_all(part);
}

TEST(Training, DigestMismatchOnResume) {
  const auto dir = scratch("digest");
  run_training(tiny_config(), {dir, std::nullopt, 2, nullptr});
  auto changed = tiny_config();
  changed.ddpg.tau = 0.5;
  EXPECT_THROW(run_training(changed, {dir / "x", dir / "checkpoint.json", -1, nullptr}), DigestMismatch);
  // Output-only fields do not count.
  auto moved = tiny_config();
  moved.run.output_dir = "somewhere/else";
  EXPECT_NO_THROW(run_training(moved, {dir / "y", dir / "checkpoint.json", 1, nullptr}));
  fs::remove_all(dir);
}

TEST(Training, CheckpointWithoutBufferCannotResume) {
  const auto dir = scratch("nobuf");
  auto c = tiny_config();
  c.run.checkpoint_buffer = false;
  run_training(c, {dir, std::nullopt, 2, nullptr});
  EXPECT_THROW(run_training(c, {dir / "r", dir / "checkpoint.json", -1, nullptr}), InvalidArgument);
  // Still usable for evaluation.
  const auto loaded = load_policies(dir / "checkpoint.json");
  EXPECT_EQ(loaded.agents.size(), 2u);
  fs::remove_all(dir);
}

TEST(Eval, GreedySweepShapeAndDeterminism) {
  auto c = tiny_config();
  c.env.episode_length = 500;
  c.env.n_pursuers = 3;
  EvalOptions opt;
  opt.ratios = {1.1, 0.5};
  opt.episodes = 20;
  auto make = [&](std::mt19937_64& rng) { return make_analytic_policy(Strategy::Greedy, c, rng); };
  const auto a = run_eval(c, "greedy", make, opt);
  const auto b = run_eval(c, "greedy", make, opt);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].captures, b[0].captures);
  EXPECT_EQ(a[0].episodes, 20);
  EXPECT_GE(a[0].success_rate(), a[1].success_rate());
  std::ostringstream out;
  write_success(out, a);
  EXPECT_EQ(out.str().rfind("# pursuit-success v1\nstrategy,ratio,episodes,captures,success_rate,mean_steps\ngreedy,1.1,20,", 0), 0u);
}

TEST(Eval, LearnedPolicyFromCheckpoint) {
  const auto dir = scratch("learned");
  run_training(tiny_config(), {dir, std::nullopt, -1, nullptr});
  const auto loaded = load_policies(dir / "checkpoint.json");
  EXPECT_EQ(loaded.agents[0].buffer().size(), 0u);
  EvalOptions opt;
  opt.ratios = {1.0};
  opt.episodes = 3;
  auto cfg = loaded.trained_config;
  const auto rows =
      run_eval(cfg, "cd_ddpg", [&](std::mt19937_64&) { return make_learned_policy(loaded.agents, loaded.mode); }, opt);
  EXPECT_EQ(rows[0].episodes, 3);
  fs::remove_all(dir);
}

TEST(Analyze, LogsReproduceEvalSuccessAndRandomIcIsSmall) {
  auto c = tiny_config();
  c.env.n_pursuers = 3;
  c.env.episode_length = 200;
  EvalOptions opt;
  opt.ratios = {1.2, 0.8};
  opt.episodes = 60;
  std::ostringstream log;
  opt.log = &log;
  const auto rows = run_eval(c, "random", [&](std::mt19937_64& rng) { return make_analytic_policy(Strategy::Random, c, rng); }, opt);
  const auto parsed = read_trajectory_log_text(log.str());
  const auto res = analyze_logs(parsed, c.metrics, "random", true);
  ASSERT_EQ(res.success.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(res.success[k].captures, rows[k].captures);
    EXPECT_EQ(res.success[k].episodes, rows[k].episodes);
    EXPECT_NEAR(res.success[k].mean_steps, rows[k].mean_steps, 1e-12);
  }
  const auto& rep = res.ic_report;
  EXPECT_EQ(rep.at("schema"), "pursuit-ic-report");
  for (const auto& r : rep.at("ratios")) {
    EXPECT_EQ(r.at("pairs").size(), 6u);
    EXPECT_LT(r.at("mean_mi_bits").get<double>(), 0.05);
    EXPECT_TRUE(r.at("pairs")[0].contains("pointwise_bits"));
  }
  EXPECT_EQ(res.capture_angles_csv.rfind("# pursuit-capture-angles v1\nratio,pursuer,bin,", 0), 0u);
}

TEST(Analyze, CopycatLogsGiveFourBits) {
  // p1 repeats p0's previous heading exactly. Each episode feeds every bin
  // to the pairs 30 times, so the pooled marginals are exactly uniform.
  std::ostringstream log;
  TrajectoryWriter w(log);
  std::mt19937_64 rng(3);
  const double width = 2.0 * std::numbers::pi / 16;
  for (int ep = 0; ep < 20; ++ep) {
    std::vector<int> seq;
    for (int b = 0; b < 16; ++b) seq.insert(seq.end(), 30, b);
    std::shuffle(seq.begin(), seq.end(), rng);
    seq.push_back(0);
    WorldState s;
    s.pursuers = {{Point2(0.1, 0.1), 0.0}, {Point2(0.2, 0.2), 0.0}};
    s.evader = {Point2(0.7, 0.7), 0.0};
    double prev = 0.0;
    for (int t = 1; t <= static_cast<int>(seq.size()); ++t) {
      s.step = t;
      const double a0 = -std::numbers::pi + (seq[static_cast<std::size_t>(t - 1)] + 0.5) * width;
      const std::vector<double> acts{a0, prev};
      prev = a0;
      StepOutcome o;
      o.rewards = {-0.1, -0.1};
      w.write_step(ep, s, acts, o, 0.9);
    }
  }
  MetricsConfig m;
  const auto res = analyze_logs(read_trajectory_log_text(log.str()), m, "copy");
  const auto& pairs = res.ic_report.at("ratios")[0].at("pairs");
  EXPECT_EQ(pairs[0].at("from"), "p0");
  EXPECT_NEAR(pairs[0].at("mi_bits").get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(pairs[0].at("high_influence_fraction").get<double>(), 0.0, 1e-12);
}
