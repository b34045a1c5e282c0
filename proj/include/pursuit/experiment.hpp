#ifndef PURSUIT_EXPERIMENT_HPP
#define PURSUIT_EXPERIMENT_HPP

// Training, evaluation sweeps and log analysis. Every random stream is
// derived from the master seed, so a (config, seed) pair fixes every output
// byte.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pursuit/analytic_pursuit.hpp"
#include "pursuit/checkpoint.hpp"
#include "pursuit/config.hpp"
#include "pursuit/curriculum.hpp"
#include "pursuit/ddpg.hpp"
#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/metrics.hpp"
#include "pursuit/trajectory_log.hpp"

namespace pursuit {

namespace fs = std::filesystem;

/// splitmix64 finalizer; mixes (seed, stream tag, index) into one engine seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ stream) ^ index);
}

namespace stream {
inline constexpr std::uint64_t kEnv = 1;
inline constexpr std::uint64_t kAgentInit = 2;
inline constexpr std::uint64_t kAgent = 3;
inline constexpr std::uint64_t kEvalEnv = 4;
inline constexpr std::uint64_t kEvalPolicy = 5;
}  // namespace stream

// ---------------------------------------------------------------- training

struct CurveRow {
  long epoch = 0;
  int session = 0;
  long session_epoch = 0;
  double ratio = 0.0;
  BehaviorPhase phase = BehaviorPhase::Learned;
  double mean_return = 0.0;
  bool captured = false;
  int steps = 0;
  double critic_loss = std::numeric_limits<double>::quiet_NaN();  // mean over this epoch's updates
  double actor_q = std::numeric_limits<double>::quiet_NaN();
  long updates = 0;
};

inline constexpr std::string_view kCurveVersionLine = "# pursuit-training-curve v1";
inline constexpr std::string_view kCurveHeader =
    "epoch,session,session_epoch,ratio,phase,mean_return,captured,steps,critic_loss,actor_q,updates";

inline std::string format_optional(double v) { return std::isfinite(v) ? format_g9(v) : std::string("nan"); }

inline void write_curve(std::ostream& out, std::span<const CurveRow> rows) {
  out << kCurveVersionLine << '\n' << kCurveHeader << '\n';
  for (const auto& r : rows) {
    out << r.epoch << ',' << r.session << ',' << r.session_epoch << ',' << format_g9(r.ratio) << ','
        << to_string(r.phase) << ',' << format_g9(r.mean_return) << ',' << (r.captured ? 1 : 0) << ',' << r.steps
        << ',' << format_optional(r.critic_loss) << ',' << format_optional(r.actor_q) << ',' << r.updates << '\n';
  }
}

inline nlohmann::json encode_curve_row(const CurveRow& r) {
  return {r.epoch,      r.session,  r.session_epoch, r.ratio, std::string(to_string(r.phase)), r.mean_return,
          r.captured,   r.steps,    std::isfinite(r.critic_loss) ? nlohmann::json(r.critic_loss) : nlohmann::json(),
          std::isfinite(r.actor_q) ? nlohmann::json(r.actor_q) : nlohmann::json(), r.updates};
}

inline CurveRow decode_curve_row(const nlohmann::json& j) {
  CurveRow r;
  r.epoch = j.at(0).get<long>();
  r.session = j.at(1).get<int>();
  r.session_epoch = j.at(2).get<long>();
  r.ratio = j.at(3).get<double>();
  r.phase = j.at(4).get<std::string>() == "scripted" ? BehaviorPhase::Scripted : BehaviorPhase::Learned;
  r.mean_return = j.at(5).get<double>();
  r.captured = j.at(6).get<bool>();
  r.steps = j.at(7).get<int>();
  r.critic_loss = j.at(8).is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at(8).get<double>();
  r.actor_q = j.at(9).is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at(9).get<double>();
  r.updates = j.at(10).get<long>();
  return r;
}

/// Decentralized CD-DDPG training over a session plan. One learner per
/// pursuer; learners never see each other's parameters or buffers.
class Trainer {
 public:
  explicit Trainer(ExperimentConfig config)
      : config_(std::move(config)), digest_(config_digest(config_)), env_(env_config(config_)) {
    if (!is_learned(config_.run.strategy)) {
      throw InvalidArgument("train: strategy must be cd_ddpg or cd_ddpg_partial, got " +
                            std::string(to_string(config_.run.strategy)));
    }
    config_.curriculum.validate();
    mode_ = observation_mode(config_.run.strategy);
    const int obs_dim = observation_size(mode_, config_.env.n_pursuers);
    for (int i = 0; i < config_.env.n_pursuers; ++i) {
      std::mt19937_64 init(derive_seed(config_.run.seed, stream::kAgentInit, static_cast<std::uint64_t>(i)));
      agents_.emplace_back(obs_dim, config_.ddpg, init);
      agent_rngs_.emplace_back(derive_seed(config_.run.seed, stream::kAgent, static_cast<std::uint64_t>(i)));
    }
  }

  const ExperimentConfig& config() const noexcept { return config_; }
  const std::string& digest() const noexcept { return digest_; }
  long next_epoch() const noexcept { return next_epoch_; }
  long total_epochs() const { return config_.curriculum.total_epochs(); }
  bool finished() const { return next_epoch_ >= total_epochs(); }
  const std::vector<CurveRow>& curve() const noexcept { return curve_; }
  const std::vector<AgentLearner>& agents() const noexcept { return agents_; }
  ObservationMode mode() const noexcept { return mode_; }

  /// (session index, epoch within the session) of a global epoch.
  std::pair<int, long> locate(long epoch) const {
    long start = 0;
    const auto& sessions = config_.curriculum.sessions;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
      if (epoch < start + sessions[s].epochs) return {static_cast<int>(s), epoch - start};
      start += sessions[s].epochs;
    }
    throw InvalidArgument("epoch beyond the session plan");
  }

  CurveRow run_epoch() {
    if (finished()) throw ContractViolation("train: session plan already complete");
    const auto [session, local] = locate(next_epoch_);
    const Session& sess = config_.curriculum.sessions[static_cast<std::size_t>(session)];
    CurveRow row;
    row.epoch = next_epoch_;
    row.session = session;
    row.session_epoch = local;
    row.ratio = velocity_at_epoch(sess.schedule(), local);
    row.phase = behavior_for_epoch(config_.curriculum, static_cast<std::size_t>(session), local);

    env_.set_velocity_ratio(row.ratio);
    env_.reset();
    for (auto& a : agents_) a.reset_noise();

    const std::size_t n = agents_.size();
    std::vector<double> headings(n);
    std::vector<Observation> obs(n);
    double loss_sum = 0.0, q_sum = 0.0;
    double total_reward = 0.0;
    StepOutcome outcome;
    while (!env_.done()) {
      const WorldState& s = env_.state();
      for (std::size_t i = 0; i < n; ++i) {
        obs[i] = observe(s, static_cast<int>(i), mode_);
        headings[i] = row.phase == BehaviorPhase::Scripted ? scripted_action(s.pursuers[i], s.evader.position)
                                                           : agents_[i].act_explore(obs[i], agent_rngs_[i]);
      }
      outcome = env_.step(headings);
      const WorldState& next = env_.state();
      for (std::size_t i = 0; i < n; ++i) {
        Transition t;
        t.obs = std::move(obs[i]);
        t.action = heading_action(next.pursuers[i].heading);
        t.reward = outcome.rewards[i];
        t.next_obs = observe(next, static_cast<int>(i), mode_);
        t.terminal = outcome.captured;
        total_reward += t.reward;
        agents_[i].remember(std::move(t));
        if (auto stats = agents_[i].train_step(agent_rngs_[i])) {
          loss_sum += stats->first;
          q_sum += stats->second;
          ++row.updates;
        }
      }
    }
    row.steps = env_.state().step;
    row.captured = outcome.captured;
    row.mean_return = total_reward / static_cast<double>(n);
    if (row.updates > 0) {
      row.critic_loss = loss_sum / static_cast<double>(row.updates);
      row.actor_q = q_sum / static_cast<double>(row.updates);
    }
    curve_.push_back(row);
    ++next_epoch_;
    return row;
  }

  nlohmann::json checkpoint() const {
    nlohmann::json agents = nlohmann::json::array();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      auto a = ckpt::encode(agents_[i], config_.run.checkpoint_buffer);
      a["rng"] = ckpt::encode_rng(agent_rngs_[i]);
      agents.push_back(std::move(a));
    }
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& r : curve_) curve.push_back(encode_curve_row(r));
    const auto [session, local] = finished() ? std::pair<int, long>{static_cast<int>(config_.curriculum.sessions.size()), 0}
                                             : locate(next_epoch_);
    return {{"schema", ckpt::kCheckpointSchema},
            {"schema_version", ckpt::kCheckpointSchemaVersion},
            {"config_digest", digest_},
            {"config", to_json(config_)},
            {"position", {{"next_epoch", next_epoch_}, {"session", session}, {"session_epoch", local}}},
            {"env_rng", ckpt::encode_rng(env_.rng())},
            {"agents", std::move(agents)},
            {"curve", std::move(curve)}};
  }

  /// Restores a checkpoint written under the same config digest.
  void restore(const nlohmann::json& j) {
    check_checkpoint_header(j);
    if (j.at("config_digest").get<std::string>() != digest_) {
      throw DigestMismatch("checkpoint was written with config digest " + j.at("config_digest").get<std::string>() +
                           ", current config has " + digest_);
    }
    const auto& agents = j.at("agents");
    if (agents.size() != agents_.size()) throw ShapeMismatch("checkpoint: pursuer count differs");
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (!agents[i].contains("buffer")) {
        throw InvalidArgument("checkpoint has no replay buffer and cannot resume training");
      }
      ckpt::restore(agents[i], agents_[i]);
      ckpt::decode_rng(agents[i].at("rng"), agent_rngs_[i]);
    }
    ckpt::decode_rng(j.at("env_rng"), env_.rng());
    next_epoch_ = j.at("position").at("next_epoch").get<long>();
    curve_.clear();
    for (const auto& r : j.at("curve")) curve_.push_back(decode_curve_row(r));
    if (static_cast<long>(curve_.size()) != next_epoch_) throw InvalidArgument("checkpoint: curve length mismatch");
  }

  static void check_checkpoint_header(const nlohmann::json& j) {
    if (!j.is_object() || j.value("schema", std::string()) != ckpt::kCheckpointSchema) {
      throw InvalidArgument("not a pursuit checkpoint");
    }
    if (j.at("schema_version").get<int>() != ckpt::kCheckpointSchemaVersion) {
      throw InvalidArgument("unsupported checkpoint version " + j.at("schema_version").dump());
    }
  }

 private:
  static EnvConfig env_config(const ExperimentConfig& c) {
    EnvConfig e = c.env;
    e.seed = derive_seed(c.run.seed, stream::kEnv);
    return e;
  }

  ExperimentConfig config_;
  std::string digest_;
  Environment env_;
  ObservationMode mode_ = ObservationMode::Full;
  std::vector<AgentLearner> agents_;
  std::vector<std::mt19937_64> agent_rngs_;
  long next_epoch_ = 0;
  std::vector<CurveRow> curve_;
};

struct TrainOptions {
  fs::path out_dir;
  std::optional<fs::path> resume;
  long stop_after = -1;  // epochs to run in this invocation; < 0 runs to the end
  std::ostream* progress = nullptr;
};

inline void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

inline void write_curve_file(const fs::path& path, std::span<const CurveRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  write_curve(out, rows);
}

/// Runs (or resumes) training; writes training_curve.csv, checkpoint.json and
/// config.json into the output directory. Returns the trainer for inspection.
inline Trainer run_training(const ExperimentConfig& config, const TrainOptions& opt) {
  Trainer trainer(config);
  if (opt.resume) trainer.restore(ckpt::read_json(*opt.resume));
  fs::create_directories(opt.out_dir);
  write_text_file(opt.out_dir / "config.json", to_json(config).dump(2) + "\n");

  auto save = [&] {
    ckpt::write_json_atomic(opt.out_dir / "checkpoint.json", trainer.checkpoint());
    write_curve_file(opt.out_dir / "training_curve.csv", trainer.curve());
  };
  long ran = 0;
  const int every = config.run.checkpoint_every;
  while (!trainer.finished() && (opt.stop_after < 0 || ran < opt.stop_after)) {
    const CurveRow row = trainer.run_epoch();
    ++ran;
    if (opt.progress && (row.epoch % 50 == 0 || trainer.finished())) {
      *opt.progress << "epoch " << row.epoch << " ratio " << format_g9(row.ratio) << ' ' << to_string(row.phase)
                    << " return " << format_g9(row.mean_return) << (row.captured ? " captured" : "") << '\n';
    }
    if (every > 0 && trainer.next_epoch() % every == 0) save();
  }
  save();
  return trainer;
}

// -------------------------------------------------------------- evaluation

/// Joint heading choice for a team given the pre-step world.
using TeamPolicy = std::function<std::vector<double>(const WorldState&)>;

inline TeamPolicy make_analytic_policy(Strategy s, const ExperimentConfig& cfg, std::mt19937_64& rng) {
  switch (s) {
    case Strategy::Greedy:
      return [](const WorldState& w) { return greedy_headings(w); };
    case Strategy::Pincer:
      return [opts = cfg.pursuit.pincer_options()](const WorldState& w) { return pincer_headings(w, opts); };
    case Strategy::Random:
      return [&rng](const WorldState& w) {
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        std::vector<double> h(w.pursuers.size());
        for (auto& v : h) v = angle(rng);
        return h;
      };
    default:
      throw InvalidArgument("strategy " + std::string(to_string(s)) + " needs a checkpoint");
  }
}

/// Frozen learned policies (no exploration noise).
inline TeamPolicy make_learned_policy(const std::vector<AgentLearner>& agents, ObservationMode mode) {
  return [&agents, mode](const WorldState& w) {
    if (w.pursuers.size() != agents.size()) throw ShapeMismatch("eval: pursuer count differs from checkpoint");
    std::vector<double> h(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) h[i] = agents[i].act(observe(w, static_cast<int>(i), mode));
    return h;
  };
}

struct SuccessRow {
  std::string strategy;
  double ratio = 0.0;
  int episodes = 0;
  int captures = 0;
  double mean_steps = 0.0;

  double success_rate() const { return episodes > 0 ? static_cast<double>(captures) / episodes : 0.0; }
};

inline constexpr std::string_view kSuccessVersionLine = "# pursuit-success v1";
inline constexpr std::string_view kSuccessHeader = "strategy,ratio,episodes,captures,success_rate,mean_steps";

inline void write_success(std::ostream& out, std::span<const SuccessRow> rows) {
  out << kSuccessVersionLine << '\n' << kSuccessHeader << '\n';
  for (const auto& r : rows) {
    out << r.strategy << ',' << format_g9(r.ratio) << ',' << r.episodes << ',' << r.captures << ','
        << format_g9(r.success_rate()) << ',' << format_g9(r.mean_steps) << '\n';
  }
}

struct EvalOptions {
  std::vector<double> ratios;
  int episodes = 100;
  int seeds = 1;
  std::ostream* log = nullptr;  // trajectory CSV, optional
};

/// Runs `episodes` episodes for each of `seeds` evaluation seeds at every
/// ratio. Seed s uses the same start states at every ratio.
inline std::vector<SuccessRow> run_eval(const ExperimentConfig& cfg, const std::string& label,
                                        const std::function<TeamPolicy(std::mt19937_64&)>& make_policy,
                                        const EvalOptions& opt) {
  if (opt.ratios.empty()) throw InvalidArgument("eval: no ratios");
  if (opt.episodes < 1 || opt.seeds < 1) throw InvalidArgument("eval: episodes and seeds must be >= 1");
  std::optional<TrajectoryWriter> writer;
  if (opt.log) writer.emplace(*opt.log);
  std::vector<SuccessRow> rows;
  std::int64_t episode_id = 0;
  for (double ratio : opt.ratios) {
    SuccessRow row{label, ratio, 0, 0, 0.0};
    long step_sum = 0;
    for (int s = 0; s < opt.seeds; ++s) {
      EnvConfig ec = cfg.env;
      ec.velocity_ratio = ratio;
      ec.seed = derive_seed(cfg.run.seed, stream::kEvalEnv, static_cast<std::uint64_t>(s));
      Environment env(ec);
      std::mt19937_64 policy_rng(derive_seed(cfg.run.seed, stream::kEvalPolicy, static_cast<std::uint64_t>(s)));
      const TeamPolicy policy = make_policy(policy_rng);
      for (int e = 0; e < opt.episodes; ++e, ++episode_id) {
        env.reset();
        StepOutcome outcome;
        while (!env.done()) {
          const std::vector<double> h = policy(env.state());
          outcome = env.step(h);
          if (writer) writer->write_step(episode_id, env.state(), h, outcome, ratio);
        }
        ++row.episodes;
        row.captures += outcome.captured ? 1 : 0;
        step_sum += env.state().step;
      }
    }
    row.mean_steps = static_cast<double>(step_sum) / row.episodes;
    rows.push_back(row);
  }
  return rows;
}

/// Policies restored from a training checkpoint.
struct LoadedPolicies {
  ExperimentConfig trained_config;
  ObservationMode mode = ObservationMode::Full;
  std::vector<AgentLearner> agents;
};

inline LoadedPolicies load_policies(const fs::path& path) {
  const nlohmann::json j = ckpt::read_json(path);
  Trainer::check_checkpoint_header(j);
  LoadedPolicies out{parse_config(j.at("config")), ObservationMode::Full, {}};
  if (config_digest(out.trained_config) != j.at("config_digest").get<std::string>()) {
    throw DigestMismatch("checkpoint digest does not match its embedded config");
  }
  out.mode = observation_mode(out.trained_config.run.strategy);
  const int obs_dim = observation_size(out.mode, out.trained_config.env.n_pursuers);
  std::mt19937_64 dummy(0);
  DdpgConfig dc = out.trained_config.ddpg;
  dc.buffer_capacity = std::max<std::size_t>(dc.batch_size, 1);  // buffers are not needed for evaluation
  nlohmann::json agents = j.at("agents");
  for (auto& a : agents) {
    a.erase("buffer");
    out.agents.emplace_back(obs_dim, dc, dummy);
    ckpt::restore(a, out.agents.back());
  }
  return out;
}

// ---------------------------------------------------------------- analysis

inline constexpr int kIcReportSchemaVersion = 1;

inline constexpr const char* kPmiInterpretation =
    "Per-step influence is the pointwise mutual information of each (a_i^t, a_j^{t+1}) pair under the pooled "
    "histogram; a step is high-influence when its PMI is strictly above the mean PMI (which equals the MI). "
    "This per-step reading is an interpretation, not a quantity with a published definition.";

struct RatioAnalysis {
  double ratio = 0.0;
  std::vector<EpisodeLog> episodes;
};

/// Episodes grouped by ratio, in order of first appearance.
inline std::vector<RatioAnalysis> group_by_ratio(std::vector<EpisodeLog> episodes) {
  std::vector<RatioAnalysis> out;
  for (auto& ep : episodes) {
    auto it = std::find_if(out.begin(), out.end(), [&](const RatioAnalysis& r) { return r.ratio == ep.ratio; });
    if (it == out.end()) {
      out.push_back({ep.ratio, {}});
      it = out.end() - 1;
    }
    it->episodes.push_back(std::move(ep));
  }
  return out;
}

struct AnalysisResult {
  nlohmann::json ic_report;
  std::vector<SuccessRow> success;
  std::string capture_angles_csv;
  std::string capture_stats_csv;
};

inline AnalysisResult analyze_logs(const std::vector<LogRow>& rows, const MetricsConfig& metrics,
                                   const std::string& strategy_label, bool include_pointwise = false) {
  const auto by_ratio = group_by_ratio(group_episodes(rows));
  AnalysisResult res;
  nlohmann::json ratios = nlohmann::json::array();
  std::ostringstream angles, stats;
  angles << "# pursuit-capture-angles v1\nratio,pursuer,bin,bin_start,bin_end,count\n";
  stats << "# pursuit-capture-stats v1\nratio,pursuer,captures,circular_mean,circular_variance\n";

  for (const auto& group : by_ratio) {
    SuccessRow srow{strategy_label, group.ratio, 0, 0, 0.0};
    long step_sum = 0;
    std::vector<ActionTrajectory> trajs;
    std::vector<CaptureSnapshot> captures;
    int n_agents = 0;
    for (const auto& ep : group.episodes) {
      if (n_agents == 0) n_agents = ep.n_pursuers;
      if (ep.n_pursuers != n_agents) throw InvalidArgument("analyze: pursuer count changes within ratio");
      ++srow.episodes;
      srow.captures += ep.captured ? 1 : 0;
      step_sum += static_cast<long>(ep.actions.steps.size());
      trajs.push_back(ep.actions);
      if (ep.capture) captures.push_back(*ep.capture);
    }
    srow.mean_steps = static_cast<double>(step_sum) / srow.episodes;
    res.success.push_back(srow);

    nlohmann::json entry{{"ratio", group.ratio}, {"episodes", srow.episodes}, {"n_pursuers", n_agents}};
    nlohmann::json pairs = nlohmann::json::array();
    if (n_agents >= 2) {
      const IcReport ic = coordination_report(trajs, n_agents, metrics.heading_bins);
      for (const auto& p : ic.pairs) {
        nlohmann::json pj{{"from", agent_label(p.from)},
                          {"to", agent_label(p.to)},
                          {"mi_bits", p.mi_bits},
                          {"high_influence_fraction", p.high_influence_fraction},
                          {"samples", p.samples}};
        if (include_pointwise) pj["pointwise_bits"] = p.pointwise;
        pairs.push_back(std::move(pj));
      }
      entry["mean_mi_bits"] = ic.mean_mi_bits();
      entry["mean_high_influence_fraction"] = ic.mean_high_influence_fraction();
    } else {
      entry["mean_mi_bits"] = nullptr;
      entry["mean_high_influence_fraction"] = nullptr;
    }
    entry["pairs"] = std::move(pairs);
    ratios.push_back(std::move(entry));

    if (auto h = capture_angle_histogram(captures, metrics.angle_bins)) {
      const double width = 2.0 * std::numbers::pi / h->bins;
      for (std::size_t p = 0; p < h->counts.size(); ++p) {
        for (int b = 0; b < h->bins; ++b) {
          angles << format_g9(group.ratio) << ",p" << p << ',' << b << ',' << format_g9(b * width) << ','
                 << format_g9((b + 1) * width) << ',' << h->counts[p][static_cast<std::size_t>(b)] << '\n';
        }
        stats << format_g9(group.ratio) << ",p" << p << ',' << h->captures << ',' << format_g9(h->circular_mean[p])
              << ',' << format_g9(h->circular_variance[p]) << '\n';
      }
    }
  }
  res.ic_report = {{"schema", "pursuit-ic-report"},
                   {"schema_version", kIcReportSchemaVersion},
                   {"heading_bins", metrics.heading_bins},
                   {"units", "bits"},
                   {"pairing", "ordered pairs (i, j): a_i at step t against a_j at step t+1"},
                   {"interpretation", kPmiInterpretation},
                   {"ratios", std::move(ratios)}};
  res.capture_angles_csv = angles.str();
  res.capture_stats_csv = stats.str();
  return res;
}

}  // namespace pursuit

#endif  // PURSUIT_EXPERIMENT_HPP
