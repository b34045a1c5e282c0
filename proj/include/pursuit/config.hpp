#ifndef PURSUIT_CONFIG_HPP
#define PURSUIT_CONFIG_HPP

// Experiment configuration, loaded from JSON. Every section is optional and
// defaults to the published hyperparameters; unknown keys are rejected.
//
// {
//   "schema_version": 1,
//   "env":        { n_pursuers, evader_speed, velocity_ratio, capture_radius,
//                   episode_length, spawn_clearance },
//   "curriculum": { warmup_epochs, sessions: [{ v0, v_target, v_decay, epochs,
//                   use_scripted_warmup }] }
//              or { ablation: { arm, v0, v_target, epochs, warmup_epochs } },
//   "ddpg":       { actor_lr, critic_lr, gamma, tau, buffer_capacity, batch_size,
//                   clip_norm, ou_theta, ou_sigma, actor_hidden, critic_hidden,
//                   adam_beta1, adam_beta2, adam_epsilon },
//   "pursuit":    { k_att, pincer_k, pincer_score, pincer_tie_tolerance },
//   "metrics":    { heading_bins, angle_bins, episodes_per_ratio, eval_seeds, ratios },
//   "run":        { seed, output_dir, strategy, checkpoint_every, checkpoint_buffer,
//                   log_trajectories }
// }

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pursuit/analytic_pursuit.hpp"
#include "pursuit/curriculum.hpp"
#include "pursuit/ddpg.hpp"
#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"

namespace pursuit {

inline constexpr int kConfigSchemaVersion = 1;

enum class Strategy { Greedy, Pincer, CdDdpg, CdDdpgPartial, Random };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Greedy: return "greedy";
    case Strategy::Pincer: return "pincer";
    case Strategy::CdDdpg: return "cd_ddpg";
    case Strategy::CdDdpgPartial: return "cd_ddpg_partial";
    case Strategy::Random: return "random";
  }
  return "unknown";
}

inline Strategy parse_strategy(std::string_view s) {
  for (Strategy v : {Strategy::Greedy, Strategy::Pincer, Strategy::CdDdpg, Strategy::CdDdpgPartial, Strategy::Random}) {
    if (to_string(v) == s) return v;
  }
  throw InvalidArgument("unknown strategy: " + std::string(s));
}

inline bool is_learned(Strategy s) { return s == Strategy::CdDdpg || s == Strategy::CdDdpgPartial; }

inline ObservationMode observation_mode(Strategy s) {
  return s == Strategy::CdDdpgPartial ? ObservationMode::Partial : ObservationMode::Full;
}

inline std::string_view to_string(PincerScore s) {
  return s == PincerScore::BearingBalance ? "bearing_balance" : "weighted_objective";
}

struct PursuitConfig {
  double k_att = 1.5;
  int pincer_k = 1;
  PincerScore pincer_score = PincerScore::BearingBalance;
  double pincer_tie_tolerance = 0.3;

  PincerOptions pincer_options() const { return {pincer_k, pincer_score, pincer_tie_tolerance}; }
};

struct MetricsConfig {
  int heading_bins = 16;
  int angle_bins = 36;
  int episodes_per_ratio = 100;
  int eval_seeds = 1;
  std::vector<double> ratios{1.2, 1.1, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "runs/default";
  Strategy strategy = Strategy::CdDdpg;
  int checkpoint_every = 1000;  // epochs; 0 writes only the final checkpoint
  bool checkpoint_buffer = true;
  bool log_trajectories = true;
};

struct ExperimentConfig {
  EnvConfig env;
  SessionPlan curriculum = default_session_plan();
  DdpgConfig ddpg;
  PursuitConfig pursuit;
  MetricsConfig metrics;
  RunConfig run;
};

namespace config_detail {

using nlohmann::json;

/// Object reader that tracks consumed keys so leftovers can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw SchemaError(path(key), "expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw SchemaError(path(key), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
            throw SchemaError(path(key), "expected a non-negative integer");
          }
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw SchemaError(path(key), "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw SchemaError(path(key), "expected a string");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw SchemaError(path(key), e.what());
    }
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) throw SchemaError(path(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void check(bool ok, const std::string& path, F&& message) {
  if (!ok) throw SchemaError(path, message());
}

inline std::vector<int> read_int_list(Section& s, const std::string& key, std::vector<int> fallback) {
  if (!s.has(key)) return fallback;
  const json& v = s.raw(key);
  if (!v.is_array()) throw SchemaError(s.path(key), "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || v[i].get<long long>() <= 0) {
      throw SchemaError(s.path(key) + "[" + std::to_string(i) + "]", "expected a positive integer");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

inline std::vector<double> read_number_list(Section& s, const std::string& key, std::vector<double> fallback) {
  if (!s.has(key)) return fallback;
  const json& v = s.raw(key);
  if (!v.is_array() || v.empty()) throw SchemaError(s.path(key), "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw SchemaError(s.path(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

inline void parse_env(const json& j, EnvConfig& env) {
  Section s(j, "env");
  s.read("n_pursuers", env.n_pursuers);
  s.read("evader_speed", env.evader_speed);
  s.read("velocity_ratio", env.velocity_ratio);
  s.read("capture_radius", env.capture_radius);
  s.read("episode_length", env.episode_length);
  s.read("spawn_clearance", env.spawn_clearance);
  s.finish();
  check(env.n_pursuers >= 1, "env.n_pursuers", [] { return "must be >= 1"; });
  check(env.evader_speed > 0.0, "env.evader_speed", [] { return "must be > 0"; });
  check(env.velocity_ratio > 0.0, "env.velocity_ratio", [] { return "must be > 0"; });
  check(env.capture_radius > 0.0 && env.capture_radius < 0.5, "env.capture_radius",
        [] { return "must lie in (0, 0.5)"; });
  check(env.episode_length >= 1, "env.episode_length", [] { return "must be >= 1"; });
  check(env.spawn_clearance >= 0.0 && env.spawn_clearance < 0.5, "env.spawn_clearance",
        [] { return "must lie in [0, 0.5)"; });
}

inline void parse_curriculum(const json& j, SessionPlan& plan) {
  Section s(j, "curriculum");
  if (s.has("ablation")) {
    if (s.has("sessions")) throw SchemaError("curriculum", "give either sessions or ablation, not both");
    Section a(s.raw("ablation"), "curriculum.ablation");
    std::string arm = "full";
    double v0 = 1.2, v_target = 0.4;
    int epochs = 15000, warmup = plan.warmup_epochs;
    a.read("arm", arm);
    a.read("v0", v0);
    a.read("v_target", v_target);
    a.read("epochs", epochs);
    a.read("warmup_epochs", warmup);
    a.finish();
    try {
      plan = ablation_plan(parse_ablation_arm(arm), v0, v_target, epochs, warmup);
    } catch (const InvalidArgument& e) {
      throw SchemaError("curriculum.ablation", e.what());
    }
  } else {
    s.read("warmup_epochs", plan.warmup_epochs);
    if (s.has("sessions")) {
      const json& arr = s.raw("sessions");
      if (!arr.is_array() || arr.empty()) throw SchemaError("curriculum.sessions", "expected a non-empty array");
      plan.sessions.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section e(arr[i], "curriculum.sessions[" + std::to_string(i) + "]");
        Session sess;
        sess.use_scripted_warmup = i == 0;
        e.read("v0", sess.v0);
        e.read("v_target", sess.v_target);
        e.read("v_decay", sess.v_decay);
        e.read("epochs", sess.epochs);
        e.read("use_scripted_warmup", sess.use_scripted_warmup);
        e.finish();
        plan.sessions.push_back(sess);
      }
    }
  }
  s.finish();
  try {
    plan.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError("curriculum", e.what());
  }
}

inline void parse_ddpg(const json& j, DdpgConfig& d) {
  Section s(j, "ddpg");
  s.read("actor_lr", d.actor_lr);
  s.read("critic_lr", d.critic_lr);
  s.read("gamma", d.gamma);
  s.read("tau", d.tau);
  s.read("buffer_capacity", d.buffer_capacity);
  s.read("batch_size", d.batch_size);
  s.read("clip_norm", d.clip_norm);
  s.read("ou_theta", d.ou_theta);
  s.read("ou_sigma", d.ou_sigma);
  d.actor_hidden = read_int_list(s, "actor_hidden", d.actor_hidden);
  d.critic_hidden = read_int_list(s, "critic_hidden", d.critic_hidden);
  s.read("adam_beta1", d.adam.beta1);
  s.read("adam_beta2", d.adam.beta2);
  s.read("adam_epsilon", d.adam.epsilon);
  s.finish();
  check(d.actor_lr > 0.0, "ddpg.actor_lr", [] { return "must be > 0"; });
  check(d.critic_lr > 0.0, "ddpg.critic_lr", [] { return "must be > 0"; });
  check(d.gamma >= 0.0 && d.gamma <= 1.0, "ddpg.gamma", [] { return "must lie in [0, 1]"; });
  check(d.tau >= 0.0 && d.tau <= 1.0, "ddpg.tau", [] { return "must lie in [0, 1]"; });
  check(d.buffer_capacity >= 1, "ddpg.buffer_capacity", [] { return "must be >= 1"; });
  check(d.batch_size >= 1 && d.batch_size <= d.buffer_capacity, "ddpg.batch_size",
        [] { return "must lie in [1, buffer_capacity]"; });
  check(d.clip_norm > 0.0, "ddpg.clip_norm", [] { return "must be > 0"; });
  check(d.ou_theta >= 0.0 && d.ou_theta <= 1.0, "ddpg.ou_theta", [] { return "must lie in [0, 1]"; });
  check(d.ou_sigma >= 0.0, "ddpg.ou_sigma", [] { return "must be >= 0"; });
  check(d.adam.beta1 >= 0.0 && d.adam.beta1 < 1.0, "ddpg.adam_beta1", [] { return "must lie in [0, 1)"; });
  check(d.adam.beta2 >= 0.0 && d.adam.beta2 < 1.0, "ddpg.adam_beta2", [] { return "must lie in [0, 1)"; });
  check(d.adam.epsilon > 0.0, "ddpg.adam_epsilon", [] { return "must be > 0"; });
}

inline void parse_pursuit(const json& j, PursuitConfig& p) {
  Section s(j, "pursuit");
  s.read("k_att", p.k_att);
  s.read("pincer_k", p.pincer_k);
  if (s.has("pincer_score")) {
    std::string score;
    s.read("pincer_score", score);
    if (score == "bearing_balance") {
      p.pincer_score = PincerScore::BearingBalance;
    } else if (score == "weighted_objective") {
      p.pincer_score = PincerScore::WeightedObjective;
    } else {
      throw SchemaError("pursuit.pincer_score", "expected bearing_balance or weighted_objective");
    }
  }
  s.read("pincer_tie_tolerance", p.pincer_tie_tolerance);
  s.finish();
  check(p.k_att > 0.0, "pursuit.k_att", [] { return "must be > 0"; });
  check(p.pincer_k >= 1, "pursuit.pincer_k", [] { return "must be >= 1"; });
  check(p.pincer_tie_tolerance >= 0.0, "pursuit.pincer_tie_tolerance", [] { return "must be >= 0"; });
}

inline void parse_metrics(const json& j, MetricsConfig& m) {
  Section s(j, "metrics");
  s.read("heading_bins", m.heading_bins);
  s.read("angle_bins", m.angle_bins);
  s.read("episodes_per_ratio", m.episodes_per_ratio);
  s.read("eval_seeds", m.eval_seeds);
  m.ratios = read_number_list(s, "ratios", m.ratios);
  s.finish();
  check(m.heading_bins >= 2, "metrics.heading_bins", [] { return "must be >= 2"; });
  check(m.angle_bins >= 1, "metrics.angle_bins", [] { return "must be >= 1"; });
  check(m.episodes_per_ratio >= 1, "metrics.episodes_per_ratio", [] { return "must be >= 1"; });
  check(m.eval_seeds >= 1, "metrics.eval_seeds", [] { return "must be >= 1"; });
  for (double r : m.ratios) check(r > 0.0, "metrics.ratios", [] { return "ratios must be > 0"; });
}

inline void parse_run(const json& j, RunConfig& r) {
  Section s(j, "run");
  s.read("seed", r.seed);
  s.read("output_dir", r.output_dir);
  if (s.has("strategy")) {
    std::string name;
    s.read("strategy", name);
    try {
      r.strategy = parse_strategy(name);
    } catch (const InvalidArgument& e) {
      throw SchemaError("run.strategy", e.what());
    }
  }
  s.read("checkpoint_every", r.checkpoint_every);
  s.read("checkpoint_buffer", r.checkpoint_buffer);
  s.read("log_trajectories", r.log_trajectories);
  s.finish();
  check(r.checkpoint_every >= 0, "run.checkpoint_every", [] { return "must be >= 0"; });
}

}  // namespace config_detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using namespace config_detail;
  ExperimentConfig cfg;
  Section root(j, "");
  if (root.has("schema_version")) {
    int version = 0;
    root.read("schema_version", version);
    if (version != kConfigSchemaVersion) throw SchemaError("schema_version", "unsupported version " + std::to_string(version));
  }
  if (root.has("env")) parse_env(root.raw("env"), cfg.env);
  if (root.has("curriculum")) parse_curriculum(root.raw("curriculum"), cfg.curriculum);
  if (root.has("ddpg")) parse_ddpg(root.raw("ddpg"), cfg.ddpg);
  if (root.has("pursuit")) parse_pursuit(root.raw("pursuit"), cfg.pursuit);
  if (root.has("metrics")) parse_metrics(root.raw("metrics"), cfg.metrics);
  if (root.has("run")) parse_run(root.raw("run"), cfg.run);
  root.finish();
  cfg.env.seed = cfg.run.seed;
  return cfg;
}

inline ExperimentConfig parse_config_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<root>", e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Fully resolved configuration; parse_config(to_json(c)) reproduces c.
inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json sessions = nlohmann::json::array();
  for (const auto& s : c.curriculum.sessions) {
    sessions.push_back({{"v0", s.v0},
                        {"v_target", s.v_target},
                        {"v_decay", s.v_decay},
                        {"epochs", s.epochs},
                        {"use_scripted_warmup", s.use_scripted_warmup}});
  }
  return {
      {"schema_version", kConfigSchemaVersion},
      {"env",
       {{"n_pursuers", c.env.n_pursuers},
        {"evader_speed", c.env.evader_speed},
        {"velocity_ratio", c.env.velocity_ratio},
        {"capture_radius", c.env.capture_radius},
        {"episode_length", c.env.episode_length},
        {"spawn_clearance", c.env.spawn_clearance}}},
      {"curriculum", {{"warmup_epochs", c.curriculum.warmup_epochs}, {"sessions", sessions}}},
      {"ddpg",
       {{"actor_lr", c.ddpg.actor_lr},
        {"critic_lr", c.ddpg.critic_lr},
        {"gamma", c.ddpg.gamma},
        {"tau", c.ddpg.tau},
        {"buffer_capacity", c.ddpg.buffer_capacity},
        {"batch_size", c.ddpg.batch_size},
        {"clip_norm", c.ddpg.clip_norm},
        {"ou_theta", c.ddpg.ou_theta},
        {"ou_sigma", c.ddpg.ou_sigma},
        {"actor_hidden", c.ddpg.actor_hidden},
        {"critic_hidden", c.ddpg.critic_hidden},
        {"adam_beta1", c.ddpg.adam.beta1},
        {"adam_beta2", c.ddpg.adam.beta2},
        {"adam_epsilon", c.ddpg.adam.epsilon}}},
      {"pursuit",
       {{"k_att", c.pursuit.k_att},
        {"pincer_k", c.pursuit.pincer_k},
        {"pincer_score", std::string(to_string(c.pursuit.pincer_score))},
        {"pincer_tie_tolerance", c.pursuit.pincer_tie_tolerance}}},
      {"metrics",
       {{"heading_bins", c.metrics.heading_bins},
        {"angle_bins", c.metrics.angle_bins},
        {"episodes_per_ratio", c.metrics.episodes_per_ratio},
        {"eval_seeds", c.metrics.eval_seeds},
        {"ratios", c.metrics.ratios}}},
      {"run",
       {{"seed", c.run.seed},
        {"output_dir", c.run.output_dir},
        {"strategy", std::string(to_string(c.run.strategy))},
        {"checkpoint_every", c.run.checkpoint_every},
        {"checkpoint_buffer", c.run.checkpoint_buffer},
        {"log_trajectories", c.run.log_trajectories}}},
  };
}

/// FNV-1a 64 over the canonical JSON of everything that affects training
/// (output location and checkpoint cadence excluded).
inline std::string config_digest(const ExperimentConfig& c) {
  nlohmann::json j = to_json(c);
  j["run"].erase("output_dir");
  j["run"].erase("checkpoint_every");
  j["run"].erase("checkpoint_buffer");
  j["run"].erase("log_trajectories");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace pursuit

#endif  // PURSUIT_CONFIG_HPP
