#ifndef PURSUIT_CHECKPOINT_HPP
#define PURSUIT_CHECKPOINT_HPP

// JSON encodings of learner state. Doubles go through nlohmann::json, which
// prints the shortest decimal that round-trips, so a reload is bit-exact.
// Matrices are stored row-major as {"rows", "cols", "data"}.

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pursuit/ddpg.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/neural.hpp"

namespace pursuit::ckpt {

using nlohmann::json;

inline constexpr int kCheckpointSchemaVersion = 1;
inline constexpr const char* kCheckpointSchema = "pursuit-checkpoint";

inline json encode(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline json encode(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Eigen::MatrixXd decode_matrix(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw ShapeMismatch("checkpoint: matrix data does not match its shape");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  }
  return m;
}

inline Eigen::VectorXd decode_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline json encode_layers(const std::vector<nn::Dense>& layers) {
  json out = json::array();
  for (const auto& l : layers) out.push_back({{"weight", encode(l.weight)}, {"bias", encode(l.bias)}});
  return out;
}

inline std::vector<nn::Dense> decode_layers(const json& j) {
  std::vector<nn::Dense> out;
  for (const auto& l : j) {
    nn::Dense d;
    d.weight = decode_matrix(l.at("weight"));
    d.bias = decode_vector(l.at("bias"));
    if (d.bias.size() != d.weight.rows()) throw ShapeMismatch("checkpoint: bias does not match weight rows");
    out.push_back(std::move(d));
  }
  return out;
}

inline const char* activation_name(nn::Activation a) {
  switch (a) {
    case nn::Activation::Identity: return "identity";
    case nn::Activation::Relu: return "relu";
    case nn::Activation::Tanh: return "tanh";
  }
  return "identity";
}

inline nn::Activation parse_activation(const std::string& s) {
  if (s == "identity") return nn::Activation::Identity;
  if (s == "relu") return nn::Activation::Relu;
  if (s == "tanh") return nn::Activation::Tanh;
  throw InvalidArgument("checkpoint: unknown activation " + s);
}

inline json encode(const nn::MlpParams& p) {
  return {{"hidden", activation_name(p.hidden)}, {"output", activation_name(p.output)}, {"layers", encode_layers(p.layers)}};
}

inline nn::MlpParams decode_mlp(const json& j) {
  nn::MlpParams p;
  p.hidden = parse_activation(j.at("hidden").get<std::string>());
  p.output = parse_activation(j.at("output").get<std::string>());
  p.layers = decode_layers(j.at("layers"));
  if (p.layers.empty()) throw ShapeMismatch("checkpoint: network without layers");
  return p;
}

inline json encode(const nn::AdamState& s) {
  return {{"step", s.step}, {"first", encode_layers(s.first.layers)}, {"second", encode_layers(s.second.layers)}};
}

inline nn::AdamState decode_adam(const json& j) {
  nn::AdamState s;
  s.step = j.at("step").get<long>();
  s.first.layers = decode_layers(j.at("first"));
  s.second.layers = decode_layers(j.at("second"));
  return s;
}

inline json encode(const Transition& t) {
  return {{"obs", encode(t.obs)},
          {"action", {t.action.x(), t.action.y()}},
          {"reward", t.reward},
          {"next_obs", encode(t.next_obs)},
          {"terminal", t.terminal}};
}

inline Transition decode_transition(const json& j) {
  Transition t;
  t.obs = decode_vector(j.at("obs"));
  const auto a = j.at("action").get<std::vector<double>>();
  if (a.size() != 2) throw ShapeMismatch("checkpoint: action must have 2 components");
  t.action = {a[0], a[1]};
  t.reward = j.at("reward").get<double>();
  t.next_obs = decode_vector(j.at("next_obs"));
  t.terminal = j.at("terminal").get<bool>();
  return t;
}

template <class Engine>
std::string encode_rng(const Engine& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

template <class Engine>
void decode_rng(const json& j, Engine& rng) {
  std::istringstream is(j.get<std::string>());
  is >> rng;
  if (!is) throw InvalidArgument("checkpoint: malformed rng state");
}

/// Full learner state. With include_buffer = false the replay buffer is
/// omitted; such a checkpoint can be evaluated but not resumed exactly.
inline json encode(const AgentLearner& a, bool include_buffer) {
  json j{{"actor", encode(a.actor())},
         {"critic", encode(a.critic())},
         {"actor_target", encode(a.actor_target())},
         {"critic_target", encode(a.critic_target())},
         {"actor_optimizer", encode(a.actor_optimizer())},
         {"critic_optimizer", encode(a.critic_optimizer())},
         {"noise", {a.noise().state.x(), a.noise().state.y()}}};
  if (include_buffer) {
    json items = json::array();
    for (std::size_t i = 0; i < a.buffer().size(); ++i) items.push_back(encode(a.buffer().at(i)));
    j["buffer"] = std::move(items);
  }
  return j;
}

inline void restore(const json& j, AgentLearner& a) {
  auto load_net = [](const json& src, nn::MlpParams& dst, const char* what) {
    nn::MlpParams p = decode_mlp(src);
    if (p.layer_sizes() != dst.layer_sizes()) throw ShapeMismatch(std::string("checkpoint: ") + what + " shape differs");
    dst = std::move(p);
  };
  load_net(j.at("actor"), a.actor(), "actor");
  load_net(j.at("critic"), a.critic(), "critic");
  load_net(j.at("actor_target"), a.actor_target(), "actor_target");
  load_net(j.at("critic_target"), a.critic_target(), "critic_target");
  a.actor_optimizer() = decode_adam(j.at("actor_optimizer"));
  a.critic_optimizer() = decode_adam(j.at("critic_optimizer"));
  const auto n = j.at("noise").get<std::vector<double>>();
  if (n.size() != 2) throw ShapeMismatch("checkpoint: noise must have 2 components");
  a.noise().state = {n[0], n[1]};
  if (j.contains("buffer")) {
    a.buffer() = ReplayBuffer(a.config().buffer_capacity);
    for (const auto& t : j.at("buffer")) a.buffer().push(decode_transition(t));
  }
}

inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << j.dump() << '\n';
    if (!out) throw InvalidArgument("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

}  // namespace pursuit::ckpt

#endif  // PURSUIT_CHECKPOINT_HPP
