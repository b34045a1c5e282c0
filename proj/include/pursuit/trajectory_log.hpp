#ifndef PURSUIT_TRAJECTORY_LOG_HPP
#define PURSUIT_TRAJECTORY_LOG_HPP

// Per-step pose logs as CSV. Layout:
//
//   # pursuit-trajectory-log v1
//   episode,step,agent,x,y,heading,action,reward,captured,ratio
//   0,1,p0,0.41,0.73,...
//
// One row per agent per step, pursuers p0..p{n-1} first and the evader "e"
// last. Rows hold the poses after the step; step runs from 1.

#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pursuit/environment.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/metrics.hpp"

namespace pursuit {

inline constexpr std::string_view kTrajectoryLogVersionLine = "# pursuit-trajectory-log v1";
inline constexpr std::string_view kTrajectoryLogHeader = "episode,step,agent,x,y,heading,action,reward,captured,ratio";

/// %.9g, the precision every emitted CSV uses.
inline std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct LogRow {
  std::int64_t episode = 0;
  int step = 0;
  int agent = 0;  // pursuer index, or kEvaderAgent
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double action = 0.0;
  double reward = 0.0;
  bool captured = false;
  double ratio = 0.0;
  std::size_t line = 0;  // source line when read back, 0 otherwise

  static constexpr int kEvaderAgent = -1;
};

inline std::string agent_label(int agent) { return agent == LogRow::kEvaderAgent ? "e" : "p" + std::to_string(agent); }

class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out) : out_(out) {
    out_ << kTrajectoryLogVersionLine << '\n' << kTrajectoryLogHeader << '\n';
  }

  /// `state` is the post-step world; `actions` are the pursuers' chosen headings.
  void write_step(std::int64_t episode, const WorldState& state, std::span<const double> actions,
                  const StepOutcome& outcome, double ratio) {
    if (actions.size() != state.pursuers.size() || outcome.rewards.size() != state.pursuers.size()) {
      throw InvalidArgument("TrajectoryWriter: one action and reward per pursuer required");
    }
    for (std::size_t i = 0; i < state.pursuers.size(); ++i) {
      row(episode, state.step, static_cast<int>(i), state.pursuers[i], actions[i], outcome.rewards[i],
          outcome.captured, ratio);
    }
    row(episode, state.step, LogRow::kEvaderAgent, state.evader, state.evader.heading, 0.0, outcome.captured, ratio);
  }

 private:
  void row(std::int64_t episode, int step, int agent, const Pose& pose, double action, double reward, bool captured,
           double ratio) {
    out_ << episode << ',' << step << ',' << agent_label(agent) << ',' << format_g9(pose.position.x()) << ','
         << format_g9(pose.position.y()) << ',' << format_g9(pose.heading) << ',' << format_g9(action) << ','
         << format_g9(reward) << ',' << (captured ? 1 : 0) << ',' << format_g9(ratio) << '\n';
  }

  std::ostream& out_;
};

namespace log_detail {

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double to_double(std::string_view s, std::size_t line, const char* field) {
  const std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (str.empty() || used != str.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("bad ") + field + " value '" + str + "'");
  }
  return v;
}

inline long long to_int(std::string_view s, std::size_t line, const char* field) {
  const std::string str(s);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (str.empty() || used != str.size()) throw ParseError(line, std::string("bad ") + field + " value '" + str + "'");
  return v;
}

inline int to_agent(std::string_view s, std::size_t line) {
  if (s == "e") return LogRow::kEvaderAgent;
  if (s.size() >= 2 && s[0] == 'p') {
    const long long v = to_int(s.substr(1), line, "agent");
    if (v >= 0 && v < 1000000) return static_cast<int>(v);
  }
  throw ParseError(line, "bad agent id '" + std::string(s) + "'");
}

inline std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace log_detail

/// Strict reader; any deviation from the schema raises ParseError with the
/// 1-based line number.
inline std::vector<LogRow> read_trajectory_log(std::istream& in) {
  using namespace log_detail;
  std::vector<LogRow> rows;
  std::string buf;
  std::size_t line = 0;

  if (!std::getline(in, buf)) throw ParseError(1, "empty trajectory log");
  ++line;
  const std::string_view version = strip_cr(buf);
  if (version != kTrajectoryLogVersionLine) {
    if (version.starts_with("# pursuit-trajectory-log")) throw ParseError(line, "unsupported log version");
    throw ParseError(line, "missing trajectory log version line");
  }
  if (!std::getline(in, buf)) throw ParseError(2, "missing header");
  ++line;
  if (strip_cr(buf) != kTrajectoryLogHeader) throw ParseError(line, "unexpected header");

  while (std::getline(in, buf)) {
    ++line;
    const std::string_view text = strip_cr(buf);
    if (text.empty()) continue;
    const auto f = split(text);
    if (f.size() != 10) throw ParseError(line, "expected 10 fields, got " + std::to_string(f.size()));
    LogRow r;
    r.line = line;
    r.episode = to_int(f[0], line, "episode");
    const long long step = to_int(f[1], line, "step");
    if (r.episode < 0 || step < 1 || step > 100000000) throw ParseError(line, "episode/step out of range");
    r.step = static_cast<int>(step);
    r.agent = to_agent(f[2], line);
    r.x = to_double(f[3], line, "x");
    r.y = to_double(f[4], line, "y");
    r.heading = to_double(f[5], line, "heading");
    r.action = to_double(f[6], line, "action");
    r.reward = to_double(f[7], line, "reward");
    if (f[8] != "0" && f[8] != "1") throw ParseError(line, "captured must be 0 or 1");
    r.captured = f[8] == "1";
    r.ratio = to_double(f[9], line, "ratio");
    // 9 significant digits can round 0.9999999999 up to 1.
    if (r.x < 0.0 || r.x > 1.0 || r.y < 0.0 || r.y > 1.0) throw ParseError(line, "position outside [0, 1]");
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<LogRow> read_trajectory_log_text(const std::string& text) {
  std::istringstream in(text);
  return read_trajectory_log(in);
}

/// One episode reassembled from its rows.
struct EpisodeLog {
  std::int64_t episode = 0;
  double ratio = 0.0;
  int n_pursuers = 0;
  bool captured = false;
  ActionTrajectory actions;                 // pursuer action headings per step
  std::optional<CaptureSnapshot> capture;   // poses at the capture step
};

/// Groups rows by episode and checks the (episode, step, agent) ordering.
inline std::vector<EpisodeLog> group_episodes(const std::vector<LogRow>& rows) {
  std::vector<EpisodeLog> out;
  auto fail = [&rows](std::size_t idx, const std::string& what) { throw ParseError(rows[idx].line, what); };
  std::map<std::int64_t, bool> seen;
  std::size_t i = 0;
  while (i < rows.size()) {
    EpisodeLog ep;
    ep.episode = rows[i].episode;
    ep.ratio = rows[i].ratio;
    if (seen.contains(ep.episode)) fail(i, "episode " + std::to_string(ep.episode) + " is not contiguous");
    seen[ep.episode] = true;
    int expected_step = 1;
    while (i < rows.size() && rows[i].episode == ep.episode) {
      if (ep.captured) fail(i, "rows after the capture step");
      if (rows[i].step != expected_step) fail(i, "expected step " + std::to_string(expected_step));
      std::vector<double> step_actions;
      CaptureSnapshot snap;
      int agent = 0;
      bool captured = rows[i].captured;
      while (i < rows.size() && rows[i].episode == ep.episode && rows[i].step == expected_step &&
             rows[i].agent != LogRow::kEvaderAgent) {
        if (rows[i].agent != agent) fail(i, "expected agent p" + std::to_string(agent));
        if (rows[i].captured != captured || rows[i].ratio != ep.ratio) fail(i, "inconsistent step fields");
        step_actions.push_back(rows[i].action);
        snap.pursuers.emplace_back(rows[i].x, rows[i].y);
        ++agent;
        ++i;
      }
      if (i >= rows.size() || rows[i].episode != ep.episode || rows[i].step != expected_step ||
          rows[i].agent != LogRow::kEvaderAgent) {
        fail(std::min(i, rows.size() - 1), "missing evader row");
      }
      if (rows[i].captured != captured || rows[i].ratio != ep.ratio) fail(i, "inconsistent step fields");
      if (agent == 0) fail(i, "step without pursuers");
      if (ep.n_pursuers == 0) ep.n_pursuers = agent;
      if (agent != ep.n_pursuers) fail(i, "pursuer count changes within an episode");
      snap.evader = Point2(rows[i].x, rows[i].y);
      ++i;
      ep.actions.steps.push_back(std::move(step_actions));
      if (captured) {
        ep.captured = true;
        ep.capture = std::move(snap);
      }
      ++expected_step;
    }
    out.push_back(std::move(ep));
  }
  return out;
}

}  // namespace pursuit

#endif  // PURSUIT_TRAJECTORY_LOG_HPP
