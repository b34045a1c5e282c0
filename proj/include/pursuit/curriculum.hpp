#ifndef PURSUIT_CURRICULUM_HPP
#define PURSUIT_CURRICULUM_HPP

// Velocity-ratio annealing and the scripted/learned behavior switch.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pursuit/analytic_pursuit.hpp"
#include "pursuit/errors.hpp"

namespace pursuit {

struct VelocitySchedule {
  double v0 = 1.2;
  double v_target = 0.4;
  int v_decay = 15000;

  void validate() const {
    if (v_decay < 1) throw InvalidArgument("VelocitySchedule: v_decay must be >= 1");
    if (!(v0 > 0.0) || !(v_target > 0.0)) throw InvalidArgument("VelocitySchedule: ratios must be > 0");
  }
};

/// v_i = v_target + (v0 - v_target) * max((v_decay - i) / v_decay, 0).
inline double velocity_at_epoch(const VelocitySchedule& s, long epoch) {
  if (epoch < 0) throw InvalidArgument("velocity_at_epoch: negative epoch");
  const double frac = std::max(static_cast<double>(s.v_decay - epoch) / static_cast<double>(s.v_decay), 0.0);
  return s.v_target + (s.v0 - s.v_target) * frac;
}

enum class BehaviorPhase { Scripted, Learned };

inline std::string_view to_string(BehaviorPhase p) {
  return p == BehaviorPhase::Scripted ? "scripted" : "learned";
}

struct Session {
  double v0 = 1.2;
  double v_target = 1.1;
  int v_decay = 15000;
  int epochs = 15000;
  bool use_scripted_warmup = false;

  VelocitySchedule schedule() const { return {v0, v_target, v_decay}; }
};

struct SessionPlan {
  std::vector<Session> sessions;
  int warmup_epochs = 1000;

  long total_epochs() const {
    long n = 0;
    for (const auto& s : sessions) n += s.epochs;
    return n;
  }

  /// Each session must start where the previous one's schedule ends.
  void validate() const {
    if (sessions.empty()) throw InvalidArgument("SessionPlan: no sessions");
    if (warmup_epochs < 0) throw InvalidArgument("SessionPlan: warmup_epochs must be >= 0");
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      const Session& s = sessions[i];
      s.schedule().validate();
      if (s.epochs < 1) throw InvalidArgument("SessionPlan: session epochs must be >= 1");
      if (i > 0) {
        const Session& prev = sessions[i - 1];
        const double end = velocity_at_epoch(prev.schedule(), prev.epochs);
        if (std::abs(end - s.v0) > 1e-12) {
          throw InvalidArgument("SessionPlan: session " + std::to_string(i) +
                                " does not start at the previous session's final ratio");
        }
      }
    }
  }
};

/// Default plan: 1.2 -> 0.4 in steps of 0.1 over eight chained sessions. The
/// first anneals over 15000 epochs with scripted warm-up; the remaining seven
/// take 5000 epochs each, 50000 epochs in total.
inline SessionPlan default_session_plan() {
  SessionPlan plan;
  plan.warmup_epochs = 1000;
  for (int i = 0; i < 8; ++i) {
    Session s;
    s.v0 = (12 - i) / 10.0;
    s.v_target = (11 - i) / 10.0;
    s.v_decay = i == 0 ? 15000 : 5000;
    s.epochs = s.v_decay;
    s.use_scripted_warmup = i == 0;
    plan.sessions.push_back(s);
  }
  return plan;
}

inline BehaviorPhase behavior_for_epoch(const SessionPlan& plan, std::size_t session, long epoch) {
  if (session >= plan.sessions.size()) throw InvalidArgument("behavior_for_epoch: session out of range");
  if (epoch < 0) throw InvalidArgument("behavior_for_epoch: negative epoch");
  return plan.sessions[session].use_scripted_warmup && epoch < plan.warmup_epochs ? BehaviorPhase::Scripted
                                                                                 : BehaviorPhase::Learned;
}

/// The scripted warm-up policy: run straight at the evader.
inline double scripted_action(const Pose& pursuer, const Point2& evader) {
  return greedy_heading(pursuer, evader);
}

enum class AblationArm { Full, NoBehavioral, NoVelocity, NoCurriculum };

inline AblationArm parse_ablation_arm(std::string_view s) {
  if (s == "full") return AblationArm::Full;
  if (s == "no_behavioral") return AblationArm::NoBehavioral;
  if (s == "no_velocity") return AblationArm::NoVelocity;
  if (s == "no_curriculum") return AblationArm::NoCurriculum;
  throw InvalidArgument("unknown ablation arm: " + std::string(s));
}

/// Single-session plans for the four ablation arms. NoCurriculum is vanilla
/// DDPG at a constant ratio of 0.7 with no warm-up.
inline SessionPlan ablation_plan(AblationArm arm, double v0, double v_target, int epochs, int warmup_epochs) {
  Session s;
  s.epochs = epochs;
  s.v_decay = epochs;
  s.use_scripted_warmup = true;
  SessionPlan plan;
  plan.warmup_epochs = warmup_epochs;
  switch (arm) {
    case AblationArm::Full:
      s.v0 = v0;
      s.v_target = v_target;
      break;
    case AblationArm::NoBehavioral:
      s.v0 = v0;
      s.v_target = v_target;
      plan.warmup_epochs = 0;
      break;
    case AblationArm::NoVelocity:
      s.v0 = v_target;
      s.v_target = v_target;
      break;
    case AblationArm::NoCurriculum:
      s.v0 = 0.7;
      s.v_target = 0.7;
      plan.warmup_epochs = 0;
      break;
  }
  plan.sessions.push_back(s);
  return plan;
}

}  // namespace pursuit

#endif  // PURSUIT_CURRICULUM_HPP
