#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "pursuit/curriculum.hpp"

using namespace pursuit;

TEST(Velocity, LinearAnnealThenClamp) {
  const VelocitySchedule s{1.2, 0.4, 15000};
  EXPECT_NEAR(velocity_at_epoch(s, 0), 1.2, 1e-12);
  EXPECT_NEAR(velocity_at_epoch(s, 7500), 0.8, 1e-12);
  EXPECT_NEAR(velocity_at_epoch(s, 15000), 0.4, 1e-12);
  EXPECT_NEAR(velocity_at_epoch(s, 22500), 0.4, 1e-12);
  EXPECT_THROW(velocity_at_epoch(s, -1), InvalidArgument);
}

TEST(Velocity, WholeIntegerGrid) {
  const VelocitySchedule s{1.2, 0.4, 15000};
  for (long i = 0; i <= 30000; ++i) {
    const double frac = i < 15000 ? (15000.0 - i) / 15000.0 : 0.0;
    ASSERT_NEAR(velocity_at_epoch(s, i), 0.4 + 0.8 * frac, 1e-12) << i;
  }
}

TEST(Velocity, MonotoneAndAscendingCase) {
  const VelocitySchedule down{1.2, 1.1, 100};
  for (long i = 1; i < 200; ++i) EXPECT_LE(velocity_at_epoch(down, i), velocity_at_epoch(down, i - 1));
  const VelocitySchedule flat{0.7, 0.7, 50};
  EXPECT_EQ(velocity_at_epoch(flat, 10), 0.7);
  EXPECT_THROW((VelocitySchedule{1.0, 0.5, 0}.validate()), InvalidArgument);
}

TEST(Behavior, WarmupOnlyInFirstSession) {
  const SessionPlan plan = default_session_plan();
  EXPECT_EQ(plan.warmup_epochs, 1000);
  EXPECT_EQ(behavior_for_epoch(plan, 0, 0), BehaviorPhase::Scripted);
  EXPECT_EQ(behavior_for_epoch(plan, 0, 999), BehaviorPhase::Scripted);
  EXPECT_EQ(behavior_for_epoch(plan, 0, 1000), BehaviorPhase::Learned);
  EXPECT_EQ(behavior_for_epoch(plan, 3, 0), BehaviorPhase::Learned);
  EXPECT_THROW(behavior_for_epoch(plan, 8, 0), InvalidArgument);
}

TEST(Scripted, EvaderDueNorth) {
  EXPECT_NEAR(scripted_action({Point2(0.5, 0.5), 0.0}, Point2(0.5, 0.7)), std::numbers::pi / 2, 1e-12);
}

TEST(Scripted, EqualsGreedyOnRandomStates) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Pose p{Point2(u(rng), u(rng)), u(rng)};
    const Point2 e(u(rng), u(rng));
    EXPECT_EQ(scripted_action(p, e), greedy_heading(p, e));
  }
}

TEST(Plan, DefaultChainsEightSessions) {
  const SessionPlan plan = default_session_plan();
  ASSERT_EQ(plan.sessions.size(), 8u);
  EXPECT_EQ(plan.total_epochs(), 50000);
  EXPECT_NO_THROW(plan.validate());
  EXPECT_DOUBLE_EQ(plan.sessions.front().v0, 1.2);
  EXPECT_DOUBLE_EQ(plan.sessions.back().v_target, 0.4);
  EXPECT_EQ(plan.sessions[0].v_decay, 15000);
  EXPECT_TRUE(plan.sessions[0].use_scripted_warmup);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_FALSE(plan.sessions[i].use_scripted_warmup);
}

TEST(Plan, RejectsBrokenChain) {
  SessionPlan plan = default_session_plan();
  plan.sessions[2].v0 = 0.95;
  EXPECT_THROW(plan.validate(), InvalidArgument);
  SessionPlan empty;
  EXPECT_THROW(empty.validate(), InvalidArgument);
  // A session that stops before its decay ends must hand over its actual ratio.
  SessionPlan early;
  early.sessions.push_back({1.2, 1.0, 100, 50, true});
  early.sessions.push_back({1.1, 1.0, 100, 100, false});
  EXPECT_NO_THROW(early.validate());
}

TEST(Ablation, Arms) {
  const auto full = ablation_plan(AblationArm::Full, 1.2, 0.4, 300, 100);
  EXPECT_EQ(full.warmup_epochs, 100);
  EXPECT_DOUBLE_EQ(full.sessions[0].v0, 1.2);
  EXPECT_DOUBLE_EQ(full.sessions[0].v_target, 0.4);

  const auto nb = ablation_plan(AblationArm::NoBehavioral, 1.2, 0.4, 300, 100);
  EXPECT_EQ(behavior_for_epoch(nb, 0, 0), BehaviorPhase::Learned);

  const auto nv = ablation_plan(AblationArm::NoVelocity, 1.2, 0.4, 300, 100);
  EXPECT_DOUBLE_EQ(velocity_at_epoch(nv.sessions[0].schedule(), 0), 0.4);
  EXPECT_EQ(behavior_for_epoch(nv, 0, 0), BehaviorPhase::Scripted);

  const auto nc = ablation_plan(AblationArm::NoCurriculum, 1.2, 0.4, 300, 100);
  EXPECT_DOUBLE_EQ(velocity_at_epoch(nc.sessions[0].schedule(), 150), 0.7);
  EXPECT_EQ(behavior_for_epoch(nc, 0, 0), BehaviorPhase::Learned);
  EXPECT_EQ(nc.total_epochs(), 300);

  EXPECT_EQ(parse_ablation_arm("no_velocity"), AblationArm::NoVelocity);
  EXPECT_THROW(parse_ablation_arm("bogus"), InvalidArgument);
}
