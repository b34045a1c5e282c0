#include <gtest/gtest.h>

#include <sstream>

#include "pursuit/selfcheck.hpp"

using namespace pursuit;

TEST(Selfcheck, FreshBuildPasses) {
  selfcheck::Options opt;
  opt.gradient_probes = 20;
  opt.random_states = 200;
  const auto results = selfcheck::run_all(opt);
  EXPECT_EQ(results.size(), 7u);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  std::ostringstream out;
  EXPECT_TRUE(selfcheck::report(out, results));
  EXPECT_NE(out.str().find("all checks passed"), std::string::npos);
}

TEST(Selfcheck, PerturbedGradientsFail) {
  selfcheck::Options opt;
  opt.gradient_probes = 10;
  opt.gradient_scale = 1.001;
  const auto r = selfcheck::gradients(opt);
  EXPECT_FALSE(r.passed) << r.detail;
}

TEST(Selfcheck, EvaderCasesReportHeadings) {
  const auto c1 = selfcheck::evader_case_1();
  EXPECT_TRUE(c1.passed);
  EXPECT_NE(c1.detail.find("-1.5707963"), std::string::npos) << c1.detail;
  EXPECT_TRUE(selfcheck::evader_case_2().passed);
}

TEST(Selfcheck, DirectMiOracle) {
  EXPECT_NEAR(selfcheck::direct_mi_bits({{1, 0}, {0, 1}}), 1.0, 1e-15);
  EXPECT_NEAR(selfcheck::direct_mi_bits({{1, 1}, {1, 1}}), 0.0, 1e-15);
}

TEST(Selfcheck, GridOracleFindsKnownMinimum) {
  const std::vector<PolarContact> one{{1.0, 0.0}};
  const auto [theta, cost] = selfcheck::grid_minimum(one, 10000);
  EXPECT_NEAR(cost, -1.0, 1e-6);
  EXPECT_LE(angular_distance(theta, std::numbers::pi), 1e-3);
  EXPECT_NEAR(selfcheck::refined_grid_minimum(one, 10000), -1.0, 1e-12);
}
