#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pursuit/gradient_check.hpp"
#include "pursuit/neural.hpp"

using namespace pursuit;
using namespace pursuit::nn;

namespace {

MlpParams tiny_identity(int n) {
  MlpParams p;
  p.hidden = Activation::Identity;
  p.output = Activation::Identity;
  p.layers.push_back({MatrixXd::Identity(n, n), VectorXd::Zero(n)});
  return p;
}

// Straight-line evaluation: explicit loops, no Eigen products.
VectorXd oracle_forward(const MlpParams& p, const VectorXd& x) {
  std::vector<double> a(x.data(), x.data() + x.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& L = p.layers[l];
    std::vector<double> z(static_cast<std::size_t>(L.out()));
    for (Eigen::Index r = 0; r < L.out(); ++r) {
      double s = L.bias[r];
      for (Eigen::Index c = 0; c < L.in(); ++c) s += L.weight(r, c) * a[static_cast<std::size_t>(c)];
      const bool last = l + 1 == p.layers.size();
      const Activation act = last ? p.output : p.hidden;
      if (act == Activation::Relu) s = s > 0.0 ? s : 0.0;
      if (act == Activation::Tanh) s = std::tanh(s);
      z[static_cast<std::size_t>(r)] = s;
    }
    a = std::move(z);
  }
  return Eigen::Map<VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

}  // namespace

TEST(MlpInit, ActorShapeParameterCount) {
  std::mt19937_64 rng(1);
  const auto p = mlp_init({8, 128, 128, 2}, rng);
  EXPECT_EQ(p.layers.size(), 3u);
  // 8*128 + 128 + 128*128 + 128 + 128*2 + 2
  EXPECT_EQ(p.parameter_count(), 17922u);
  EXPECT_EQ(p.layer_sizes(), (std::vector<int>{8, 128, 128, 2}));
}

TEST(MlpInit, SeededZeroBiasBoundedWeights) {
  std::mt19937_64 a(7), b(7), c(8);
  const auto p = mlp_init({10, 32, 1}, a);
  const auto q = mlp_init({10, 32, 1}, b);
  const auto r = mlp_init({10, 32, 1}, c);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    EXPECT_EQ(p.layers[l].weight, q.layers[l].weight);
    EXPECT_TRUE(p.layers[l].bias.isZero(0.0));
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.layers[l].in()));
    EXPECT_LE(p.layers[l].weight.cwiseAbs().maxCoeff(), bound);
  }
  EXPECT_NE(p.layers[0].weight, r.layers[0].weight);
  EXPECT_THROW(mlp_init({3}, a), InvalidArgument);
  EXPECT_THROW(mlp_init({3, 0, 1}, a), InvalidArgument);
}

TEST(Forward, ZeroNetworkGivesZero) {
  std::mt19937_64 rng(2);
  auto p = mlp_init({4, 6, 3}, rng);
  for (auto& l : p.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
  EXPECT_TRUE(forward(p, VectorXd::Random(4)).first.isZero(0.0));
}

TEST(Forward, IdentityLayerPassesThrough) {
  const VectorXd x = (VectorXd(3) << 0.5, -2.0, 7.0).finished();
  EXPECT_EQ(forward(tiny_identity(3), x).first, x);
}

TEST(Forward, MatchesStraightLineOracle) {
  std::mt19937_64 rng(3);
  for (Activation out : {Activation::Identity, Activation::Tanh}) {
    auto p = mlp_init({5, 7, 3}, rng, Activation::Relu, out);
    for (auto& l : p.layers) l.bias.setRandom();
    const VectorXd x = VectorXd::Random(5);
    EXPECT_LT((forward(p, x).first - oracle_forward(p, x)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((predict(p, MatrixXd(x)).col(0) - oracle_forward(p, x)).cwiseAbs().maxCoeff(), 1e-12);
  }
  const auto p = mlp_init({5, 2}, rng);
  EXPECT_THROW(forward(p, VectorXd::Zero(4)), ShapeMismatch);
}

TEST(Backward, ZeroUpstreamGivesZeroGradient) {
  std::mt19937_64 rng(4);
  const auto p = mlp_init({4, 8, 2}, rng);
  const auto [y, cache] = forward(p, VectorXd::Random(4));
  const auto [g, gin] = backward(p, cache, VectorXd(VectorXd::Zero(2)));
  EXPECT_EQ(g.squared_norm(), 0.0);
  EXPECT_TRUE(gin.isZero(0.0));
}

TEST(Backward, IdentityLayerOuterProduct) {
  const auto p = tiny_identity(3);
  const VectorXd x = (VectorXd(3) << 1.0, 2.0, -1.0).finished();
  const VectorXd gy = (VectorXd(3) << 0.5, 0.0, 3.0).finished();
  const auto [y, cache] = forward(p, x);
  const auto [g, gin] = backward(p, cache, gy);
  EXPECT_EQ(g.layers[0].weight, gy * x.transpose());
  EXPECT_EQ(g.layers[0].bias, gy);
  EXPECT_EQ(gin, gy);
}

TEST(Backward, FiniteDifferencesOnProjectShapes) {
  std::mt19937_64 rng(5);
  gradcheck::Options opt;
  opt.probes = 20;
  for (std::vector<int> sizes : {std::vector<int>{8, 128, 128, 2}, std::vector<int>{10, 128, 128, 128, 1},
                                 std::vector<int>{4, 16, 16, 2}, std::vector<int>{6, 16, 16, 1}}) {
    const auto r = gradcheck::check_mlp(std::span<const int>(sizes), Activation::Identity, opt, rng);
    EXPECT_TRUE(r.passed(1e-4)) << "max rel err " << r.max_relative_error;
  }
  const std::vector<int> tanh_sizes{3, 9, 2};
  const auto r = gradcheck::check_mlp(std::span<const int>(tanh_sizes), Activation::Tanh, opt, rng);
  EXPECT_TRUE(r.passed(1e-4)) << r.max_relative_error;
}

TEST(Backward, ScaledGradientFailsTheCheck) {
  std::mt19937_64 rng(6);
  gradcheck::Options opt;
  opt.probes = 5;
  opt.analytic_scale = 1.001;
  const std::vector<int> sizes{4, 16, 2};
  EXPECT_FALSE(gradcheck::check_mlp(std::span<const int>(sizes), Activation::Identity, opt, rng).passed(1e-4));
}

TEST(Clip, HalvesOrKeeps) {
  GradientBundle g;
  g.layers.push_back({MatrixXd::Constant(1, 1, 0.6), VectorXd::Constant(1, 0.8)});  // norm 1.0
  const auto c = clip_global_norm(g, 0.5);
  EXPECT_NEAR(c.layers[0].weight(0, 0), 0.3, 1e-15);
  EXPECT_NEAR(c.layers[0].bias[0], 0.4, 1e-15);

  GradientBundle s;
  s.layers.push_back({MatrixXd::Constant(1, 1, 0.18), VectorXd::Constant(1, 0.24)});  // norm 0.3
  const auto k = clip_global_norm(s, 0.5);
  EXPECT_EQ(k.layers[0].weight(0, 0), 0.18);
  EXPECT_EQ(k.layers[0].bias[0], 0.24);
  EXPECT_THROW(clip_global_norm(s, 0.0), InvalidArgument);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::mt19937_64 rng(7);
  auto p = mlp_init({3, 4, 2}, rng);
  const auto before = p;
  auto st = adam_init(p);
  adam_step(p, zero_gradients(p), st, 1e-3);
  EXPECT_EQ(st.step, 1);
  for (std::size_t l = 0; l < p.layers.size(); ++l) EXPECT_EQ(p.layers[l].weight, before.layers[l].weight);
}

TEST(Adam, FirstStepIsSignTimesRate) {
  std::mt19937_64 rng(8);
  auto p = mlp_init({3, 4, 2}, rng);
  const auto before = p;
  auto g = zero_gradients(p);
  for (auto& l : g.layers) {
    l.weight.setRandom();
    l.bias.setRandom();
  }
  auto st = adam_init(p);
  const double lr = 1e-3;
  adam_step(p, g, st, lr);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const MatrixXd d = p.layers[l].weight - before.layers[l].weight;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double gi = g.layers[l].weight.data()[i];
      // |g| / (|g| + eps) times lr, with eps 1e-8.
      EXPECT_NEAR(d.data()[i], -lr * gi / (std::abs(gi) + 1e-8), 1e-12);
    }
  }
  // Determinism from identical states.
  auto p2 = before;
  auto st2 = adam_init(p2);
  adam_step(p2, g, st2, lr);
  for (std::size_t l = 0; l < p.layers.size(); ++l) EXPECT_EQ(p.layers[l].weight, p2.layers[l].weight);
}

TEST(Polyak, Endpoints) {
  std::mt19937_64 rng(9);
  const auto online = mlp_init({3, 5, 1}, rng);
  const auto target = mlp_init({3, 5, 1}, rng);
  const auto one = polyak_updated(target, online, 1.0);
  const auto zero = polyak_updated(target, online, 0.0);
  for (std::size_t l = 0; l < online.layers.size(); ++l) {
    EXPECT_EQ(one.layers[l].weight, online.layers[l].weight);
    EXPECT_EQ(zero.layers[l].weight, target.layers[l].weight);
  }
  EXPECT_THROW(polyak_updated(target, online, 1.5), InvalidArgument);
}

TEST(Polyak, ScalarProbe) {
  MlpParams t, o;
  t.layers.push_back({MatrixXd::Zero(1, 1), VectorXd::Zero(1)});
  o.layers.push_back({MatrixXd::Ones(1, 1), VectorXd::Ones(1)});
  polyak_update(t, o, 0.001);
  EXPECT_NEAR(t.layers[0].weight(0, 0), 0.001, 1e-18);
  EXPECT_NEAR(t.layers[0].bias[0], 0.001, 1e-18);
}
