#include <cmath>

#include <gtest/gtest.h>

#include "toggle/stochastic.hpp"

namespace toggle {
namespace {

FullState operating_point() {
  FullState s;
  s << 4.0, 2.5, 700.0, 280.0, 6.0, 0.08;
  return s;
}

TEST(Stoichiometry, ProductionThenDegradation) {
  const Stoichiometry& S = stoichiometry();
  Eigen::Matrix<int, 4, 8> expected;
  expected << Eigen::Matrix4i::Identity(), -Eigen::Matrix4i::Identity();
  EXPECT_EQ(S, expected);
}

TEST(Propensities, ReferenceValues) {
  const ModelParams p;
  const PropensityVector a0 = propensities(FullState::Zero(), p);
  EXPECT_NEAR(a0[0], 8.332, 1e-12);
  EXPECT_NEAR(a0[1], 2.179, 1e-12);
  for (int i = 2; i < 8; ++i) {
    EXPECT_EQ(a0[i], 0.0);
  }
  FullState s = FullState::Zero();
  s[kX1] = 10.0;
  const PropensityVector a = propensities(s, p);
  EXPECT_NEAR(a[2], 9.726, 1e-12);
  EXPECT_NEAR(a[4], 1.386, 1e-12);
  EXPECT_GE(a.minCoeff(), 0.0);
}

TEST(Propensities, DriftEqualsDeterministicModelProperty) {
  const ModelParams p;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> val(0.0, 1000.0);
  for (int i = 0; i < 500; ++i) {
    FullState s;
    s << val(rng) / 50, val(rng) / 50, val(rng), val(rng), val(rng) / 25, val(rng) / 2500;
    const Eigen::Vector4d drift = stoichiometry().cast<double>() * propensities(s, p);
    const FullState d = full_rhs(s, {}, p);
    EXPECT_LT((drift - d.head<4>()).norm(), 1e-12 * (1.0 + d.head<4>().norm()));
  }
}

TEST(EmStep, ZeroNoiseIsEulerStep) {
  const ModelParams p;
  const FullState s = operating_point();
  const InputPair u{20.0, 0.05};
  const FullState next = em_step(s, u, 0.1, WienerIncrement::Zero(), p);
  const FullState euler = s + 0.1 * full_rhs(s, u, p);
  EXPECT_LT((next - euler).norm(), 1e-12 * euler.norm());
}

TEST(EmStep, FromEmptyCell) {
  const ModelParams p;
  const FullState next = em_step(FullState::Zero(), {}, 0.1, WienerIncrement::Zero(), p);
  EXPECT_NEAR(next[kX1], 0.8332, 1e-12);
  EXPECT_NEAR(next[kX2], 0.2179, 1e-12);
  EXPECT_EQ(next.tail<4>(), Eigen::Vector4d::Zero());
}

TEST(EmStep, EnsembleMomentsMatchLangevinIncrement) {
  const ModelParams p;
  const FullState s = operating_point();
  const InputPair u{6.0, 0.08};
  const double dt = 0.1;
  const PropensityVector a = propensities(s, p);
  const Eigen::Matrix<double, 4, 8> S = stoichiometry().cast<double>();
  const Eigen::Vector4d mean_expected = s.head<4>() + S * a * dt;
  const Eigen::Matrix4d cov_expected = S * a.asDiagonal() * S.transpose() * dt;

  Rng rng = make_rng(99, Stream::kValidation, 0);
  const int n = 40000;
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  Eigen::Matrix4d outer = Eigen::Matrix4d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector4d x = em_step(s, u, dt, rng, p).head<4>();
    sum += x;
    outer += x * x.transpose();
  }
  const Eigen::Vector4d mean = sum / n;
  const Eigen::Matrix4d cov = outer / n - mean * mean.transpose();
  for (int i = 0; i < 4; ++i) {
    const double se = std::sqrt(cov_expected(i, i) / n);
    EXPECT_NEAR(mean[i], mean_expected[i], 3.0 * se) << "component " << i;
    EXPECT_NEAR(cov(i, i), cov_expected(i, i), 0.05 * cov_expected(i, i)) << "component " << i;
  }
  // Reactions are independent across species: off-diagonal terms vanish.
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      EXPECT_NEAR(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j)), 0.0, 0.03);
    }
  }
}

TEST(EmStep, LargeStepsStayNonNegative) {
  const ModelParams p;
  Rng rng = make_rng(5, Stream::kValidation, 3);
  FullState s;
  s << 0.1, 0.1, 1.0, 1.0, 0.0, 0.0;
  for (int i = 0; i < 2000; ++i) {
    s = em_step(s, {0.0, 0.0}, 50.0, rng, p);
    ASSERT_GE(s.minCoeff(), 0.0);
  }
}

TEST(EmStep, RejectsNonPositiveStep) {
  const ModelParams p;
  EXPECT_THROW(em_step(operating_point(), {}, 0.0, WienerIncrement::Zero(), p), std::invalid_argument);
  EXPECT_THROW(em_step(operating_point(), {}, -0.1, WienerIncrement::Zero(), p), std::invalid_argument);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = make_rng(7, Stream::kTraining, 2);
  Rng b = make_rng(7, Stream::kTraining, 2);
  Rng c = make_rng(7, Stream::kValidation, 2);
  Rng d = make_rng(7, Stream::kTraining, 3);
  Rng e = make_rng(8, Stream::kTraining, 2);
  const auto first = a();
  EXPECT_EQ(first, b());
  EXPECT_NE(first, c());
  EXPECT_NE(first, d());
  EXPECT_NE(first, e());

  const ModelParams p;
  Rng r1 = make_rng(3, Stream::kValidation, 0);
  Rng r2 = make_rng(3, Stream::kValidation, 0);
  FullState s1 = operating_point();
  FullState s2 = operating_point();
  for (int i = 0; i < 100; ++i) {
    s1 = em_step(s1, {1.0, 0.1}, 0.1, r1, p);
    s2 = em_step(s2, {1.0, 0.1}, 0.1, r2, p);
  }
  EXPECT_EQ(s1, s2);
}

}  // namespace
}  // namespace toggle
