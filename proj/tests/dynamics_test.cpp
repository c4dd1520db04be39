#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "toggle/dynamics.hpp"

namespace toggle {
namespace {

using oracle::Table;

FullState make_state(double x1, double x2, double x3, double x4, double v1, double v2) {
  FullState s;
  s << x1, x2, x3, x4, v1, v2;
  return s;
}

TEST(Hill, ReferenceValues) {
  const ModelParams p;
  EXPECT_DOUBLE_EQ(hill_aTc(0.0, p), 1.0);
  EXPECT_DOUBLE_EQ(hill_aTc(Table::theta_aTc, p), 0.5);
  EXPECT_DOUBLE_EQ(hill_IPTG(Table::theta_IPTG, p), 0.5);
  EXPECT_NEAR(hill_IPTG(0.5 * Table::theta_IPTG, p), 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(hill_LacI(Table::theta_TetR, 0.0, p), 0.5);
  EXPECT_NEAR(hill_LacI(2.0 * Table::theta_TetR, 0.0, p), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(hill_TetR(Table::theta_LacI, 0.0, p), 0.5);
  EXPECT_DOUBLE_EQ(hill_LacI(0.0, 100.0, p), 1.0);
  // Half-saturated aTc halves the effective repressor: 30 * 0.5 = 15.
  EXPECT_NEAR(hill_LacI(2.0 * Table::theta_TetR, Table::theta_aTc, p), 0.5, 1e-15);
}

TEST(Hill, NegativeArgumentsAreRejected) {
  const ModelParams p;
  EXPECT_THROW(hill_aTc(-1.0, p), std::domain_error);
  EXPECT_THROW(hill_LacI(-1e-9, 0.0, p), std::domain_error);
  EXPECT_THROW(hill_TetR(1.0, -2.0, p), std::domain_error);
}

TEST(Hill, RangeAndMonotonicityProperty) {
  const ModelParams p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> protein(0.0, 2000.0);
  std::uniform_real_distribution<double> inducer(0.0, 100.0);
  std::uniform_real_distribution<double> step(1e-3, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = protein(rng);
    const double v = inducer(rng);
    const double dx = step(rng);
    const double h = hill_LacI(x, v, p);
    EXPECT_GT(h, 0.0);
    EXPECT_LE(h, 1.0);
    EXPECT_LE(hill_LacI(x + dx, v, p), h);
    EXPECT_GE(hill_LacI(x, v + dx, p), h);
    const double g = hill_TetR(x / 20.0, v / 100.0, p);
    EXPECT_GT(g, 0.0);
    EXPECT_LE(g, 1.0);
    EXPECT_LE(hill_TetR(x / 20.0 + dx, v / 100.0, p), g);
    EXPECT_GE(hill_TetR(x / 20.0, v / 100.0 + dx, p), g);
  }
}

TEST(FullRhs, ReferenceValues) {
  const ModelParams p;
  const FullState d0 = full_rhs(FullState::Zero(), {}, p);
  EXPECT_NEAR(d0[kX1], 8.332, 1e-12);
  EXPECT_NEAR(d0[kX2], 2.179, 1e-12);
  EXPECT_DOUBLE_EQ(d0[kX3], 0.0);
  EXPECT_DOUBLE_EQ(d0[kX4], 0.0);
  EXPECT_DOUBLE_EQ(d0[kV1], 0.0);
  EXPECT_DOUBLE_EQ(d0[kV2], 0.0);

  const FullState d1 = full_rhs(FullState::Zero(), {10.0, 0.0}, p);
  EXPECT_NEAR(d1[kV1], 0.275, 1e-15);

  // Efflux uses k_out once the inside exceeds the outside.
  const FullState d2 = full_rhs(make_state(0, 0, 0, 0, 10.0, 1.0), {0.0, 0.0}, p);
  EXPECT_NEAR(d2[kV1], -10.0 * Table::k_out_aTc, 1e-15);
  EXPECT_NEAR(d2[kV2], -1.0 * Table::k_out_IPTG, 1e-15);

  const FullState d3 = full_rhs(make_state(10.0, 2.0, 100.0, 50.0, 0, 0), {}, p);
  EXPECT_NEAR(d3[kX3], Table::kp * 10.0 - Table::gp * 100.0, 1e-12);
  EXPECT_NEAR(d3[kX4], Table::kp * 2.0 - Table::gp * 50.0, 1e-12);
}

TEST(FullRhs, InducerAtEquilibriumHasZeroFlux) {
  const ModelParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double u1 = u(rng);
    const double u2 = u(rng) / 100.0;
    const FullState d = full_rhs(make_state(1, 1, 1, 1, u1, u2), {u1, u2}, p);
    EXPECT_EQ(d[kV1], 0.0);
    EXPECT_EQ(d[kV2], 0.0);
  }
}

TEST(FullRhs, BoundaryFacesPointInwardProperty) {
  const ModelParams p;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> val(0.0, 1000.0);
  std::uniform_real_distribution<double> in(0.0, 40.0);
  for (int i = 0; i < 2000; ++i) {
    FullState s = make_state(val(rng) / 10, val(rng) / 10, val(rng), val(rng), in(rng), in(rng) / 100);
    const InputPair u{in(rng), in(rng) / 100};
    const int face = static_cast<int>(rng() % 6);
    s[face] = 0.0;
    EXPECT_GE(full_rhs(s, u, p)[face], 0.0) << "face " << face;
  }
}

TEST(FullRhs, RejectsNegativeState) {
  const ModelParams p;
  EXPECT_THROW(full_rhs(make_state(0, 0, -1, 0, 0, 0), {}, p), std::domain_error);
  EXPECT_THROW(full_rhs(FullState::Zero(), {-1.0, 0.0}, p), std::domain_error);
}

TEST(ReducedRhs, ReferenceValues) {
  const ModelParams p;
  const ReducedCoeffs c = derive_reduced_coeffs(p);
  const ReducedState d = reduced_rhs(ReducedState::Zero(), Eigen::Vector2d::Zero(), c, p);
  EXPECT_NEAR(d[0], c.k0_1 + c.k_1, 1e-12);
  EXPECT_NEAR(d[1], c.k0_2 + c.k_2, 1e-12);
  // z2 = 1 with no aTc halves the LacI promoter.
  const ReducedState e = reduced_rhs(ReducedState(0.0, 1.0), Eigen::Vector2d::Zero(), c, p);
  EXPECT_NEAR(e[0], c.k0_1 + 0.5 * c.k_1, 1e-12);
}

TEST(ReducedRhs, SaturatingRepressorLeavesLeakOnly) {
  const ModelParams p;
  const ReducedCoeffs c = derive_reduced_coeffs(p);
  const ReducedState d = reduced_rhs(ReducedState(1e6, 3.0), Eigen::Vector2d::Zero(), c, p);
  EXPECT_NEAR(d[1], c.k0_2 - 3.0, 1e-9);
}

// With mRNA at its own quasi-steady state, the protein rows of the full model
// divided by gp * theta must equal the reduced model in every inducer state.
TEST(ReducedRhs, MatchesFullModelAtMrnaQuasiSteadyStateProperty) {
  const ModelParams p;
  const ReducedCoeffs c = derive_reduced_coeffs(p);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> z(0.0, 60.0);
  std::uniform_real_distribution<double> v1(0.0, 35.0);
  std::uniform_real_distribution<double> v2(0.0, 0.35);
  for (int i = 0; i < 1000; ++i) {
    const ReducedState zz(z(rng), z(rng));
    const Eigen::Vector2d v(v1(rng), v2(rng));
    FullState s = make_state(0, 0, zz[0] * Table::theta_LacI, zz[1] * Table::theta_TetR, v[0], v[1]);
    s[kX1] = (p.km0_L + p.km_L * hill_LacI(s[kX4], s[kV1], p)) / p.gm_L;
    s[kX2] = (p.km0_T + p.km_T * hill_TetR(s[kX3], s[kV2], p)) / p.gm_T;
    const FullState d = full_rhs(s, {v[0], v[1]}, p);
    const ReducedState r = reduced_rhs(zz, v, c, p);
    EXPECT_NEAR(r[0], d[kX3] / (p.gp_L * p.theta_LacI), 1e-9 * (1.0 + std::abs(r[0])));
    EXPECT_NEAR(r[1], d[kX4] / (p.gp_T * p.theta_TetR), 1e-9 * (1.0 + std::abs(r[1])));
  }
}

TEST(ReducedRhs, ThreeEquilibriaWithoutInducers) {
  const ModelParams p;
  const ReducedCoeffs c = derive_reduced_coeffs(p);
  // Oracle: z1 is a fixed point of z1 -> g1(g2(z1)).
  const auto g1 = [&](double z2) { return c.k0_1 + c.k_1 / (1.0 + z2 * z2); };
  const auto g2 = [&](double z1) { return c.k0_2 + c.k_2 / (1.0 + z1 * z1); };
  const auto roots = oracle::roots([&](double z1) { return g1(g2(z1)) - z1; }, 0.0, 120.0, 120000);
  ASSERT_EQ(roots.size(), 3u);

  const double frozen[3][2] = {{0.6492765, 22.230181}, {1.6773841, 9.3446489}, {28.260782, 1.7235103}};
  for (std::size_t i = 0; i < 3; ++i) {
    const ReducedState eq(roots[i], g2(roots[i]));
    EXPECT_NEAR(eq[0], frozen[i][0], 1e-6);
    EXPECT_NEAR(eq[1], frozen[i][1], 1e-6);
    const ReducedState d = reduced_rhs(eq, Eigen::Vector2d::Zero(), c, p);
    EXPECT_NEAR(d.norm(), 0.0, 1e-9);
  }
}

TEST(Conversion, ProteinScaling) {
  const ModelParams p;
  const ReducedState z = full_to_reduced(make_state(0, 0, 750.0, 300.0, 0, 0), p);
  EXPECT_NEAR(z[0], 23.48, 5e-3);
  EXPECT_NEAR(z[1], 10.00, 1e-12);

  const FullState s = reduced_to_full(ReducedState(20.68, 2.11), Eigen::Vector2d(1.0, 0.1), p);
  EXPECT_NEAR(s[kX3], 20.68 * Table::theta_LacI, 1e-9);
  EXPECT_NEAR(s[kX4], 2.11 * Table::theta_TetR, 1e-9);
  EXPECT_NEAR(s[kX1], Table::gp * s[kX3] / Table::kp, 1e-12);
  EXPECT_NEAR(s[kX2], Table::gp * s[kX4] / Table::kp, 1e-12);
  EXPECT_DOUBLE_EQ(s[kV1], 1.0);
  EXPECT_DOUBLE_EQ(s[kV2], 0.1);
  EXPECT_TRUE(full_to_reduced(s, p).isApprox(ReducedState(20.68, 2.11), 1e-14));
}

}  // namespace
}  // namespace toggle
