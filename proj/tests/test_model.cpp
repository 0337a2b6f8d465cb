#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rabi/model.hpp"

using namespace rabi;

TEST(ModelParams, ValidityAndUltrastrongFlag) {
  EXPECT_TRUE((ModelParams{1, 0.3, 2, 0.9, 0.7}.valid()));
  EXPECT_FALSE((ModelParams{-1, 0.3, 2, 0.9, 0.7}.valid()));
  EXPECT_FALSE((ModelParams{1, -0.3, 2, 0.9, 0.7}.valid()));
  EXPECT_TRUE((ModelParams{1, 0.3, 2, 0.9, 0.7}.ultrastrong()));
  EXPECT_FALSE((ModelParams{1, 0.3, 2, 0.05, 0.7}.ultrastrong()));
}

TEST(TrwaParams, ApproxValidFlag) {
  EXPECT_TRUE((TrwaParams{-0.1, 0.1}.approx_valid()));
  EXPECT_FALSE((TrwaParams{-0.11, 0.05}.approx_valid()));
  EXPECT_FALSE((TrwaParams{0.0, 0.2977}.approx_valid()));
}

TEST(CoefficientMode, Names) {
  EXPECT_EQ(to_string(CoefficientMode::approx), "approx");
  EXPECT_EQ(to_string(CoefficientMode::exact), "exact");
}

TEST(CoeffG0, ZeroDisplacement) {
  for (std::uint32_t n : {0u, 1u, 7u})
    for (auto mode : {CoefficientMode::approx, CoefficientMode::exact}) EXPECT_EQ(coeff_g0(0.0, n, mode), 1.0);
}

TEST(CoeffG0, ModesAgreeAtNZero) {
  EXPECT_EQ(coeff_g0(0.1, 0, CoefficientMode::exact), coeff_g0(0.1, 0, CoefficientMode::approx));
  EXPECT_NEAR(coeff_g0(0.1, 0, CoefficientMode::exact), std::exp(-0.02), 1e-16);
}

TEST(CoeffG0, FirstOrderClosedForm) {
  EXPECT_NEAR(coeff_g0(0.1, 1, CoefficientMode::exact), std::exp(-0.02) * (1 - 0.04), 1e-15);
}

TEST(CoeffF1, ZeroDisplacement) {
  EXPECT_EQ(coeff_f1(0.0, 3, CoefficientMode::exact), 0.0);
  EXPECT_EQ(coeff_f1(0.0, 3, CoefficientMode::approx), 0.0);
}

TEST(CoeffF1, ModesAgreeAtNZero) {
  EXPECT_NEAR(coeff_f1(0.1, 0, CoefficientMode::exact), 0.2 * std::exp(-0.02), 1e-16);
  EXPECT_NEAR(coeff_f1(0.1, 0, CoefficientMode::approx), 0.2 * std::exp(-0.02), 1e-16);
}

TEST(CoeffF1, RatioIsLaguerreOverNPlusOne) {
  const double ex = coeff_f1(0.1, 2, CoefficientMode::exact);
  const double ap = coeff_f1(0.1, 2, CoefficientMode::approx);
  EXPECT_NEAR(ex / ap, oracle::series_laguerre(2, 1, 0.04) / 3.0, 1e-15);
  EXPECT_NEAR(ex, oracle::f1(0.1, 2, true), 1e-15);
}

TEST(CoeffModes, ConvergeForSmallLambda) {
  for (double l : {0.001, 0.005, 0.01, -0.01})
    for (std::uint32_t n = 1; n <= 20; ++n) {
      const double bound = 4 * l * l * n * 2;
      const double g_ex = coeff_g0(l, n, CoefficientMode::exact), g_ap = coeff_g0(l, n, CoefficientMode::approx);
      EXPECT_LE(std::abs(g_ex - g_ap) / std::abs(g_ap), bound);
      const double f_ex = coeff_f1(l, n, CoefficientMode::exact), f_ap = coeff_f1(l, n, CoefficientMode::approx);
      EXPECT_LE(std::abs(f_ex - f_ap) / std::abs(f_ap), bound);
    }
}

TEST(ResidualEq8, Examples) {
  EXPECT_EQ(residual_eq8(1, 0.3, 0, 0), 0.0);
  EXPECT_EQ(residual_eq8(1.7, 0.3, 0.42, 0), 0.42);
  EXPECT_NEAR(residual_eq8(1, 0.3, 0.9, -0.5), 0.9 - 0.5 + 2 * 0.3 * (-0.5) * std::exp(-0.5), 1e-16);
}

TEST(ResidualEq9, Examples) {
  EXPECT_EQ(residual_eq9(1, 2, 0, 0), 0.0);
  EXPECT_EQ(residual_eq9(1, 2, 0.7, 0), 0.7);
  EXPECT_NEAR(residual_eq9(1, 2, 0.7, 0.2), 0.7 + 0.2 - 0.8 * std::exp(-0.08), 1e-16);
}

TEST(ResonanceResidual, Examples) {
  EXPECT_EQ(resonance_residual(0, 0, 0.9, 0.7, 1), 0.0);
  EXPECT_EQ(resonance_residual(0, 0.25, 0.9, 0.7, 1), 2 * 0.25 * 0.9);
  EXPECT_NEAR(resonance_residual(-0.2, 0.25, 0.9, 0.7, 1.0),
              2 * 0.25 * 0.9 + 2 * 0.7 * (-0.2) + 2 * (-0.2) * 0.25, 1e-16);
}

TEST(ResidualEq8, IncreasingInCoupling) {
  double prev = residual_eq8(1, 0.3, 0.0, -0.4);
  for (double g = 0.05; g <= 1.0; g += 0.05) {
    const double r = residual_eq8(1, 0.3, g, -0.4);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Residuals, OddInLambdaAtZeroCoupling) {
  for (double l : {0.01, 0.3, 0.9}) {
    EXPECT_EQ(residual_eq8(1.2, 0.4, 0, l), -residual_eq8(1.2, 0.4, 0, -l));
    EXPECT_EQ(residual_eq9(1.2, 0.4, 0, l), -residual_eq9(1.2, 0.4, 0, -l));
  }
}

TEST(EnergyOffset, Formula) {
  const ModelParams p{1.5, 0.3, 2, 0.9, 0.7};
  const TrwaParams t{-0.2, 0.25};
  EXPECT_NEAR(energy_offset(p, t), 0.04 * 1.5 + 0.0625 * 1.5 + 2 * -0.2 * 0.9 + 2 * 0.25 * 0.7, 1e-15);
}
