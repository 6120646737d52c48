#include <gtest/gtest.h>

#include "nsac/constitutive.hpp"
#include "nsac/presets.hpp"

using namespace nsac;

TEST(PressureLaw, GammaTwoValues) {
  const PressureLaw law(1.0, 2.0);
  EXPECT_DOUBLE_EQ(law.pressure(2.0), 4.0);
  EXPECT_DOUBLE_EQ(law.potential(2.0), 4.0);
  EXPECT_DOUBLE_EQ(law.pressure(0.0), 0.0);
  EXPECT_DOUBLE_EQ(law.potential(0.0), 0.0);
  EXPECT_THROW(law.pressure(-0.1), std::invalid_argument);
  EXPECT_THROW(PressureLaw(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(PressureLaw(1.0, 1.0), std::invalid_argument);
}

TEST(PressureLaw, PotentialRelationByFiniteDifferences) {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const PressureLaw law(1.3, gamma);
    for (double r : {0.5, 1.0, 3.0}) {
      const double e = 1e-6;
      const double dP = (law.potential(r + e) - law.potential(r - e)) / (2.0 * e);
      EXPECT_NEAR(dP * r - law.potential(r) - law.pressure(r), 0.0, 1e-7 * std::max(1.0, law.pressure(r)));
      EXPECT_NEAR(law.potential_derivative(r), dP, 1e-7 * std::max(1.0, dP));
      const double d2P = (law.potential_derivative(r + e) - law.potential_derivative(r - e)) / (2.0 * e);
      EXPECT_NEAR(law.potential_second_derivative(r), d2P, 1e-6 * std::max(1.0, d2P));
      const double dp = (law.pressure(r + e) - law.pressure(r - e)) / (2.0 * e);
      EXPECT_NEAR(law.pressure_derivative(r), dp, 1e-6 * std::max(1.0, dp));
    }
  }
}

TEST(PressureLaw, BregmanIsNonNegative) {
  const PressureLaw law(1.0, 1.5);
  for (double x : {0.0, 0.1, 1.0, 4.0}) {
    for (double y : {0.2, 1.0, 3.0}) EXPECT_GE(law.bregman(x, y), 0.0);
  }
  EXPECT_DOUBLE_EQ(law.bregman(2.0, 2.0), 0.0);
}

TEST(GinzburgLandau, BranchValues) {
  EXPECT_DOUBLE_EQ(ginzburg_landau(0.0), 0.25);
  EXPECT_DOUBLE_EQ(ginzburg_landau(-3.0), 4.0);
  EXPECT_DOUBLE_EQ(ginzburg_landau(1.0), 0.0);
  EXPECT_DOUBLE_EQ(ginzburg_landau(-1.0), 0.0);
  // One-sided first and second derivatives agree at +-1.
  const double e = 1e-5;
  for (double s : {-1.0, 1.0}) {
    const double left = (ginzburg_landau(s) - ginzburg_landau(s - e)) / e;
    const double right = (ginzburg_landau(s + e) - ginzburg_landau(s)) / e;
    EXPECT_NEAR(left, 0.0, 1e-4);
    EXPECT_NEAR(right, 0.0, 1e-4);
    const double d2_left = (ginzburg_landau_derivative(s) - ginzburg_landau_derivative(s - e)) / e;
    const double d2_right = (ginzburg_landau_derivative(s + e) - ginzburg_landau_derivative(s)) / e;
    EXPECT_NEAR(d2_left, 2.0, 1e-4);
    EXPECT_NEAR(d2_right, 2.0, 1e-4);
  }
}

TEST(FSplit, BranchExamples) {
  EXPECT_DOUBLE_EQ(f_split(2.0, 0.7), 2.0);
  EXPECT_DOUBLE_EQ(f_split(2.0, -5.0), 2.0);
  EXPECT_NEAR(f_split(0.5, 0.2), -0.075, 1e-15);
  EXPECT_DOUBLE_EQ(f_split(-1.0, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(f_split(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(f_split(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f_split(-1.0 - 1e-14, -1.0), f_split(-1.0 - 1e-14, 0.3));
}

TEST(FSplit, DerivativeMatchesFiniteDifferences) {
  for (double c : {-2.5, -0.6, 0.0, 0.4, 1.7}) {
    const double e = 1e-6;
    const double fd = (f_split(c + e, 0.3) - f_split(c - e, 0.3)) / (2.0 * e);
    EXPECT_NEAR(f_split_derivative(c), fd, 1e-7);
  }
}

TEST(FSplit, ConvexConcaveInequality) {
  // f(c, c0) (c - c0) >= F(c) - F(c0) on every branch pair.
  for (double c : {-2.0, -1.0, -0.5, 0.0, 0.3, 1.0, 1.5}) {
    for (double c0 : {-1.7, -0.9, 0.0, 0.8, 2.2}) {
      EXPECT_GE(f_split(c, c0) * (c - c0) - (ginzburg_landau(c) - ginzburg_landau(c0)), -1e-14) << c << " " << c0;
    }
  }
}

TEST(Presets, KnownNamesAndPositiveDensity) {
  for (const std::string& name : preset_names()) {
    const InitialData d = preset(name);
    EXPECT_EQ(d.name, name);
    for (double x : {-1.0, -0.3, 0.0, 0.6}) {
      for (double y : {-0.9, 0.0, 0.45}) EXPECT_GT(d.rho(Vec2(x, y)), 0.0);
    }
  }
  EXPECT_THROW(preset("nope"), std::invalid_argument);
  EXPECT_DOUBLE_EQ(preset("constant", 1.0).c(Vec2(0.2, 0.1)), 1.0);
}
