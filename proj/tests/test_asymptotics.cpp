#include <gtest/gtest.h>

#include <cmath>

#include "lqg/asymptotics.hpp"
#include "lqg/heat.hpp"

namespace lqg {
namespace {

TEST(Tauberian, PurePowerCases) {
  const auto grid = log_grid(10.0, 1e6, 11);
  for (double rho : {0.5, 1.0, 2.0, 3.5}) {
    const auto r = tauberian_check(rho, TauberianDensity::Power, grid);
    EXPECT_LE(r.max_deviation, 1e-6) << rho;
    EXPECT_EQ(r.ratio.size(), grid.size());
  }
}

TEST(Tauberian, RhoOneIsExact) {
  const auto r = tauberian_check(1.0, TauberianDensity::Power, {2.0, 4.0});
  EXPECT_NEAR(r.lhs[0], 1.0, 1e-10);
  EXPECT_NEAR(r.rhs[0], 1.0, 1e-10);
}

TEST(Tauberian, LogSlowlyVaryingConvergesSlowly) {
  const auto r = tauberian_check(0.5, TauberianDensity::LogPower, log_grid(1e2, 1e6, 5));
  EXPECT_LE(std::abs(r.ratio.back() - 1.0), 0.02);
  // The deviation decreases along the grid.
  for (std::size_t i = 1; i < r.ratio.size(); ++i)
    EXPECT_LE(std::abs(r.ratio[i] - 1.0), std::abs(r.ratio[i - 1] - 1.0));
}

TEST(Tauberian, Preconditions) {
  EXPECT_THROW(tauberian_check(0.0, TauberianDensity::Power, {2.0, 3.0}), Error);
  EXPECT_THROW(tauberian_check(4.5, TauberianDensity::Power, {2.0, 3.0}), Error);
  EXPECT_THROW(tauberian_check(1.0, TauberianDensity::Power, {0.5, 3.0}), Error);
  EXPECT_THROW(tauberian_check(1.0, TauberianDensity::Power, {3.0, 2.0}), Error);
}

TEST(AsympDiff, TrivialPowers) {
  const auto grid = log_grid(1e-6, 0.1, 6);
  const auto flat = asympdiff_check(1.0, 1.0, PhiShape::Power, grid);
  const auto inv = asympdiff_check(2.0, 1.0, PhiShape::Power, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(flat.lhs[i], 1.0, 1e-9);
    EXPECT_NEAR(flat.rhs[i], 1.0, 1e-12);
    EXPECT_NEAR(inv.lhs[i], 1.0, 1e-9);
    EXPECT_NEAR(inv.ratio[i], 1.0, 1e-12);
  }
}

TEST(AsympDiff, SandwichContainsRhs) {
  const auto grid = log_grid(1e-12, 1e-2, 6);
  const auto r = asympdiff_check(1.0, 0.5, PhiShape::Wobble, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(r.lower[i], r.rhs[i] * (1 + 1e-9));
    EXPECT_GE(r.upper[i], r.rhs[i] * (1 - 1e-9));
  }
}

TEST(AsympDiff, DecayingWobbleEnvelopeShrinksOntoBeta) {
  const auto grid = log_grid(1e-14, 1e-2, 7);
  const auto r = asympdiff_check(1.0, 0.5, PhiShape::DecayingWobble, grid);
  const double first = r.upper.back() - r.lower.back();
  const double last = r.upper.front() - r.lower.front();
  EXPECT_LT(last, 0.5 * first);
  EXPECT_LE(r.lower.front(), 0.5 + 1e-9);
  EXPECT_GE(r.upper.front(), 0.5 - 1e-9);
}

TEST(AsympDiff, RejectsIncreasingPhi) {
  // beta > alpha makes u^{beta - alpha} increasing.
  EXPECT_THROW(asympdiff_check(1.0, 2.0, PhiShape::Power, {0.1, 0.2}), Error);
}

}  // namespace
}  // namespace lqg
