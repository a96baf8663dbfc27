#include <gtest/gtest.h>

#include <cmath>

#include "lqg/field.hpp"
#include "lqg/gmc.hpp"
#include "lqg/heat.hpp"
#include "lqg/kernels.hpp"
#include "lqg/spectral.hpp"

namespace lqg {
namespace {

TEST(HeatTrace, LinearCountingGivesInverseT) {
  // lambda_j = j / c has S(t) = 1 / (e^{t/c} - 1) ~ c / t.
  const double c = 0.2;
  std::vector<double> ev;
  for (int j = 1; j <= 20000; ++j) ev.push_back(j / c);
  const auto curve = heat_trace(ev, log_grid(1e-3, 1e-1, 9));
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    const double t = curve.t[i];
    EXPECT_NEAR(curve.s[i], 1.0 / std::expm1(t / c), 1e-9 * curve.s[i]);
    EXPECT_TRUE(curve.resolved[i]);
  }
  const auto plateau = plateau_decade(curve, c, 0.15);
  ASSERT_TRUE(plateau.has_value());
  EXPECT_GE(plateau->hi / plateau->lo, 10.0 * (1 - 1e-12));
}

TEST(HeatTrace, ResolutionGate) {
  std::vector<double> ev;
  for (int j = 1; j <= 100; ++j) ev.push_back(j * 10.0);
  EXPECT_DOUBLE_EQ(default_tail_slope(ev), 0.1);
  const auto curve = heat_trace(ev, {1e-4, 1.0});
  EXPECT_FALSE(curve.resolved[0]);
  EXPECT_TRUE(curve.resolved[1]);
  EXPECT_NEAR(curve.tail_bound[1], 0.1 * std::exp(-1000.0), 1e-300);
  EXPECT_THROW(heat_trace(ev, {0.0}), Error);
}

TEST(HeatTrace, NoPlateauWithoutResolvedDecade) {
  std::vector<double> ev;
  for (int j = 1; j <= 100; ++j) ev.push_back(j * 10.0);
  EXPECT_FALSE(plateau_decade(heat_trace(ev, log_grid(1e-5, 1e-3, 10)), 0.1, 0.15).has_value());
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(0.01, 100.0, 5);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_DOUBLE_EQ(g.back(), 100.0);
  EXPECT_NEAR(g[2], 1.0, 1e-14);
  EXPECT_THROW(log_grid(1.0, 1.0, 3), Error);
}

TEST(Laplace, MatchesDirectSum) {
  const std::vector<double> ev{1.0, 3.0, 7.0};
  const auto v = laplace_of_weighted_trace(ev, 2.0);
  EXPECT_NEAR(v.value, 1.0 / 9.0 + 1.0 / 25.0 + 1.0 / 81.0, 1e-15);
  EXPECT_NEAR(v.tail_bound, (3.0 / 7.0) / 9.0, 1e-15);
}

class HeatOnRoughGrid : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    measure_ = new LiouvilleMeasure(build_measure(sample_gff(GridSpec{21, 6}), 0.5));
    SolverOptions o;
    o.k = 200;
    o.want_vectors = true;
    spectrum_ = new Spectrum(solve_spectrum(assemble_pair(*measure_), o));
  }
  static void TearDownTestSuite() {
    delete spectrum_;
    delete measure_;
  }
  static LiouvilleMeasure* measure_;
  static Spectrum* spectrum_;
};

LiouvilleMeasure* HeatOnRoughGrid::measure_ = nullptr;
Spectrum* HeatOnRoughGrid::spectrum_ = nullptr;

TEST_F(HeatOnRoughGrid, WeightedJSumIdentity) {
  const double lambda = 30.0;
  const auto j = j_lambda_field(*spectrum_, lambda);
  CompensatedSum lhs;
  for (std::size_t x = 0; x < j.size(); ++x) lhs.add(j[x] * measure_->mass[x]);
  const double rhs = lambda * laplace_of_weighted_trace(spectrum_->eigenvalues, lambda).value;
  EXPECT_NEAR(lhs.value(), rhs, 1e-12 * rhs);
}

TEST_F(HeatOnRoughGrid, JFieldSchedulesAgreeAndMatchPointwise) {
  const auto a = j_lambda_field(*spectrum_, 12.0, Exec::Serial);
  const auto b = j_lambda_field(*spectrum_, 12.0, Exec::Parallel);
  EXPECT_EQ(a, b);
  const auto one = j_lambda(*spectrum_, 100, 12.0);
  EXPECT_DOUBLE_EQ(one.value, a[100]);
  EXPECT_FALSE(one.truncated);
  EXPECT_TRUE(j_lambda(*spectrum_, 100, 1e6).truncated);
}

TEST_F(HeatOnRoughGrid, DiagonalKernelIntegratesToTrace) {
  const double t = 20.0 / spectrum_->eigenvalues.back();
  CompensatedSum sum;
  for (std::size_t x = 0; x < measure_->mass.size(); ++x) sum.add(diagonal_kernel(*spectrum_, x, t) * measure_->mass[x]);
  const auto curve = heat_trace(spectrum_->eigenvalues, {t});
  EXPECT_NEAR(sum.value(), curve.s[0], 1e-10 * curve.s[0]);
  EXPECT_THROW(diagonal_kernel(*spectrum_, 0, 1e-3 / spectrum_->eigenvalues.back()), Error);
}

}  // namespace
}  // namespace lqg
