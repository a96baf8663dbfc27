#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/rng.hpp"

namespace lqg {
namespace {

Eigen::MatrixXd dense_laplacian(int n) {
  const GridSpec spec{n, 0};
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto v = static_cast<Eigen::Index>(spec.index(r, c));
      s(v, v) = 4.0;
      if (c > 0) s(v, v - 1) = -1.0;
      if (c + 1 < n) s(v, v + 1) = -1.0;
      if (r > 0) s(v, v - n) = -1.0;
      if (r + 1 < n) s(v, v + n) = -1.0;
    }
  return s;
}

TEST(Gff, SingleNodeClosedForm) {
  const GridField f = sample_gff(GridSpec{1, 9});
  ASSERT_EQ(f.values.size(), 1u);
  const GreenTable g = discrete_green(GridSpec{1, 0}, {});
  EXPECT_NEAR(g.diag[0], std::numbers::pi / 2.0, 1e-14);
}

TEST(Gff, RejectsEmptyGrid) { EXPECT_THROW(sample_gff(GridSpec{0, 1}), Error); }

TEST(Grid, SpacingTimesSideIsOne) {
  for (int n : {1, 3, 7, 15, 127, 255}) EXPECT_EQ((GridSpec{n, 0}.spacing() * (n + 1)), 1.0);
  for (int n = 1; n <= 2000; ++n) {
    const double prod = GridSpec{n, 0}.spacing() * (n + 1);
    EXPECT_LE(std::abs(prod - 1.0), std::nextafter(1.0, 2.0) - 1.0) << n;
  }
}

TEST(Gff, DeterministicAndScheduleIndependent) {
  const GridSpec spec{33, 42};
  const GridField a = sample_gff(spec, Exec::Serial);
  const GridField b = sample_gff(spec, Exec::Parallel);
  const GridField c = sample_gff(spec, Exec::Parallel);
  ASSERT_EQ(a.values.size(), b.values.size());
  EXPECT_EQ(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(b.values.data(), c.values.data(), b.values.size() * sizeof(double)), 0);
  EXPECT_NE(sample_gff(GridSpec{33, 43}).values[100], a.values[100]);
}

TEST(Gff, EmpiricalCovarianceMatchesInverseLaplacian) {
  const int n = 4;
  const int dim = n * n;
  const long samples = 200000;
  const SineBasis basis = make_sine_basis(n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (long s = 0; s < samples; ++s) {
    const GridField f = sample_gff(GridSpec{n, static_cast<std::uint64_t>(s + 1)}, basis, Exec::Serial);
    const Eigen::Map<const Eigen::VectorXd> h(f.values.data(), dim);
    acc.noalias() += h * h.transpose();
    mean += h;
  }
  acc /= static_cast<double>(samples);
  mean /= static_cast<double>(samples);
  const Eigen::MatrixXd c = 2.0 * std::numbers::pi * dense_laplacian(n).inverse();
  for (int v = 0; v < dim; ++v) {
    EXPECT_LE(std::abs(mean[v]), 4.0 * std::sqrt(c(v, v) / samples));
    for (int w = 0; w < dim; ++w) {
      const double se = std::sqrt((c(v, v) * c(w, w) + c(v, w) * c(v, w)) / samples);
      EXPECT_LE(std::abs(acc(v, w) - c(v, w)), 4.0 * se) << v << "," << w;
    }
  }
}

TEST(Green, MatchesDenseInverseAndIsSymmetric) {
  const int n = 6;
  const GridSpec spec{n, 0};
  const std::vector<NodePair> probes{{0, 35}, {14, 21}, {7, 7}};
  const GreenTable g = discrete_green(spec, probes);
  const Eigen::MatrixXd c = 2.0 * std::numbers::pi * dense_laplacian(n).inverse();
  for (int v = 0; v < n * n; ++v) EXPECT_NEAR(g.diag[v], c(v, v), 1e-12);
  for (const auto& [v, w] : probes) {
    EXPECT_NEAR(g.at(v, w), c(v, w), 1e-12);
    EXPECT_NEAR(g.at(v, w), g.at(w, v), 1e-12);
  }
  for (const auto& [v, row] : g.rows)
    for (double x : row) EXPECT_GE(x, 0.0);
}

TEST(Green, SchedulesAgree) {
  const GridSpec spec{17, 0};
  const std::vector<NodePair> probes{{144, 10}};
  const GreenTable a = discrete_green(spec, probes, Exec::Serial);
  const GreenTable b = discrete_green(spec, probes, Exec::Parallel);
  EXPECT_EQ(a.diag, b.diag);
  EXPECT_EQ(a.rows, b.rows);
}

std::size_t center(int n) { return GridSpec{n, 0}.index(n / 2, n / 2); }

TEST(ConformalRadius, OffDiagonalSelfConsistency) {
  const int n = 63;
  const GridSpec spec{n, 0};
  const std::size_t v = center(n);
  const std::size_t w = spec.index(n / 2, n / 2 + 8);
  const GreenTable g = discrete_green(spec, std::vector<NodePair>{{v, w}});
  const double r = conformal_radius_estimate(g, v);
  EXPECT_NEAR(g.at(v, w), -std::log(8.0 * spec.spacing()) + std::log(r), 0.05);
}

TEST(ConformalRadius, KoebeSandwich) {
  const int n = 63;
  const GridSpec spec{n, 0};
  std::vector<NodePair> probes;
  std::vector<std::size_t> nodes{center(n), spec.index(20, 31), spec.index(24, 35), spec.index(38, 26)};
  for (auto v : nodes) probes.emplace_back(v, v);
  const GreenTable g = discrete_green(spec, probes);
  for (auto v : nodes) {
    const double d = spec.boundary_distance(v);
    const double r = conformal_radius_estimate(g, v);
    EXPECT_GE(r, d);
    EXPECT_LE(r, 4.0 * d + 1e-3);
  }
}

TEST(ConformalRadius, StableAcrossResolutions) {
  std::vector<double> r;
  for (int n : {63, 127, 255}) {
    const std::size_t v = center(n);
    r.push_back(conformal_radius_estimate(discrete_green(GridSpec{n, 0}, std::vector<NodePair>{{v, v}}), v));
  }
  EXPECT_NEAR(r[1] / r[0], 1.0, 0.02);
  EXPECT_NEAR(r[2] / r[1], 1.0, 0.02);
}

TEST(ConformalRadius, InsufficientProbesNearBoundary) {
  const GridSpec spec{15, 0};
  const std::size_t v = spec.index(1, 1);
  const GreenTable g = discrete_green(spec, std::vector<NodePair>{{v, v}});
  EXPECT_THROW(conformal_radius_estimate(g, v), Error);
}

TEST(ConformalRadius, UnitDiscAtOrigin) { EXPECT_NEAR(conformal_radius_disc(129), 1.0, 0.02); }

TEST(DiscSeries, ZeroAtOriginAndDomainChecks) {
  const std::vector<std::complex<double>> pts{{0.0, 0.0}, {0.5, 0.0}};
  for (std::uint64_t s = 1; s < 20; ++s) EXPECT_EQ(sample_disc_series_field(32, pts, s)[0], 0.0);
  const std::vector<std::complex<double>> outside{{1.0, 0.0}};
  EXPECT_THROW(sample_disc_series_field(8, outside, 1), Error);
}

struct Moments {
  double var1 = 0.0, var2 = 0.0, cov = 0.0;
  double se1 = 0.0, se_cov = 0.0;
};

Moments disc_moments(int k_max, std::complex<double> z1, std::complex<double> z2, long samples) {
  const std::vector<std::complex<double>> pts{z1, z2};
  double s11 = 0, s22 = 0, s12 = 0, q11 = 0, q12 = 0;
  for (long s = 0; s < samples; ++s) {
    const auto y = sample_disc_series_field(k_max, pts, static_cast<std::uint64_t>(s + 1));
    s11 += y[0] * y[0];
    s22 += y[1] * y[1];
    s12 += y[0] * y[1];
    q11 += y[0] * y[0] * y[0] * y[0];
    q12 += y[0] * y[0] * y[1] * y[1];
  }
  const double n = static_cast<double>(samples);
  Moments m;
  m.var1 = s11 / n;
  m.var2 = s22 / n;
  m.cov = s12 / n;
  m.se1 = std::sqrt((q11 / n - m.var1 * m.var1) / n);
  m.se_cov = std::sqrt((q12 / n - m.cov * m.cov) / n);
  return m;
}

TEST(DiscSeries, VarianceAndCovarianceKernel) {
  const std::complex<double> z1(0.3, 0.0), z2(0.0, -0.4);
  const Moments m = disc_moments(64, {0.5, 0.0}, z1, 100000);
  EXPECT_NEAR(m.var1, -std::log(1.0 - 0.25), 4.0 * m.se1);
  const Moments c = disc_moments(64, z1, z2, 100000);
  EXPECT_NEAR(c.cov, -std::log(std::abs(1.0 - z1 * std::conj(z2))), 4.0 * c.se_cov);
}

TEST(DiscSeries, TruncationDoublingIsBelowNoise) {
  const Moments a = disc_moments(64, {0.5, 0.0}, {0.1, 0.0}, 50000);
  const Moments b = disc_moments(128, {0.5, 0.0}, {0.1, 0.0}, 50000);
  EXPECT_LT(std::abs(a.var1 - b.var1), a.se1);
}

}  // namespace
}  // namespace lqg
