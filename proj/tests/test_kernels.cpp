#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/kernels.hpp"
#include "lqg/rng.hpp"

namespace lqg {
namespace {

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> noise(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(count);
  for (double& v : x) v = rng.normal();
  return x;
}

class ThreadGuard {
 public:
  explicit ThreadGuard(int threads) { set_thread_count(threads); }
  ~ThreadGuard() { set_thread_count(0); }
};

TEST(Rng, DerivedSeedsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
  Rng a(3, {4}), b(3, {4});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Rng, UniformPosNeverZero) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_pos();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(xs), 2.0);
  std::vector<double> many(100000, 0.1);
  EXPECT_NEAR(compensated_sum(many), 10000.0, 1e-9);
}

TEST(Kernels, ChunkedSumMatchesAcrossThreadCounts) {
  const auto x = noise(3 * kernels::kReduceChunk + 17, 5);
  const double ref = kernels::serial::chunked_sum(x);
  for (int t : {1, 2, 3, 4}) {
    ThreadGuard g(t);
    EXPECT_EQ(kernels::omp::chunked_sum(x), ref) << t << " threads";
  }
}

TEST(Kernels, ExpScaleBitIdentical) {
  const auto h = noise(10007, 6);
  std::vector<double> a(h.size()), b(h.size());
  kernels::serial::exp_scale(h, 0.7, 1e-3, a);
  for (int t : {1, 4}) {
    ThreadGuard g(t);
    kernels::omp::exp_scale(h, 0.7, 1e-3, b);
    EXPECT_TRUE(bit_equal(a, b));
  }
  EXPECT_DOUBLE_EQ(a[0], 1e-3 * std::exp(0.7 * h[0]));
}

TEST(Kernels, StencilMatchesDefinitionAndIsBitIdentical) {
  const int n = 9;
  const auto x = noise(n * n, 7);
  std::vector<double> a(x.size()), b(x.size());
  kernels::serial::stencil_apply(n, x, a);
  for (int t : {1, 3}) {
    ThreadGuard g(t);
    kernels::omp::stencil_apply(n, x, b);
    EXPECT_TRUE(bit_equal(a, b));
  }
  auto at = [&](int r, int c) { return (r < 0 || c < 0 || r >= n || c >= n) ? 0.0 : x[r * n + c]; };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double want = 4 * at(r, c) - at(r - 1, c) - at(r + 1, c) - at(r, c - 1) - at(r, c + 1);
      EXPECT_NEAR(a[r * n + c], want, 1e-12);
    }
}

TEST(Kernels, SineSynthesisBitIdenticalAndInvertible) {
  const int n = 15;
  const SineBasis basis = make_sine_basis(n);
  const auto c = noise(n * n, 8);
  std::vector<double> a(c.size()), b(c.size()), back(c.size());
  kernels::serial::sine_synthesis(n, basis.u, c, a);
  for (int t : {1, 2, 4}) {
    ThreadGuard g(t);
    kernels::omp::sine_synthesis(n, basis.u, c, b);
    EXPECT_TRUE(bit_equal(a, b));
  }
  // The basis is orthonormal and symmetric, so applying it twice is the identity.
  kernels::serial::sine_synthesis(n, basis.u, a, back);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(back[i], c[i], 1e-12);
}

TEST(Kernels, MapIndexBitIdentical) {
  auto fn = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)); };
  std::vector<double> a(5000), b(5000);
  kernels::serial::map_index(a.size(), fn, a);
  ThreadGuard g(4);
  kernels::omp::map_index(b.size(), fn, b);
  EXPECT_TRUE(bit_equal(a, b));
}

TEST(Kernels, ThreadCapFromOverride) {
  ThreadGuard g(2);
  EXPECT_LE(thread_count(), 2);
  EXPECT_GE(thread_count(), 1);
}

}  // namespace
}  // namespace lqg
