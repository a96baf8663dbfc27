#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference in lqg::kernels::serial and an OpenMP version in
// lqg::kernels::omp. Both walk the same per-element arithmetic in the same
// order, so their outputs are bit-identical for any thread count; the tests
// assert that and bench/ compares their speed.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lqg {

/// Number of worker threads the library may use. Defaults to the OpenMP
/// maximum, capped by the LQG_THREADS environment variable when set.
int thread_count();
void set_thread_count(int threads);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

namespace kernels {

/// Fixed block length for deterministic chunked reductions.
inline constexpr std::size_t kReduceChunk = 4096;

namespace serial {

/// out = U * C * U^T for n x n row-major matrices (U symmetric in practice:
/// the orthonormal discrete sine basis).
void sine_synthesis(int n, std::span<const double> basis, std::span<const double> coeff,
                    std::span<double> out);

/// out[i] = prefactor * exp(gamma * h[i]).
void exp_scale(std::span<const double> h, double gamma, double prefactor, std::span<double> out);

/// y = S x where S is the 5-point Dirichlet graph Laplacian on an n x n grid.
void stencil_apply(int n, std::span<const double> x, std::span<double> y);

/// Compensated sum evaluated in fixed chunks of kReduceChunk, chunk partials
/// combined in order.
double chunked_sum(std::span<const double> xs);

/// out[i] = fn(i) for i in [0, count).
void map_index(std::size_t count, const std::function<double(std::size_t)>& fn, std::span<double> out);

}  // namespace serial

namespace omp {

void sine_synthesis(int n, std::span<const double> basis, std::span<const double> coeff,
                    std::span<double> out);
void exp_scale(std::span<const double> h, double gamma, double prefactor, std::span<double> out);
void stencil_apply(int n, std::span<const double> x, std::span<double> y);
double chunked_sum(std::span<const double> xs);
void map_index(std::size_t count, const std::function<double(std::size_t)>& fn, std::span<double> out);

}  // namespace omp
}  // namespace kernels
}  // namespace lqg
