#include "lqg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace lqg {

namespace {

int g_thread_override = 0;

int env_thread_cap() {
  const char* env = std::getenv("LQG_THREADS");
  if (env == nullptr) return 0;
  try {
    return std::max(0, std::stoi(env));
  } catch (...) {
    return 0;
  }
}

}  // namespace

int thread_count() {
  int threads = g_thread_override > 0 ? g_thread_override : omp_get_max_threads();
  const int cap = env_thread_cap();
  if (cap > 0) threads = std::min(threads, cap);
  return std::max(1, threads);
}

void set_thread_count(int threads) { g_thread_override = std::max(0, threads); }

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

namespace kernels {

namespace {

// One output row of T = U * C (i-k-j order).
inline void left_multiply_row(int n, const double* basis, const double* coeff, double* row_out, int i) {
  std::fill(row_out, row_out + n, 0.0);
  for (int k = 0; k < n; ++k) {
    const double u = basis[static_cast<std::size_t>(i) * n + k];
    const double* crow = coeff + static_cast<std::size_t>(k) * n;
    for (int j = 0; j < n; ++j) row_out[j] += u * crow[j];
  }
}

// One output row of out = T * U^T, with ut = U^T stored row-major.
inline void right_multiply_row(int n, const double* tmp, const double* ut, double* row_out, int i) {
  std::fill(row_out, row_out + n, 0.0);
  const double* trow = tmp + static_cast<std::size_t>(i) * n;
  for (int k = 0; k < n; ++k) {
    const double t = trow[k];
    const double* urow = ut + static_cast<std::size_t>(k) * n;
    for (int j = 0; j < n; ++j) row_out[j] += t * urow[j];
  }
}

std::vector<double> transpose(int n, std::span<const double> m) {
  std::vector<double> t(m.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j) * n + i] = m[static_cast<std::size_t>(i) * n + j];
  return t;
}

inline double stencil_at(int n, const double* x, int r, int c) {
  const std::size_t idx = static_cast<std::size_t>(r) * n + c;
  double acc = 4.0 * x[idx];
  if (c > 0) acc -= x[idx - 1];
  if (c + 1 < n) acc -= x[idx + 1];
  if (r > 0) acc -= x[idx - n];
  if (r + 1 < n) acc -= x[idx + n];
  return acc;
}

inline double chunk_partial(std::span<const double> xs, std::size_t chunk) {
  const std::size_t lo = chunk * kReduceChunk;
  const std::size_t hi = std::min(xs.size(), lo + kReduceChunk);
  CompensatedSum acc;
  for (std::size_t i = lo; i < hi; ++i) acc.add(xs[i]);
  return acc.value();
}

std::size_t chunk_count(std::size_t size) { return (size + kReduceChunk - 1) / kReduceChunk; }

}  // namespace

namespace serial {

void sine_synthesis(int n, std::span<const double> basis, std::span<const double> coeff,
                    std::span<double> out) {
  std::vector<double> tmp(static_cast<std::size_t>(n) * n);
  const auto ut = transpose(n, basis);
  for (int i = 0; i < n; ++i) left_multiply_row(n, basis.data(), coeff.data(), tmp.data() + static_cast<std::size_t>(i) * n, i);
  for (int i = 0; i < n; ++i) right_multiply_row(n, tmp.data(), ut.data(), out.data() + static_cast<std::size_t>(i) * n, i);
}

void exp_scale(std::span<const double> h, double gamma, double prefactor, std::span<double> out) {
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = prefactor * std::exp(gamma * h[i]);
}

void stencil_apply(int n, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) y[static_cast<std::size_t>(r) * n + c] = stencil_at(n, x.data(), r, c);
}

double chunked_sum(std::span<const double> xs) {
  const std::size_t chunks = chunk_count(xs.size());
  CompensatedSum acc;
  for (std::size_t c = 0; c < chunks; ++c) acc.add(chunk_partial(xs, c));
  return acc.value();
}

void map_index(std::size_t count, const std::function<double(std::size_t)>& fn, std::span<double> out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
}

}  // namespace serial

namespace omp {

void sine_synthesis(int n, std::span<const double> basis, std::span<const double> coeff,
                    std::span<double> out) {
  std::vector<double> tmp(static_cast<std::size_t>(n) * n);
  const auto ut = transpose(n, basis);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int i = 0; i < n; ++i) left_multiply_row(n, basis.data(), coeff.data(), tmp.data() + static_cast<std::size_t>(i) * n, i);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int i = 0; i < n; ++i) right_multiply_row(n, tmp.data(), ut.data(), out.data() + static_cast<std::size_t>(i) * n, i);
}

void exp_scale(std::span<const double> h, double gamma, double prefactor, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = prefactor * std::exp(gamma * h[i]);
}

void stencil_apply(int n, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) y[static_cast<std::size_t>(r) * n + c] = stencil_at(n, x.data(), r, c);
}

double chunked_sum(std::span<const double> xs) {
  const std::size_t chunks = chunk_count(xs.size());
  std::vector<double> partial(chunks);
  const auto count = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t c = 0; c < count; ++c) partial[c] = chunk_partial(xs, static_cast<std::size_t>(c));
  CompensatedSum acc;
  for (double p : partial) acc.add(p);
  return acc.value();
}

void map_index(std::size_t count, const std::function<double(std::size_t)>& fn, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = fn(static_cast<std::size_t>(i));
}

}  // namespace omp
}  // namespace kernels
}  // namespace lqg
