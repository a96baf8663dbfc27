#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/gmc.hpp"

namespace lqg {

enum class PathKind { BmDrift, Bridge2d, Conditioned, BetaTwoSided };

using Point2 = std::array<double, 2>;

/// A discretised path. Times are stored explicitly because conditioned and
/// two-sided paths have one non-uniform step next to the passage time.
struct PathSample {
  PathKind kind = PathKind::BmDrift;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> values;  // 1D paths
  std::vector<Point2> points;  // 2D paths
  double m = 0.0;
  double level = 0.0;
  double duration = 0.0;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  double gamma = 0.0;
  double m = 0.0;
  double dt = 0.0;
  double t_max = 0.0;
  std::optional<double> target;
};

/// Mean and standard error (sample sd / sqrt(n)) of per-path values.
MCEstimate summarize(const std::vector<double>& values);

/// b_s = W_s - (s/l) W_l + anchor per coordinate on a uniform grid of `steps` steps.
PathSample sample_bridge2d(Point2 anchor, double duration, int steps, std::uint64_t seed);

struct BridgeMaxResult {
  std::vector<double> levels;
  std::vector<double> probability;
  std::vector<double> std_error;
  std::vector<double> exact;  // e^{-2 k^2 / l}
};

/// P(max_s b_s >= k) for a 1D Brownian bridge from 0 to 0 of length l. With
/// exact_fill the maximum inside each step is drawn from its exact
/// Brownian-bridge law, so the estimate is unbiased at any step count; without
/// it the maximum over grid points is used.
BridgeMaxResult bridge_max_check(double duration, int steps, const std::vector<double>& levels, long samples,
                                 std::uint64_t seed, bool exact_fill = true, Exec exec = Exec::Parallel);

/// Empirical P(max_s |b_s - anchor| <= u) for a 2D bridge, per u.
std::vector<double> bridge2d_small_ball(double duration, int steps, const std::vector<double>& u, long samples,
                                        std::uint64_t seed, Exec exec = Exec::Parallel);

/// Brownian motion with drift m conditioned to stay non-negative, on [0, L_x],
/// obtained by reversing B_t + m t at its first passage of x. The passage is
/// detected with the exact in-step crossing probability and its time is placed
/// by linear interpolation.
PathSample sample_conditioned(double m, double level, double dt, std::uint64_t seed);

/// Conditioned process run until time >= duration (pieces pasted at last
/// passage times), truncated to [0, duration].
PathSample sample_conditioned_until(double m, double duration, double dt, std::uint64_t seed);

/// Two-sided beta^m on [-T, T]: conditioned process (reversed in time) for
/// t < 0, B_t - m t for t > 0, beta_0 = 0.
PathSample sample_beta(double m, double duration, double dt, std::uint64_t seed);

/// Value of a 1D path at time t by linear interpolation.
double value_at(const PathSample& path, double t);

enum class ConditionedMethod { Williams, HTransform, Rejection };

/// Samples of the conditioned process at time t. The h-transform sampler runs
/// dX = m coth(m X) dt + dB from X_0 = 1e-6; the rejection sampler keeps
/// B_s + m s paths from 0 that stay non-negative at every grid point of [0, 8].
std::vector<double> conditioned_marginal(ConditionedMethod method, double m, double t, long samples, double dt,
                                         std::uint64_t seed, Exec exec = Exec::Parallel);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

enum class ConeFunctional { I, ITilde, Custom };

const char* to_string(ConeFunctional f);

struct ConeOptions {
  double gamma = 1.0;
  double m = 1.0;
  ConeFunctional functional = ConeFunctional::I;
  double lambda_scale = 1.0;  // integrand f(lambda e^{gamma beta})
  std::function<double(double)> custom;
  double dt = 1e-3;
  long n_paths = 100000;
  std::uint64_t seed = 0;
  double horizon_factor = 1.0;  // multiplies the tail-bound horizon T
  Exec exec = Exec::Parallel;
};

/// T = max(2*6.9/(gamma m), 8*6.9/m^2, 4*6.9/(gamma m)).
double cone_horizon(double gamma, double m);

/// (1/pi) E int_{-T}^{T} f(lambda e^{gamma beta_t}) dt by trapezoidal
/// integration along sampled two-sided paths. For I and I_tilde the
/// conditioned side stops at the last passage of a level above which the
/// integrand is below 1e-20, and the drifted side stops once
/// lambda e^{gamma beta} <= 1e-8 (gamma m - gamma^2/2); both cuts are far below
/// the Monte Carlo error.
MCEstimate estimate_cone_constant(const ConeOptions& options);

/// F(b) = sum_steps dt * mu(cell(b_s)) / a^2, left-point rule over path steps
/// [first, last), nearest interior cell, points outside D contribute 0.
double liouville_clock(const PathSample& path, const LiouvilleMeasure& measure, const GreenTable& green,
                       std::size_t first = 0, std::size_t last = static_cast<std::size_t>(-1));

}  // namespace lqg
