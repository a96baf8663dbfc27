#pragma once

#include <optional>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/spectral.hpp"

namespace lqg {

/// Fraction of S(t) the omitted tail may reach for t to count as resolved.
inline constexpr double kHeatResolvedFraction = 0.01;
/// Tail fraction above which diagonal_kernel refuses to answer.
inline constexpr double kKernelRefuseFraction = 0.05;

struct HeatTraceCurve {
  std::vector<double> t;
  std::vector<double> s;
  std::vector<double> tail_bound;  // (slope / t) e^{-lambda_k t}
  std::vector<bool> resolved;      // tail_bound <= 1% of S
  double slope = 0.0;              // counting slope used for the tail
};

/// Counting slope used for truncation bounds when no fitted slope is given:
/// k / lambda_k.
double default_tail_slope(const std::vector<double>& eigenvalues);

/// S(t) = sum_{n<=k} e^{-lambda_n t} on the given grid.
HeatTraceCurve heat_trace(const std::vector<double>& eigenvalues, const std::vector<double>& t_grid,
                          std::optional<double> slope = std::nullopt);

/// Longest run of consecutive resolved grid points with |t S(t) / target - 1|
/// <= rel_tol, as [t_lo, t_hi]; empty when no such run spans a factor of 10.
struct TRange {
  double lo = 0.0;
  double hi = 0.0;
};
std::optional<TRange> plateau_decade(const HeatTraceCurve& curve, double target, double rel_tol);

/// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

struct LaplaceValue {
  double value = 0.0;       // sum 1 / (lambda + lambda_n)^2
  double tail_bound = 0.0;  // slope / (lambda + lambda_k)
};

LaplaceValue laplace_of_weighted_trace(const std::vector<double>& eigenvalues, double lambda,
                                       std::optional<double> slope = std::nullopt);

/// p_t(x, x) = sum e^{-lambda_n t} f_n(x)^2. Throws a Resolution error when the
/// heat-trace tail at t exceeds 5% of S(t).
double diagonal_kernel(const Spectrum& spectrum, std::size_t x, double t,
                       std::optional<double> slope = std::nullopt);

struct JValue {
  double value = 0.0;
  bool truncated = false;  // lambda beyond the range where the Laplace tail is <= 5%
};

/// J(x) = lambda sum f_n(x)^2 / (lambda + lambda_n)^2.
JValue j_lambda(const Spectrum& spectrum, std::size_t x, double lambda, std::optional<double> slope = std::nullopt);

/// J(x) at every node.
std::vector<double> j_lambda_field(const Spectrum& spectrum, double lambda, Exec exec = Exec::Parallel);

}  // namespace lqg
