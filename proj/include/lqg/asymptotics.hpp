#pragma once

#include <vector>

namespace lqg {

struct TransformReport {
  double rho = 0.0;
  std::vector<double> grid;   // lambda (Tauberian) or t (asymptotic differentiation)
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> ratio;  // lhs / rhs
  double max_deviation = 0.0;  // max |ratio - 1| over the grid
  // Asymptotic differentiation only: sandwich bounds on rhs and their target.
  std::vector<double> lower;
  std::vector<double> upper;
  double target = 0.0;
};

/// nu(ds) = s^{rho-1} ds, or s^{rho-1} log(1/s) 1{s<1} ds with L(s) = log(1/s).
enum class TauberianDensity { Power, LogPower };

/// lhs = lambda^rho nu_hat(lambda) / L(1/lambda),
/// rhs = Gamma(1+rho) t^{-rho} nu(t) / L(t) at t = 1/lambda,
/// both by double-exponential quadrature. Grid values must be > 1 and
/// strictly increasing.
TransformReport tauberian_check(double rho, TauberianDensity density, const std::vector<double>& lambda_grid);

/// phi(u) = beta u^{beta-alpha} times 1, (1 + 0.1 sin log u), or
/// (1 + 0.1 u^{0.1} sin log u).
enum class PhiShape { Power, Wobble, DecayingWobble };

/// lhs = t^{-beta} int_0^t u^{alpha-1} phi(u) du, rhs = t^{alpha-beta} phi(t).
/// The sandwich from monotonicity of phi with ratio b > 1,
///   alpha/(b^alpha - 1) [b^beta lhs(bt) - lhs(t)] <= rhs(t)
///     <= alpha/(1 - b^-alpha) [lhs(t) - b^-beta lhs(t/b)],
/// is reported with b(t) = 1 + t^b_exponent, so b -> 1 as t -> 0 and the
/// envelope closes on beta when lhs converges. ratio = rhs / beta.
TransformReport asympdiff_check(double alpha, double beta, PhiShape shape, const std::vector<double>& t_grid,
                                double b_exponent = 0.05);

}  // namespace lqg
