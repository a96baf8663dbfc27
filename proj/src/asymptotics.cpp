#include "lqg/asymptotics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

#include "lqg/error.hpp"

namespace lqg {

namespace {

constexpr double kQuadTol = 1e-12;

void check_grid(const std::vector<double>& grid) {
  require(grid.size() >= 2, ErrorKind::Precondition, "grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], ErrorKind::Precondition, "grid must be strictly increasing");
}

double checked(double value, double error, double l1, const char* what) {
  require(std::isfinite(value) && error <= 1e-8 * std::max(l1, 1e-300), ErrorKind::Convergence,
          std::string("quadrature did not converge: ") + what);
  return value;
}

double integrate_line(const std::function<double(double)>& f, const char* what) {
  boost::math::quadrature::sinh_sinh<double> q;
  double error = 0.0;
  double l1 = 0.0;
  const double v = q.integrate(f, kQuadTol, &error, &l1);
  return checked(v, error, l1, what);
}

double integrate_half_line(const std::function<double(double)>& f, const char* what) {
  boost::math::quadrature::exp_sinh<double> q;
  double error = 0.0;
  double l1 = 0.0;
  const double v = q.integrate(f, kQuadTol, &error, &l1);
  return checked(v, error, l1, what);
}

}  // namespace

TransformReport tauberian_check(double rho, TauberianDensity density, const std::vector<double>& lambda_grid) {
  require(rho > 0.0 && rho <= 4.0, ErrorKind::Precondition,
          "rho must lie in (0, 4]; rho = 0 makes s^{rho-1} non-integrable at 0");
  check_grid(lambda_grid);
  require(lambda_grid.front() > 1.0, ErrorKind::Precondition, "lambda grid must lie above 1");
  const bool log_case = density == TauberianDensity::LogPower;
  const double g1 = boost::math::tgamma(1.0 + rho);

  TransformReport r;
  r.rho = rho;
  r.grid = lambda_grid;
  for (double lambda : lambda_grid) {
    const double log_lambda = std::log(lambda);
    // lambda^rho nu_hat(lambda) with u = lambda s = e^x.
    const double lhs_raw = integrate_line(
        [&](double x) {
          const double u = std::exp(x);
          if (u > 700.0) return 0.0;
          double w = std::exp(rho * x - u);
          if (log_case) w = x < log_lambda ? w * (log_lambda - x) : 0.0;
          return w;
        },
        "Laplace transform");
    const double lhs = log_case ? lhs_raw / log_lambda : lhs_raw;

    // t^{-rho} nu(t) / L(t) with s = t e^{-y}; t = 1/lambda so L(t e^{-y}) = log(lambda) + y.
    const double mass = integrate_half_line(
        [&](double y) {
          const double w = std::exp(-rho * y);
          return log_case ? w * (log_lambda + y) / log_lambda : w;
        },
        "distribution function");
    const double rhs = g1 * mass;

    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.ratio.push_back(lhs / rhs);
    r.max_deviation = std::max(r.max_deviation, std::abs(lhs / rhs - 1.0));
  }
  r.target = 1.0;
  return r;
}

namespace {

double phi_value(double alpha, double beta, PhiShape shape, double u) {
  const double base = beta * std::pow(u, beta - alpha);
  switch (shape) {
    case PhiShape::Power:
      return base;
    case PhiShape::Wobble:
      return base * (1.0 + 0.1 * std::sin(std::log(u)));
    case PhiShape::DecayingWobble:
      return base * (1.0 + 0.1 * std::pow(u, 0.1) * std::sin(std::log(u)));
  }
  return base;
}

// t^{-beta} int_0^t u^{alpha-1} phi(u) du with u = t e^{-y}.
double scaled_primitive(double alpha, double beta, PhiShape shape, double t) {
  const double v = integrate_half_line(
      [&](double y) {
        if (y > 700.0) return 0.0;
        return std::exp(-alpha * y) * phi_value(alpha, beta, shape, t * std::exp(-y));
      },
      "primitive");
  return std::pow(t, alpha - beta) * v;
}

}  // namespace

TransformReport asympdiff_check(double alpha, double beta, PhiShape shape, const std::vector<double>& t_grid,
                                double b_exponent) {
  require(alpha > 0.0 && beta > 0.0, ErrorKind::Precondition, "alpha and beta must be positive");
  require(b_exponent > 0.0, ErrorKind::Precondition, "b exponent must be positive");
  check_grid(t_grid);
  require(t_grid.front() > 0.0 && t_grid.back() < 1.0, ErrorKind::Precondition, "t grid must lie in (0, 1)");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double p = phi_value(alpha, beta, shape, t_grid[i]);
    require(p > 0.0, ErrorKind::Precondition, "phi must be positive on the grid");
    if (i > 0)
      require(p <= phi_value(alpha, beta, shape, t_grid[i - 1]), ErrorKind::Precondition,
              "phi must be non-increasing on the grid");
  }

  TransformReport r;
  r.rho = beta;
  r.grid = t_grid;
  r.target = beta;
  for (double t : t_grid) {
    const double b = 1.0 + std::pow(t, b_exponent);
    const double c = scaled_primitive(alpha, beta, shape, t);
    const double c_in = scaled_primitive(alpha, beta, shape, t / b);
    const double c_out = scaled_primitive(alpha, beta, shape, t * b);
    const double rhs = std::pow(t, alpha - beta) * phi_value(alpha, beta, shape, t);
    r.lhs.push_back(c);
    r.rhs.push_back(rhs);
    r.ratio.push_back(rhs / beta);
    r.upper.push_back(alpha / (1.0 - std::pow(b, -alpha)) * (c - std::pow(b, -beta) * c_in));
    r.lower.push_back(alpha / (std::pow(b, alpha) - 1.0) * (std::pow(b, beta) * c_out - c));
    r.max_deviation = std::max(r.max_deviation, std::abs(rhs / beta - 1.0));
  }
  return r;
}

}  // namespace lqg
