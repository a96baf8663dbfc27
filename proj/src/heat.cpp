#include "lqg/heat.hpp"

#include <cmath>

#include "lqg/kernels.hpp"

namespace lqg {

double default_tail_slope(const std::vector<double>& eigenvalues) {
  require(!eigenvalues.empty(), ErrorKind::Precondition, "empty spectrum");
  return static_cast<double>(eigenvalues.size()) / eigenvalues.back();
}

namespace {

double trace_at(const std::vector<double>& eigenvalues, double t) {
  CompensatedSum s;
  for (double l : eigenvalues) s.add(std::exp(-l * t));
  return s.value();
}

double tail_at(const std::vector<double>& eigenvalues, double t, double slope) {
  return slope / t * std::exp(-eigenvalues.back() * t);
}

}  // namespace

HeatTraceCurve heat_trace(const std::vector<double>& eigenvalues, const std::vector<double>& t_grid,
                          std::optional<double> slope) {
  require(!eigenvalues.empty(), ErrorKind::Precondition, "empty spectrum");
  HeatTraceCurve c;
  c.slope = slope.value_or(default_tail_slope(eigenvalues));
  for (double t : t_grid) {
    require(t > 0.0, ErrorKind::Domain, "heat trace needs t > 0");
    const double s = trace_at(eigenvalues, t);
    const double tail = tail_at(eigenvalues, t, c.slope);
    c.t.push_back(t);
    c.s.push_back(s);
    c.tail_bound.push_back(tail);
    c.resolved.push_back(tail <= kHeatResolvedFraction * s);
  }
  return c;
}

std::optional<TRange> plateau_decade(const HeatTraceCurve& curve, double target, double rel_tol) {
  require(target > 0.0 && rel_tol > 0.0, ErrorKind::Precondition, "plateau needs positive target and tolerance");
  std::optional<TRange> best;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= curve.t.size(); ++i) {
    const bool ok = i < curve.t.size() && curve.resolved[i] &&
                    std::abs(curve.t[i] * curve.s[i] / target - 1.0) <= rel_tol;
    if (ok) continue;
    if (i > start + 1) {
      const TRange run{curve.t[start], curve.t[i - 1]};
      if (run.hi >= 10.0 * run.lo * (1.0 - 1e-12) && (!best || run.hi / run.lo > best->hi / best->lo)) best = run;
    }
    start = i + 1;
  }
  return best;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  require(lo > 0.0 && hi > lo && points >= 2, ErrorKind::Precondition, "bad log grid");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

LaplaceValue laplace_of_weighted_trace(const std::vector<double>& eigenvalues, double lambda,
                                       std::optional<double> slope) {
  require(!eigenvalues.empty(), ErrorKind::Precondition, "empty spectrum");
  require(lambda > 0.0, ErrorKind::Domain, "Laplace variable must be positive");
  CompensatedSum s;
  for (double l : eigenvalues) s.add(1.0 / ((lambda + l) * (lambda + l)));
  LaplaceValue out;
  out.value = s.value();
  out.tail_bound = slope.value_or(default_tail_slope(eigenvalues)) / (lambda + eigenvalues.back());
  return out;
}

double diagonal_kernel(const Spectrum& spectrum, std::size_t x, double t, std::optional<double> slope) {
  require(spectrum.has_vectors(), ErrorKind::Precondition, "diagonal kernel needs eigenvectors");
  require(t > 0.0, ErrorKind::Domain, "heat kernel needs t > 0");
  require(x < spectrum.spec.size(), ErrorKind::Precondition, "node outside the grid");
  const auto& ev = spectrum.eigenvalues;
  const double tail = tail_at(ev, t, slope.value_or(default_tail_slope(ev)));
  if (tail > kKernelRefuseFraction * trace_at(ev, t))
    throw Error(ErrorKind::Resolution, "t = " + std::to_string(t) + " is below the resolved window");
  const Eigen::MatrixXd& f = *spectrum.eigenvectors;
  CompensatedSum s;
  for (int n = 0; n < spectrum.size(); ++n) {
    const double v = f(static_cast<Eigen::Index>(x), n);
    s.add(std::exp(-ev[n] * t) * v * v);
  }
  return s.value();
}

JValue j_lambda(const Spectrum& spectrum, std::size_t x, double lambda, std::optional<double> slope) {
  require(spectrum.has_vectors(), ErrorKind::Precondition, "J needs eigenvectors");
  require(lambda > 0.0, ErrorKind::Domain, "lambda must be positive");
  require(x < spectrum.spec.size(), ErrorKind::Precondition, "node outside the grid");
  const Eigen::MatrixXd& f = *spectrum.eigenvectors;
  CompensatedSum s;
  for (int n = 0; n < spectrum.size(); ++n) {
    const double v = f(static_cast<Eigen::Index>(x), n);
    const double d = lambda + spectrum.eigenvalues[n];
    s.add(v * v / (d * d));
  }
  const LaplaceValue global = laplace_of_weighted_trace(spectrum.eigenvalues, lambda, slope);
  return {lambda * s.value(), global.tail_bound > kKernelRefuseFraction * global.value};
}

std::vector<double> j_lambda_field(const Spectrum& spectrum, double lambda, Exec exec) {
  require(spectrum.has_vectors(), ErrorKind::Precondition, "J needs eigenvectors");
  require(lambda > 0.0, ErrorKind::Domain, "lambda must be positive");
  const Eigen::MatrixXd& f = *spectrum.eigenvectors;
  std::vector<double> weights(spectrum.eigenvalues.size());
  for (std::size_t n = 0; n < weights.size(); ++n) {
    const double d = lambda + spectrum.eigenvalues[n];
    weights[n] = lambda / (d * d);
  }
  auto at = [&](std::size_t x) {
    CompensatedSum s;
    for (std::size_t n = 0; n < weights.size(); ++n) {
      const double v = f(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(n));
      s.add(weights[n] * v * v);
    }
    return s.value();
  };
  std::vector<double> out(spectrum.spec.size());
  if (exec == Exec::Serial)
    kernels::serial::map_index(out.size(), at, out);
  else
    kernels::omp::map_index(out.size(), at, out);
  return out;
}

}  // namespace lqg
