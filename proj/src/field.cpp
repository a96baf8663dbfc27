#include "lqg/field.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <numbers>
#include <set>

#include "lqg/kernels.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

constexpr std::uint64_t kGffStream = 0x6766;     // "gf"
constexpr std::uint64_t kSeriesStream = 0x7966;  // "yf"

void synthesize(int n, std::span<const double> basis, std::span<const double> coeff, std::span<double> out,
                Exec exec) {
  if (exec == Exec::Serial) {
    kernels::serial::sine_synthesis(n, basis, coeff, out);
  } else {
    kernels::omp::sine_synthesis(n, basis, coeff, out);
  }
}

}  // namespace

double GridSpec::boundary_distance(std::size_t idx) const {
  const double x0 = x(idx);
  const double y0 = y(idx);
  return std::min(std::min(x0, 1.0 - x0), std::min(y0, 1.0 - y0));
}

SineBasis make_sine_basis(int n) {
  require(n >= 1, ErrorKind::InvalidSpec, "grid needs n >= 1");
  SineBasis b;
  b.n = n;
  const double a = 1.0 / (n + 1.0);
  const auto nn = static_cast<std::size_t>(n);
  b.u.resize(nn * nn);
  std::vector<double> c(nn);
  const double norm = std::sqrt(2.0 * a);
  for (int k = 0; k < n; ++k) {
    c[k] = std::cos(std::numbers::pi * (k + 1) * a);
    for (int i = 0; i < n; ++i) {
      // reduce the integer product mod 2(n+1) so sin() sees a small argument
      const long long prod = static_cast<long long>(k + 1) * (i + 1) % (2LL * (n + 1));
      b.u[k * nn + i] = norm * std::sin(std::numbers::pi * static_cast<double>(prod) * a);
    }
  }
  b.laplacian_eig.resize(nn * nn);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) b.laplacian_eig[k * nn + l] = 4.0 - 2.0 * c[k] - 2.0 * c[l];
  return b;
}

GridField sample_gff(const GridSpec& spec, Exec exec) {
  spec.validate();
  return sample_gff(spec, make_sine_basis(spec.n), exec);
}

GridField sample_gff(const GridSpec& spec, const SineBasis& basis, Exec exec) {
  spec.validate();
  require(basis.n == spec.n, ErrorKind::InvalidSpec, "sine basis does not match grid");
  const std::size_t size = spec.size();
  Rng rng(spec.seed, {kGffStream});
  std::vector<double> coeff(size);
  for (std::size_t i = 0; i < size; ++i)
    coeff[i] = rng.normal() * std::sqrt(2.0 * std::numbers::pi / basis.laplacian_eig[i]);

  GridField field;
  field.spec = spec;
  field.kind = FieldKind::Gff;
  field.values.resize(size);
  synthesize(spec.n, basis.u, coeff, field.values, exec);
  return field;
}

double GreenTable::at(std::size_t v, std::size_t w) const {
  if (v == w) return diag.at(v);
  if (auto it = rows.find(v); it != rows.end()) return it->second.at(w);
  if (auto it = rows.find(w); it != rows.end()) return it->second.at(v);
  throw Error(ErrorKind::Precondition, "no Green row stored for either node");
}

std::vector<double> green_row(const SineBasis& basis, std::size_t v, Exec exec) {
  const int n = basis.n;
  const auto nn = static_cast<std::size_t>(n);
  require(v < nn * nn, ErrorKind::Precondition, "probe node outside grid");
  const std::size_t p = v / nn;
  const std::size_t q = v % nn;
  std::vector<double> coeff(nn * nn);
  for (std::size_t k = 0; k < nn; ++k)
    for (std::size_t l = 0; l < nn; ++l)
      coeff[k * nn + l] = 2.0 * std::numbers::pi * basis.u[k * nn + p] * basis.u[l * nn + q] / basis.laplacian_eig[k * nn + l];
  std::vector<double> row(nn * nn);
  synthesize(n, basis.u, coeff, row, exec);
  return row;
}

GreenTable discrete_green(const GridSpec& spec, std::span<const NodePair> probes, Exec exec) {
  spec.validate();
  const auto basis = make_sine_basis(spec.n);
  const std::size_t size = spec.size();

  GreenTable table;
  table.spec = spec;

  // diag(p,q) = 2 pi sum_{k,l} u_k(p)^2 u_l(q)^2 / sigma_kl, i.e. P^T Sigma^{-1} P with P = u∘u.
  std::vector<double> squared(size);
  for (std::size_t i = 0; i < size; ++i) squared[i] = basis.u[i] * basis.u[i];
  std::vector<double> inv_eig(size);
  for (std::size_t i = 0; i < size; ++i) inv_eig[i] = 2.0 * std::numbers::pi / basis.laplacian_eig[i];
  // squared is symmetric (u_k(i) = u_i(k)), so P^T = P.
  table.diag.resize(size);
  synthesize(spec.n, squared, inv_eig, table.diag, exec);
  for (double d : table.diag)
    require(d > 0.0 && std::isfinite(d), ErrorKind::Internal, "Green diagonal not positive");

  std::set<std::size_t> nodes;
  for (const auto& [v, w] : probes) {
    require(v < size && w < size, ErrorKind::Precondition, "probe node outside grid");
    nodes.insert(v);
    nodes.insert(w);
  }
  for (std::size_t v : nodes) table.rows.emplace(v, green_row(basis, v, exec));
  return table;
}

namespace {

struct FitAccumulator {
  double sum = 0.0;
  int count = 0;
  void add(double c, double r) {
    sum += c + std::log(r);
    ++count;
  }
  double radius() const {
    require(count >= 8, ErrorKind::InsufficientProbes, "fewer than 8 probe nodes inside the fit window");
    return std::exp(sum / count);
  }
};

}  // namespace

double conformal_radius_estimate(const GreenTable& green, std::size_t v, RadiusWindow window) {
  const GridSpec& spec = green.spec;
  require(green.has_row(v), ErrorKind::Precondition, "conformal radius needs a full Green row for v");
  const double a = spec.spacing();
  const double dist = spec.boundary_distance(v);
  require(dist >= 8.0 * a - 1e-12, ErrorKind::Precondition, "node closer than 8a to the boundary");
  const double lo = window.lo_spacings * a;
  const double hi = window.hi_boundary_fraction * dist;
  const auto& row = green.rows.at(v);
  const double xv = spec.x(v);
  const double yv = spec.y(v);
  FitAccumulator fit;
  for (std::size_t w = 0; w < row.size(); ++w) {
    if (w == v) continue;
    const double r = std::hypot(spec.x(w) - xv, spec.y(w) - yv);
    if (r >= lo && r <= hi) fit.add(row[w], r);
  }
  return fit.radius();
}

double conformal_radius_disc(int n, RadiusWindow window) {
  require(n >= 17 && n % 2 == 1, ErrorKind::InvalidSpec, "disc mode needs odd n >= 17");
  const double a = 2.0 / (n + 1.0);
  auto coord = [&](int i) { return -1.0 + (i + 1) * a; };
  std::vector<int> id(static_cast<std::size_t>(n) * n, -1);
  int count = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (std::hypot(coord(c), coord(r)) < 1.0) id[static_cast<std::size_t>(r) * n + c] = count++;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(count) * 5);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int self = id[static_cast<std::size_t>(r) * n + c];
      if (self < 0) continue;
      triplets.emplace_back(self, self, 4.0);
      const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& rc : nbr) {
        if (rc[0] < 0 || rc[0] >= n || rc[1] < 0 || rc[1] >= n) continue;
        const int other = id[static_cast<std::size_t>(rc[0]) * n + rc[1]];
        if (other >= 0) triplets.emplace_back(self, other, -1.0);
      }
    }
  }
  Eigen::SparseMatrix<double> lap(count, count);
  lap.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(lap);
  require(chol.info() == Eigen::Success, ErrorKind::Internal, "disc Laplacian not positive definite");

  const int mid = (n - 1) / 2;
  const int center = id[static_cast<std::size_t>(mid) * n + mid];
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  rhs[center] = 2.0 * std::numbers::pi;
  const Eigen::VectorXd column = chol.solve(rhs);

  const double lo = window.lo_spacings * a;
  const double hi = window.hi_boundary_fraction * 1.0;
  FitAccumulator fit;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int k = id[static_cast<std::size_t>(r) * n + c];
      if (k < 0 || k == center) continue;
      const double dist = std::hypot(coord(c), coord(r));
      if (dist >= lo && dist <= hi) fit.add(column[k], dist);
    }
  }
  return fit.radius();
}

std::vector<double> sample_disc_series_field(int k_max, std::span<const std::complex<double>> points,
                                             std::uint64_t seed) {
  require(k_max >= 1, ErrorKind::Precondition, "k_max must be >= 1");
  for (const auto& z : points) {
    require(std::abs(z) < 1.0, ErrorKind::Domain, "disc series field needs |z| < 1");
    require(std::abs(z) <= 0.95 + 1e-12, ErrorKind::Precondition, "series truncation needs |z| <= 0.95");
  }
  Rng rng(seed, {kSeriesStream});
  std::vector<std::complex<double>> zeta(static_cast<std::size_t>(k_max));
  for (auto& z : zeta) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = std::complex<double>(re, im) / std::numbers::sqrt2;
  }
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& z : points) {
    std::complex<double> power = 1.0;
    double acc = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      power *= z;
      acc += std::sqrt(2.0 / k) * (zeta[k - 1] * power).real();
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace lqg
