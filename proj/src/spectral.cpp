#include "lqg/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lqg/kernels.hpp"
#include "slicing.hpp"

namespace lqg {

OperatorPair assemble_pair(const LiouvilleMeasure& measure) {
  measure.spec.validate();
  const int n = measure.spec.n;
  const auto dim = static_cast<Eigen::Index>(measure.spec.size());
  require(measure.mass.size() == static_cast<std::size_t>(dim), ErrorKind::InvalidSpec,
          "measure size does not match grid");

  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * 5);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const auto v = static_cast<int>(measure.spec.index(r, c));
      entries.emplace_back(v, v, 4.0 * kStiffnessScale);
      if (c > 0) entries.emplace_back(v, v - 1, -kStiffnessScale);
      if (c + 1 < n) entries.emplace_back(v, v + 1, -kStiffnessScale);
      if (r > 0) entries.emplace_back(v, v - n, -kStiffnessScale);
      if (r + 1 < n) entries.emplace_back(v, v + n, -kStiffnessScale);
    }
  }
  OperatorPair pair;
  pair.spec = measure.spec;
  pair.gamma = measure.gamma;
  pair.stiffness.resize(dim, dim);
  pair.stiffness.setFromTriplets(entries.begin(), entries.end());
  pair.stiffness.makeCompressed();
  pair.mass = Eigen::Map<const Eigen::VectorXd>(measure.mass.data(), dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    require(pair.mass[i] > 0.0, ErrorKind::Domain, "cell masses must be positive");
  return pair;
}

double relative_residual(const OperatorPair& pair, double lambda, const Eigen::VectorXd& f) {
  const Eigen::VectorXd kf = pair.stiffness * f;
  const double denom = kf.norm();
  require(denom > 0.0, ErrorKind::Precondition, "zero vector in residual check");
  return (kf - lambda * pair.mass.cwiseProduct(f)).norm() / denom;
}

int count_below(const OperatorPair& pair, double sigma) {
  if (sigma <= 0.0) return 0;
  return detail::ShiftInvert(pair, sigma).negative_pivots();
}

namespace {

void check_request(const OperatorPair& pair, int k) {
  const auto dim = static_cast<int>(pair.mass.size());
  require(k >= 1 && k <= dim, ErrorKind::Precondition, "need 1 <= k <= grid size");
}

// Fills residuals for eigenpairs (lambda, f) and checks the contract.
void finish_report(const OperatorPair& pair, Spectrum& s, const Eigen::MatrixXd& vectors, double tol) {
  s.report.residuals.resize(s.eigenvalues.size());
  s.report.max_residual = 0.0;
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    const double r = relative_residual(pair, s.eigenvalues[j], vectors.col(static_cast<Eigen::Index>(j)));
    s.report.residuals[j] = r;
    s.report.max_residual = std::max(s.report.max_residual, r);
  }
  if (s.report.max_residual > tol) {
    std::ostringstream msg;
    msg << s.report.method << " solve: max residual " << s.report.max_residual << " exceeds tol " << tol
        << " (" << s.eigenvalues.size() << " pairs, " << s.report.factorizations << " factorisations, "
        << s.report.total_steps << " Lanczos steps)";
    throw Error(ErrorKind::Convergence, msg.str());
  }
}

}  // namespace

Spectrum solve_spectrum_dense(const OperatorPair& pair, int k, bool want_vectors) {
  check_request(pair, k);
  const Eigen::VectorXd inv_sqrt = pair.mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd b =
      inv_sqrt.asDiagonal() * Eigen::MatrixXd(pair.stiffness) * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  require(eig.info() == Eigen::Success, ErrorKind::Convergence, "dense eigensolver failed");

  Spectrum s;
  s.spec = pair.spec;
  s.gamma = pair.gamma;
  s.report.method = "dense";
  s.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + k);
  // f = M^{-1/2} u is mu-orthonormal when u is orthonormal.
  const Eigen::MatrixXd f = inv_sqrt.asDiagonal() * eig.eigenvectors().leftCols(k);
  if (want_vectors) s.eigenvectors = f;
  s.report.residuals.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    s.report.residuals[j] = relative_residual(pair, s.eigenvalues[j], f.col(j));
    s.report.max_residual = std::max(s.report.max_residual, s.report.residuals[j]);
  }
  return s;
}

Spectrum solve_spectrum(const OperatorPair& pair, const SolverOptions& options) {
  check_request(pair, options.k);
  require(options.tol > 0.0 && options.tol <= 1e-4, ErrorKind::Precondition, "tol must lie in (0, 1e-4]");
  const auto dim = static_cast<int>(pair.mass.size());
  const int k = options.k;

  if (dim <= options.dense_limit) {
    Spectrum s = solve_spectrum_dense(pair, k, true);
    s.tol = options.tol;
    const Eigen::MatrixXd vectors = *s.eigenvectors;
    if (!options.want_vectors) s.eigenvectors.reset();
    finish_report(pair, s, vectors, options.tol);
    return s;
  }

  Spectrum s;
  s.spec = pair.spec;
  s.gamma = pair.gamma;
  s.tol = options.tol;
  s.report.method = "shift-invert lanczos";

  const std::vector<detail::SliceEdge> edges =
      detail::plan_slices(pair, k, options.slice_target, options.exec, &s.report.factorizations);
  const auto slices = static_cast<std::ptrdiff_t>(edges.size()) - 1;
  std::vector<detail::SliceResult> results(static_cast<std::size_t>(slices));

  auto run = [&](std::ptrdiff_t j) {
    detail::SliceParams params;
    params.seed = options.seed;
    params.slice_id = static_cast<std::uint64_t>(j);
    params.max_restarts = options.max_restarts;
    params.residual_tol = 0.1 * options.tol;
    results[j] = detail::solve_slice(pair, edges[j].sigma, edges[j + 1].sigma,
                                     edges[j + 1].below - edges[j].below, params);
  };

  if (options.exec == Exec::Parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t j = 0; j < slices; ++j) {
      try {
        run(j);
      } catch (...) {
#pragma omp critical(lqg_slice_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t j = 0; j < slices; ++j) run(j);
  }

  // Merge: slices are disjoint and ordered, so sorting within each suffices.
  std::vector<double> values;
  std::vector<std::pair<std::ptrdiff_t, Eigen::Index>> origin;
  for (std::ptrdiff_t j = 0; j < slices; ++j) {
    const auto& r = results[j];
    std::vector<Eigen::Index> order(r.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return r.values[a] < r.values[b]; });
    for (Eigen::Index i : order) {
      values.push_back(r.values[i]);
      origin.emplace_back(j, i);
    }
    s.report.slices.push_back(r.report);
    s.report.total_steps += r.report.lanczos_steps;
    ++s.report.factorizations;
  }
  require(static_cast<int>(values.size()) >= k, ErrorKind::Convergence, "slices returned fewer pairs than requested");

  const Eigen::VectorXd inv_sqrt = pair.mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd vectors(dim, k);
  for (int j = 0; j < k; ++j) {
    const auto [slice, col] = origin[j];
    vectors.col(j) = inv_sqrt.cwiseProduct(results[slice].vectors.col(col));
  }
  results.clear();
  s.eigenvalues.assign(values.begin(), values.begin() + k);
  finish_report(pair, s, vectors, options.tol);
  if (options.want_vectors) s.eigenvectors = std::move(vectors);
  return s;
}

std::vector<double> flat_grid_eigenvalues(int n) {
  require(n >= 1, ErrorKind::InvalidSpec, "grid needs n >= 1");
  const double a = 1.0 / (n + 1.0);
  std::vector<double> one(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) one[i - 1] = 1.0 - std::cos(std::numbers::pi * i * a);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back((one[i] + one[j]) / (a * a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lqg
