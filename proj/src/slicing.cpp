#include "slicing.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lqg/kernels.hpp"
#include "lqg/rng.hpp"

namespace lqg::detail {

namespace {

SparseMatrix shifted_matrix(const OperatorPair& pair, double sigma) {
  SparseMatrix a = pair.stiffness;
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) -= sigma * pair.mass[i];
  return a;
}

}  // namespace

ShiftInvert::ShiftInvert(const OperatorPair& pair, double sigma) : sigma_(sigma) {
  sqrt_mass_ = pair.mass.cwiseSqrt();
  // A shift that lands (numerically) on an eigenvalue gives a tiny pivot;
  // nudge it until the factorisation is well separated from singular.
  for (int attempt = 0; attempt < 8; ++attempt) {
    ldlt_.compute(shifted_matrix(pair, sigma_));
    require(ldlt_.info() == Eigen::Success, ErrorKind::Internal, "LDL^T factorisation failed");
    const Eigen::VectorXd d = ldlt_.vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    const double smallest = d.cwiseAbs().minCoeff();
    if (smallest > 1e-13 * scale) {
      negative_ = static_cast<int>((d.array() < 0.0).count());
      return;
    }
    sigma_ *= 1.0 + 1e-7 * (attempt + 1);
  }
  throw Error(ErrorKind::Internal, "could not find a non-singular shift");
}

void ShiftInvert::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y = sqrt_mass_.cwiseProduct(ldlt_.solve(sqrt_mass_.cwiseProduct(x)));
}

namespace {

void random_unit(Rng& rng, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
}

void project_out(const Eigen::MatrixXd& basis, Eigen::Index cols, Eigen::VectorXd& w) {
  if (cols <= 0) return;
  const Eigen::VectorXd h = basis.leftCols(cols).transpose() * w;
  w.noalias() -= basis.leftCols(cols) * h;
}

// Gram-Schmidt against the first `cols` columns of basis and all of locked,
// with a second pass only when the first one cancelled most of w.
void orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols, const Eigen::MatrixXd& locked,
                   Eigen::VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    const double before = w.norm();
    project_out(locked, locked.cols(), w);
    project_out(basis, cols, w);
    if (w.norm() > 0.7 * before) break;
  }
}

struct Candidate {
  double lambda;
  Eigen::VectorXd u;
};

}  // namespace

SliceResult solve_slice(const OperatorPair& pair, double lo, double hi, int expected, const SliceParams& params) {
  const Eigen::Index dim = pair.mass.size();
  SliceResult result;
  result.report.lo = lo;
  result.report.hi = hi;
  result.report.expected = expected;
  if (expected == 0) return result;

  // The bottom slice is shifted at zero: K is definite there and the wanted
  // pairs become the dominant end of the inverted spectrum.
  const ShiftInvert op(pair, lo <= 0.0 ? 0.0 : 0.5 * (lo + hi));
  result.report.shift = op.shift();
  const Eigen::VectorXd& sqrt_m = op.sqrt_mass();
  const Eigen::VectorXd inv_sqrt_m = sqrt_m.cwiseInverse();

  std::vector<double> locked_values;
  Eigen::MatrixXd locked(dim, 0);
  Rng rng(params.seed, {0x736c6963ULL, params.slice_id});

  for (int attempt = 0; attempt <= params.max_restarts; ++attempt) {
    const int remaining = expected - static_cast<int>(locked_values.size());
    if (remaining <= 0) break;
    const Eigen::Index max_steps =
        std::min<Eigen::Index>(dim - locked.cols(), std::max<Eigen::Index>(3 * remaining + 50, 80));
    if (max_steps <= 0) break;

    // q: Lanczos basis for (B - sigma)^{-1}; bq: B applied to each column.
    Eigen::MatrixXd q(dim, max_steps + 1);
    Eigen::MatrixXd bq(dim, max_steps);
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd w(dim);
    random_unit(rng, w);
    orthogonalize(q, 0, locked, w);
    q.col(0) = w.normalized();

    double theta_scale = 0.0;
    std::vector<Candidate> found;
    Eigen::Index steps = 0;

    for (Eigen::Index j = 0; j < max_steps; ++j) {
      bq.col(j) = inv_sqrt_m.cwiseProduct(pair.stiffness * inv_sqrt_m.cwiseProduct(q.col(j)));
      op.apply(q.col(j), w);
      const double a = q.col(j).dot(w);
      w.noalias() -= a * q.col(j);
      if (j > 0) w.noalias() -= beta[j - 1] * q.col(j - 1);
      orthogonalize(q, j + 1, locked, w);
      alpha.push_back(a);
      theta_scale = std::max(theta_scale, std::abs(a));
      const double b = w.norm();
      steps = j + 1;
      const bool last = (j + 1 == max_steps);

      if (b <= 1e-12 * theta_scale) {
        // Invariant subspace: continue from a fresh direction, T decouples.
        beta.push_back(0.0);
        if (!last) {
          random_unit(rng, w);
          orthogonalize(q, j + 1, locked, w);
          q.col(j + 1) = w.normalized();
        }
      } else {
        beta.push_back(b);
        if (!last) q.col(j + 1) = w / b;
      }

      if (!last && (steps < remaining || steps % 10 != 0)) continue;

      // Cheap convergence count from the Lanczos tridiagonal.
      const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), steps);
      const Eigen::VectorXd sub =
          steps > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), steps - 1)) : Eigen::VectorXd(0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      int converged = 0;
      for (Eigen::Index i = 0; i < steps; ++i) {
        const double theta = tri.eigenvalues()[i];
        if (theta == 0.0) continue;
        const double lambda = op.shift() + 1.0 / theta;
        if (lambda < lo || lambda >= hi) continue;
        if (std::abs(beta[steps - 1] * tri.eigenvectors()(steps - 1, i)) <= params.ritz_tol * std::abs(theta))
          ++converged;
      }
      if (converged < remaining && !last) continue;

      // Rayleigh-Ritz for B itself on the Krylov basis. The tridiagonal
      // carries the rounding of the indefinite solves; this extraction does
      // not, and its residuals are exact up to one sparse product.
      Eigen::MatrixXd h = q.leftCols(steps).transpose() * bq.leftCols(steps);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(h);
      found.clear();
      for (Eigen::Index i = 0; i < steps; ++i) {
        const double lambda = rr.eigenvalues()[i];
        if (lambda < lo || lambda >= hi) continue;
        Eigen::VectorXd u = q.leftCols(steps) * rr.eigenvectors().col(i);
        const Eigen::VectorXd bu = bq.leftCols(steps) * rr.eigenvectors().col(i);
        const double res = sqrt_m.cwiseProduct(bu - lambda * u).norm() / sqrt_m.cwiseProduct(bu).norm();
        if (res <= params.residual_tol) found.push_back({lambda, std::move(u)});
      }
      if (static_cast<int>(found.size()) >= remaining || last) break;
    }
    result.report.lanczos_steps += static_cast<int>(steps);
    result.report.restarts = attempt;
    if (found.empty()) continue;

    // Never lock more than the inertia count allows; keep those nearest the shift.
    std::sort(found.begin(), found.end(), [&](const Candidate& x, const Candidate& y) {
      return std::abs(x.lambda - op.shift()) < std::abs(y.lambda - op.shift());
    });
    const auto take = static_cast<Eigen::Index>(std::min<std::size_t>(found.size(), static_cast<std::size_t>(remaining)));
    Eigen::MatrixXd grown(dim, locked.cols() + take);
    grown.leftCols(locked.cols()) = locked;
    for (Eigen::Index c = 0; c < take; ++c) {
      Eigen::VectorXd u = std::move(found[c].u);
      orthogonalize(grown, locked.cols() + c, Eigen::MatrixXd(dim, 0), u);
      grown.col(locked.cols() + c) = u.normalized();
      locked_values.push_back(found[c].lambda);
    }
    locked = std::move(grown);
  }

  result.report.found = static_cast<int>(locked_values.size());
  if (result.report.found != expected) {
    std::ostringstream msg;
    msg << "slice [" << lo << ", " << hi << ") converged " << result.report.found << " of " << expected
        << " eigenpairs after " << result.report.lanczos_steps << " Lanczos steps";
    throw Error(ErrorKind::Convergence, msg.str());
  }
  result.values = std::move(locked_values);
  result.vectors = std::move(locked);
  return result;
}

namespace {

int count_at(const OperatorPair& pair, double sigma) {
  if (sigma <= 0.0) return 0;
  return ShiftInvert(pair, sigma).negative_pivots();
}

}  // namespace

std::vector<SliceEdge> plan_slices(const OperatorPair& pair, int k, int target, Exec exec, int* factorizations) {
  const auto dim = static_cast<int>(pair.mass.size());
  int factored = 0;

  // Gershgorin bound on the largest eigenvalue of M^{-1/2} K M^{-1/2}.
  double top = 0.0;
  for (int i = 0; i < dim; ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(pair.stiffness, i); it; ++it) row += std::abs(it.value());
    top = std::max(top, row / pair.mass[i]);
  }
  top *= 1.001;

  // Flat-space Weyl guess for where the k-th eigenvalue sits.
  const double total_mass = pair.mass.sum();
  double hi = std::min(top, 1.2 * k * 2.0 * std::numbers::pi / total_mass);
  int below_hi = count_at(pair, hi);
  ++factored;
  while (below_hi < k) {
    const double grow = std::max(1.2, 1.05 * static_cast<double>(k) / std::max(below_hi, 1));
    hi = std::min(top, hi * grow);
    below_hi = count_at(pair, hi);
    ++factored;
    if (hi >= top) break;
  }
  require(below_hi >= k, ErrorKind::Internal, "could not bracket the requested eigenvalues");

  const int pieces = std::max(1, (below_hi + target - 1) / target);
  std::vector<SliceEdge> edges(static_cast<std::size_t>(pieces) + 1);
  for (int j = 0; j <= pieces; ++j) edges[j].sigma = hi * static_cast<double>(j) / pieces;
  edges.front().below = 0;
  edges.back().below = below_hi;

  auto fill_counts = [&](std::vector<SliceEdge>& e, const std::vector<std::size_t>& todo) {
    const auto count = static_cast<std::ptrdiff_t>(todo.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
      for (std::ptrdiff_t t = 0; t < count; ++t) e[todo[t]].below = count_at(pair, e[todo[t]].sigma);
    } else {
      for (std::ptrdiff_t t = 0; t < count; ++t) e[todo[t]].below = count_at(pair, e[todo[t]].sigma);
    }
    factored += static_cast<int>(count);
  };

  std::vector<std::size_t> todo;
  for (std::size_t j = 1; j + 1 < edges.size(); ++j) todo.push_back(j);
  fill_counts(edges, todo);

  // Split crowded slices (early eigenvalues deviate from the flat Weyl guess).
  const int crowded = target + target / 2;
  for (int round = 0; round < 30; ++round) {
    std::vector<SliceEdge> refined;
    std::vector<std::size_t> fresh;
    refined.push_back(edges.front());
    for (std::size_t j = 1; j < edges.size(); ++j) {
      const int inside = edges[j].below - edges[j - 1].below;
      const bool relevant = edges[j - 1].below < k;
      if (relevant && inside > crowded) {
        fresh.push_back(refined.size());
        refined.push_back({0.5 * (edges[j - 1].sigma + edges[j].sigma), -1});
      }
      refined.push_back(edges[j]);
    }
    if (fresh.empty()) break;
    fill_counts(refined, fresh);
    edges = std::move(refined);
  }

  // Drop slices entirely above the k-th eigenvalue and empty slices.
  std::vector<SliceEdge> kept;
  kept.push_back(edges.front());
  for (std::size_t j = 1; j < edges.size(); ++j) {
    if (edges[j - 1].below >= k) break;
    if (edges[j].below == kept.back().below) {
      kept.back() = edges[j];  // merge an empty slice into the previous edge
      if (kept.size() == 1) kept.back() = {edges[j].sigma, edges[j].below};
      continue;
    }
    kept.push_back(edges[j]);
  }
  if (factorizations != nullptr) *factorizations += factored;
  return kept;
}

}  // namespace lqg::detail
