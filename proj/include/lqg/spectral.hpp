#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lqg/field.hpp"
#include "lqg/gmc.hpp"

namespace lqg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Stiffness / mass pair of the Liouville Brownian motion Dirichlet form.
/// The generalized problem K f = lambda M f is what gets solved.
struct OperatorPair {
  GridSpec spec;
  double gamma = 0.0;
  SparseMatrix stiffness;    // K = kStiffnessScale * S
  Eigen::VectorXd mass;      // diagonal of M
};

/// K = kStiffnessScale * S. The 1/2 calibrates the generator to (1/2) Laplacian,
/// which is what makes the flat-space Weyl constant 1/(2 pi).
inline constexpr double kStiffnessScale = 0.5;

OperatorPair assemble_pair(const LiouvilleMeasure& measure);

struct SolverOptions {
  int k = 20;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool want_vectors = false;
  /// Target number of eigenvalues per spectral slice.
  int slice_target = 60;
  /// Problems of at most this dimension go to a dense symmetric solver.
  int dense_limit = 400;
  int max_restarts = 8;
  Exec exec = Exec::Parallel;
};

struct SliceReport {
  double lo = 0.0;
  double hi = 0.0;
  double shift = 0.0;
  int expected = 0;
  int found = 0;
  int lanczos_steps = 0;
  int restarts = 0;
};

struct SolverReport {
  std::string method;
  std::vector<double> residuals;  // ||K f - lambda M f|| / ||K f|| per returned pair
  double max_residual = 0.0;
  int factorizations = 0;
  int total_steps = 0;
  std::vector<SliceReport> slices;
};

struct Spectrum {
  GridSpec spec;
  double gamma = 0.0;
  double tol = 0.0;
  std::vector<double> eigenvalues;            // ascending
  std::optional<Eigen::MatrixXd> eigenvectors;  // columns f_n, mu-orthonormal
  SolverReport report;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  bool has_vectors() const { return eigenvectors.has_value(); }
};

/// The k smallest generalized eigenpairs of (K, M). Throws a Convergence
/// error (with the partial report in the message) if the residual contract
/// cannot be met.
Spectrum solve_spectrum(const OperatorPair& pair, const SolverOptions& options);

/// Dense reference solve of B = M^{-1/2} K M^{-1/2}; only for small grids.
Spectrum solve_spectrum_dense(const OperatorPair& pair, int k, bool want_vectors);

/// Number of generalized eigenvalues strictly below sigma, from the inertia of
/// K - sigma M (Sylvester's law).
int count_below(const OperatorPair& pair, double sigma);

/// Relative residual ||K f - lambda M f||_2 / ||K f||_2.
double relative_residual(const OperatorPair& pair, double lambda, const Eigen::VectorXd& f);

/// Exact eigenvalues of the flat (gamma = 0) problem: (2 - cos(pi i a) - cos(pi j a)) / a^2,
/// sorted ascending.
std::vector<double> flat_grid_eigenvalues(int n);

}  // namespace lqg
