#pragma once

// Spectrum slicing for the generalized problem K f = lambda M f.
//
// The interval [0, hi) is cut into slices holding a few dozen eigenvalues
// each. The exact number of eigenvalues below every slice edge comes from the
// inertia of an LDL^T factorisation of K - sigma M. Inside a slice a
// shift-invert Lanczos iteration (full reorthogonalisation, shift at the slice
// midpoint) runs until exactly that many Ritz pairs have converged; restarts
// deflate the pairs already locked, which is what recovers repeated
// eigenvalues.

#include <Eigen/SparseCholesky>

#include <cstdint>
#include <vector>

#include "lqg/spectral.hpp"

namespace lqg::detail {

/// Applies y = M^{1/2} (K - sigma M)^{-1} M^{1/2} x, i.e. (B - sigma)^{-1} for
/// the symmetric form B = M^{-1/2} K M^{-1/2}.
class ShiftInvert {
 public:
  ShiftInvert(const OperatorPair& pair, double sigma);

  double shift() const { return sigma_; }
  /// Negative pivots of the LDL^T factor: eigenvalues strictly below sigma.
  int negative_pivots() const { return negative_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  const Eigen::VectorXd& sqrt_mass() const { return sqrt_mass_; }

 private:
  double sigma_;
  int negative_ = 0;
  Eigen::VectorXd sqrt_mass_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

struct SliceResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // symmetric-form eigenvectors u (columns), unit 2-norm
  SliceReport report;
};

struct SliceParams {
  double ritz_tol = 1e-11;
  /// Locked pairs must reach this relative residual ||K f - lambda M f|| / ||K f||.
  double residual_tol = 1e-9;
  int max_restarts = 8;
  std::uint64_t seed = 0;
  std::uint64_t slice_id = 0;
};

SliceResult solve_slice(const OperatorPair& pair, double lo, double hi, int expected, const SliceParams& params);

struct SliceEdge {
  double sigma;
  int below;  // eigenvalues strictly below sigma
};

/// Slice edges 0 = s_0 < s_1 < ... < s_J with count(s_J) >= k and at most
/// ~1.5 * target eigenvalues per slice.
std::vector<SliceEdge> plan_slices(const OperatorPair& pair, int k, int target, Exec exec, int* factorizations);

}  // namespace lqg::detail
