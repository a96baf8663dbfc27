#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/spectral.hpp"

namespace lqg {

/// Weyl constant c_gamma = 1 / (pi (2 - gamma^2 / 2)).
double c_gamma(double gamma);

/// N(lambda) = #{n : lambda_n <= lambda}.
int counting_function(const Spectrum& spectrum, double lambda);
int counting_function(const std::vector<double>& eigenvalues, double lambda);

/// 1-based inclusive index window [lo, hi] into the sorted eigenvalues.
struct IndexWindow {
  int lo = 100;
  int hi = 800;
};

struct WeylFit {
  double slope = 0.0;
  IndexWindow window;
  double residual = 0.0;   // RMS of j - slope * lambda_j over the window
  double reference = 0.0;  // c_gamma * total mass
  double ratio() const { return slope / reference; }
};

/// Least-squares slope of j against lambda_j through the origin.
WeylFit weyl_fit(const std::vector<double>& eigenvalues, double gamma, double total_mass, IndexWindow window);
WeylFit weyl_fit(const Spectrum& spectrum, const LiouvilleMeasure& measure, IndexWindow window);

struct SubleadingFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  int points = 0;
  bool degenerate = false;
};

/// Power-law fit |c_gamma mu(D) lambda_j - j| ~ amplitude * lambda_j^b by
/// log-log regression. Points with (numerically) zero deviation are dropped;
/// when fewer than 50 remain because the input is exactly linear the result is
/// flagged degenerate. Fewer than 50 usable points otherwise is an error.
SubleadingFit subleading_fit(const std::vector<double>& eigenvalues, double gamma, double total_mass,
                             IndexWindow window);

/// Wigner surmise CDF 1 - exp(-pi s^2 / 4).
double wigner_cdf(double s);

struct SpacingStats {
  std::vector<double> gaps;  // unfolded s_j, window order
  std::vector<double> ecdf_s;  // sorted gaps
  std::vector<double> ecdf;    // ECDF value at ecdf_s (right-continuous, i/N)
  double mean_gap = 0.0;
  double ks_vs_wigner = 0.0;
};

/// Gaps s_j = c_gamma mu(D) (lambda_{j+1} - lambda_j) for lo <= j < hi.
SpacingStats spacing_stats(const std::vector<double>& eigenvalues, double gamma, double total_mass,
                           IndexWindow window);

struct NamedRegion {
  std::string name;
  CellPredicate predicate;
};

struct QueRow {
  int n = 0;  // 1-based eigenfunction index
  std::string region;
  double overlap = 0.0;
  double target = 0.0;
  double ipr = 0.0;
};

/// O_n(A) = sum_{v in A} f_n(v)^2 mu(v) against mu(A)/mu(D), and the inverse
/// participation ratio, for eigenfunctions first..last (1-based, inclusive).
std::vector<QueRow> que_overlap(const Spectrum& spectrum, const LiouvilleMeasure& measure,
                                const std::vector<NamedRegion>& regions, int first, int last);

}  // namespace lqg
