#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lqg/grid.hpp"

namespace lqg {

enum class Exec { Serial, Parallel };

/// Orthonormal discrete sine basis of the n x n Dirichlet grid. u is the 1D
/// basis (row-major, u[k*n + i] = sqrt(2a) sin(pi (k+1)(i+1) a)), and
/// laplacian_eig[k*n + l] = 4 - 2cos(pi(k+1)a) - 2cos(pi(l+1)a) are the
/// eigenvalues of the 5-point graph Laplacian S.
struct SineBasis {
  int n = 0;
  std::vector<double> u;
  std::vector<double> laplacian_eig;
};

SineBasis make_sine_basis(int n);

/// Exact sample of the discrete Dirichlet GFF with covariance 2*pi*S^{-1}.
GridField sample_gff(const GridSpec& spec, Exec exec = Exec::Parallel);
GridField sample_gff(const GridSpec& spec, const SineBasis& basis, Exec exec = Exec::Parallel);

/// Exact discrete Green function C = 2*pi*S^{-1}: the full diagonal plus full
/// rows for every node named in a probe pair.
struct GreenTable {
  GridSpec spec;
  std::vector<double> diag;
  std::map<std::size_t, std::vector<double>> rows;

  bool has_row(std::size_t v) const { return rows.count(v) != 0; }
  /// C(v, w); requires a row for v or w.
  double at(std::size_t v, std::size_t w) const;
};

GreenTable discrete_green(const GridSpec& spec, std::span<const NodePair> probes,
                          Exec exec = Exec::Parallel);

/// Full row of 2*pi*S^{-1} for node v.
std::vector<double> green_row(const SineBasis& basis, std::size_t v, Exec exec = Exec::Parallel);

struct RadiusWindow {
  double lo_spacings = 4.0;           // lower bound in units of a
  double hi_boundary_fraction = 0.25;  // upper bound as a fraction of d(v, boundary)
};

/// Conformal radius fitted from C(v,w) ~ -log|v-w| + log R over the window
/// |v-w| in [4a, d(v,boundary)/4]. Off-diagonal entries only, so the lattice
/// self-energy never enters.
double conformal_radius_estimate(const GreenTable& green, std::size_t v, RadiusWindow window = {});

/// Same fit on the unit disc, discretised on [-1,1]^2 with an (n x n) grid and
/// nodes outside the disc removed. Used only as a sanity check (R(0) = 1).
double conformal_radius_disc(int n, RadiusWindow window = {});

/// Y(z) = Re sum_{k<=k_max} sqrt(2/k) zeta_k z^k with zeta_k standard complex
/// Gaussians, evaluated at every point for one draw of the zeta_k.
std::vector<double> sample_disc_series_field(int k_max, std::span<const std::complex<double>> points,
                                             std::uint64_t seed);

}  // namespace lqg
