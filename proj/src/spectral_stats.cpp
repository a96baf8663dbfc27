#include "lqg/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lqg/kernels.hpp"

namespace lqg {

double c_gamma(double gamma) {
  require(gamma >= 0.0 && gamma < 2.0, ErrorKind::Domain, "c_gamma needs gamma in [0, 2)");
  return 1.0 / (std::numbers::pi * (2.0 - 0.5 * gamma * gamma));
}

int counting_function(const std::vector<double>& eigenvalues, double lambda) {
  return static_cast<int>(std::upper_bound(eigenvalues.begin(), eigenvalues.end(), lambda) - eigenvalues.begin());
}

int counting_function(const Spectrum& spectrum, double lambda) {
  require(!spectrum.eigenvalues.empty(), ErrorKind::Precondition, "empty spectrum");
  return counting_function(spectrum.eigenvalues, lambda);
}

namespace {

void check_window(const std::vector<double>& eigenvalues, IndexWindow w, int min_length) {
  require(w.lo >= 1 && w.hi <= static_cast<int>(eigenvalues.size()), ErrorKind::Precondition,
          "window exceeds the computed spectrum");
  require(w.hi - w.lo >= min_length, ErrorKind::Precondition,
          "window must span at least " + std::to_string(min_length) + " indices");
}

}  // namespace

WeylFit weyl_fit(const std::vector<double>& eigenvalues, double gamma, double total_mass, IndexWindow window) {
  check_window(eigenvalues, window, 50);
  CompensatedSum xy;
  CompensatedSum xx;
  for (int j = window.lo; j <= window.hi; ++j) {
    const double x = eigenvalues[j - 1];
    xy.add(x * j);
    xx.add(x * x);
  }
  require(xx.value() > 0.0, ErrorKind::Precondition, "degenerate Weyl window");
  WeylFit fit;
  fit.window = window;
  fit.slope = xy.value() / xx.value();
  CompensatedSum rss;
  for (int j = window.lo; j <= window.hi; ++j) {
    const double r = j - fit.slope * eigenvalues[j - 1];
    rss.add(r * r);
  }
  fit.residual = std::sqrt(rss.value() / (window.hi - window.lo + 1));
  fit.reference = c_gamma(gamma) * total_mass;
  require(fit.slope > 0.0, ErrorKind::Precondition, "non-positive Weyl slope");
  return fit;
}

WeylFit weyl_fit(const Spectrum& spectrum, const LiouvilleMeasure& measure, IndexWindow window) {
  return weyl_fit(spectrum.eigenvalues, measure.gamma, measure.total, window);
}

SubleadingFit subleading_fit(const std::vector<double>& eigenvalues, double gamma, double total_mass,
                             IndexWindow window) {
  check_window(eigenvalues, window, 50);
  const double c = c_gamma(gamma) * total_mass;
  std::vector<double> lx;
  std::vector<double> ly;
  for (int j = window.lo; j <= window.hi; ++j) {
    const double dev = std::abs(c * eigenvalues[j - 1] - j);
    if (dev <= 1e-9 * j) continue;
    lx.push_back(std::log(eigenvalues[j - 1]));
    ly.push_back(std::log(dev));
  }
  SubleadingFit fit;
  fit.points = static_cast<int>(lx.size());
  if (lx.empty()) {
    fit.degenerate = true;
    return fit;
  }
  require(fit.points >= 50, ErrorKind::Precondition, "fewer than 50 usable points for the power-law fit");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) {
    fit.degenerate = true;
    return fit;
  }
  fit.exponent = sxy / sxx;
  fit.amplitude = std::exp(my - fit.exponent * mx);
  return fit;
}

double wigner_cdf(double s) {
  if (s <= 0.0) return 0.0;
  return -std::expm1(-std::numbers::pi * s * s / 4.0);
}

SpacingStats spacing_stats(const std::vector<double>& eigenvalues, double gamma, double total_mass,
                           IndexWindow window) {
  check_window(eigenvalues, window, 200);
  const double c = c_gamma(gamma) * total_mass;
  SpacingStats out;
  for (int j = window.lo; j < window.hi; ++j) {
    const double s = c * (eigenvalues[j] - eigenvalues[j - 1]);
    out.gaps.push_back(std::max(s, 0.0));
  }
  out.mean_gap = compensated_sum(out.gaps) / static_cast<double>(out.gaps.size());

  out.ecdf_s = out.gaps;
  std::sort(out.ecdf_s.begin(), out.ecdf_s.end());
  const auto count = static_cast<double>(out.ecdf_s.size());
  out.ecdf.resize(out.ecdf_s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < out.ecdf_s.size(); ++i) {
    // ECDF jumps from i/N to (i+1)/N at ecdf_s[i]; ties collapse to the last.
    std::size_t last = i;
    while (last + 1 < out.ecdf_s.size() && out.ecdf_s[last + 1] == out.ecdf_s[i]) ++last;
    const double f = wigner_cdf(out.ecdf_s[i]);
    const double below = static_cast<double>(i) / count;
    const double above = static_cast<double>(last + 1) / count;
    ks = std::max({ks, std::abs(f - below), std::abs(above - f)});
    for (std::size_t t = i; t <= last; ++t) out.ecdf[t] = above;
    i = last;
  }
  out.ks_vs_wigner = ks;
  return out;
}

std::vector<QueRow> que_overlap(const Spectrum& spectrum, const LiouvilleMeasure& measure,
                                const std::vector<NamedRegion>& regions, int first, int last) {
  require(spectrum.has_vectors(), ErrorKind::Precondition, "QUE overlaps need eigenvectors");
  require(spectrum.spec.same_grid(measure.spec), ErrorKind::InvalidSpec, "spectrum and measure grids differ");
  require(first >= 1 && last <= spectrum.size() && first <= last, ErrorKind::Precondition,
          "eigenfunction range outside the spectrum");
  const Eigen::MatrixXd& f = *spectrum.eigenvectors;
  const std::size_t cells = measure.mass.size();

  std::vector<std::vector<char>> masks;
  std::vector<double> targets;
  for (const auto& region : regions) {
    std::vector<char> mask(cells);
    for (std::size_t v = 0; v < cells; ++v) mask[v] = region.predicate(measure.spec, v) ? 1 : 0;
    masks.push_back(std::move(mask));
    targets.push_back(region_mass(measure, region.predicate) / measure.total);
  }

  std::vector<QueRow> rows;
  for (int n = first; n <= last; ++n) {
    std::vector<double> weight(cells);
    CompensatedSum ipr;
    for (std::size_t v = 0; v < cells; ++v) {
      const double x = f(static_cast<Eigen::Index>(v), n - 1);
      weight[v] = x * x * measure.mass[v];
      ipr.add(weight[v] * weight[v]);
    }
    for (std::size_t r = 0; r < regions.size(); ++r) {
      CompensatedSum overlap;
      for (std::size_t v = 0; v < cells; ++v)
        if (masks[r][v]) overlap.add(weight[v]);
      rows.push_back({n, regions[r].name, overlap.value(), targets[r], ipr.value()});
    }
  }
  return rows;
}

}  // namespace lqg
