#include "lqg/gmc.hpp"

#include <cmath>

#include "lqg/kernels.hpp"

namespace lqg {

LiouvilleMeasure build_measure(const GridField& field, double gamma, Exec exec) {
  field.spec.validate();
  require(gamma >= 0.0 && gamma < 2.0, ErrorKind::Domain, "gamma must lie in [0, 2)");
  require(field.values.size() == field.spec.size(), ErrorKind::InvalidSpec, "field size does not match grid");

  const double a = field.spec.spacing();
  const double prefactor = std::pow(a, 2.0 + 0.5 * gamma * gamma);

  LiouvilleMeasure m;
  m.spec = field.spec;
  m.gamma = gamma;
  m.mass.resize(field.values.size());
  if (exec == Exec::Serial) {
    kernels::serial::exp_scale(field.values, gamma, prefactor, m.mass);
    m.total = kernels::serial::chunked_sum(m.mass);
  } else {
    kernels::omp::exp_scale(field.values, gamma, prefactor, m.mass);
    m.total = kernels::omp::chunked_sum(m.mass);
  }
  for (double x : m.mass)
    require(x > 0.0 && std::isfinite(x), ErrorKind::Domain, "cell mass underflowed or overflowed");
  return m;
}

LiouvilleMeasure scaled(const LiouvilleMeasure& measure, double s) {
  require(s > 0.0, ErrorKind::Domain, "measure scale must be positive");
  LiouvilleMeasure out = measure;
  for (double& x : out.mass) x *= s;
  out.total = kernels::serial::chunked_sum(out.mass);
  return out;
}

double region_mass(const LiouvilleMeasure& measure, const CellPredicate& region) {
  std::vector<double> selected(measure.mass.size(), 0.0);
  std::size_t count = 0;
  for (std::size_t v = 0; v < measure.mass.size(); ++v) {
    if (region(measure.spec, v)) {
      selected[v] = measure.mass[v];
      ++count;
    }
  }
  require(count > 0, ErrorKind::EmptyRegion, "region selects no cells");
  return kernels::serial::chunked_sum(selected);
}

}  // namespace lqg
