#include "lqg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "lqg/asymptotics.hpp"
#include "lqg/field.hpp"
#include "lqg/gmc.hpp"
#include "lqg/heat.hpp"
#include "lqg/io.hpp"
#include "lqg/path_mc.hpp"
#include "lqg/spectral.hpp"
#include "lqg/spectral_stats.hpp"

namespace lqg {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"sample-field", "build-measure", "solve-spectrum", "weyl",
                                              "spacing",      "heat",          "jlambda",        "cone-mc",
                                              "bridge-check", "tauberian",     "reproduce-figures"};
  return names;
}

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return kExitConfig;
    case ErrorKind::Convergence:
      return kExitConvergence;
    case ErrorKind::Resolution:
      return kExitResolution;
    default:
      return kExitFailure;
  }
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  std::ostream& log;
  std::string hash;

  Provenance prov(std::uint64_t seed) const {
    Provenance p;
    p.seed = seed;
    p.config_hash = hash;
    return p;
  }
};

LiouvilleMeasure measure_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  const GridField field = sample_gff(GridSpec{cfg.n, seed});
  return build_measure(field, cfg.gamma);
}

Spectrum spectrum_for(const ExperimentConfig& cfg, const LiouvilleMeasure& measure, std::uint64_t seed,
                      bool want_vectors) {
  SolverOptions o;
  o.k = cfg.k;
  o.tol = cfg.tol;
  o.seed = seed;
  o.want_vectors = want_vectors;
  return solve_spectrum(assemble_pair(measure), o);
}

IndexWindow window_of(const ExperimentConfig& cfg) { return {cfg.window_lo, cfg.window_hi}; }

WeylFit write_weyl(const Context& ctx, const fs::path& dir, std::uint64_t seed, const Spectrum& s,
                   const LiouvilleMeasure& measure) {
  const double pred = c_gamma(ctx.cfg.gamma) * measure.total;
  const double riem = c_gamma(0.0) * measure.total;
  CsvWriter csv(dir / "weyl.csv", {"lambda", "count", "prediction", "riemannian"}, ctx.prov(seed));
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    const double l = s.eigenvalues[j];
    csv.cell(l).cell(static_cast<long long>(j + 1)).cell(pred * l).cell(riem * l).end_row();
  }
  const WeylFit fit = weyl_fit(s, measure, window_of(ctx.cfg));
  ctx.log << "weyl seed=" << seed << " slope=" << format_double(fit.slope)
          << " reference=" << format_double(fit.reference) << " ratio=" << format_double(fit.ratio())
          << " riemannian_ratio=" << format_double(fit.slope / riem) << '\n';
  return fit;
}

SpacingStats write_spacing(const Context& ctx, const fs::path& dir, std::uint64_t seed, const Spectrum& s,
                           const LiouvilleMeasure& measure) {
  const SpacingStats st = spacing_stats(s.eigenvalues, ctx.cfg.gamma, measure.total, window_of(ctx.cfg));
  CsvWriter csv(dir / "spacing.csv", {"s", "ecdf", "wigner_cdf"}, ctx.prov(seed));
  for (std::size_t i = 0; i < st.ecdf_s.size(); ++i)
    csv.cell(st.ecdf_s[i]).cell(st.ecdf[i]).cell(wigner_cdf(st.ecdf_s[i])).end_row();
  ctx.log << "spacing seed=" << seed << " mean_gap=" << format_double(st.mean_gap)
          << " ks_vs_wigner=" << format_double(st.ks_vs_wigner) << '\n';
  return st;
}

// Grid from well below the resolved window up to the scale of the first
// eigenvalue, so the CSV shows where the truncation gate bites.
std::vector<double> heat_grid(const std::vector<double>& eigs) {
  return log_grid(0.5 / eigs.back(), 2.0 / eigs.front(), 61);
}

void write_heat(const Context& ctx, const fs::path& dir, std::uint64_t seed, const Spectrum& s,
                const LiouvilleMeasure& measure) {
  const double pred = c_gamma(ctx.cfg.gamma) * measure.total;
  const HeatTraceCurve curve = heat_trace(s.eigenvalues, heat_grid(s.eigenvalues));
  CsvWriter csv(dir / "heat.csv", {"t", "S", "tS", "prediction", "tail_bound"}, ctx.prov(seed));
  bool any_resolved = false;
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    csv.cell(curve.t[i]).cell(curve.s[i]).cell(curve.t[i] * curve.s[i]).cell(pred).cell(curve.tail_bound[i]).end_row();
    any_resolved = any_resolved || curve.resolved[i];
  }
  require(any_resolved, ErrorKind::Resolution, "no t on the grid is resolved by the computed eigenvalues");
  const auto decade = plateau_decade(curve, pred, 0.15);
  ctx.log << "heat seed=" << seed << " prediction=" << format_double(pred);
  if (decade)
    ctx.log << " plateau=[" << format_double(decade->lo) << ", " << format_double(decade->hi) << "]\n";
  else
    ctx.log << " plateau=none\n";
}

void cmd_sample_field(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridField f = sample_gff(GridSpec{cfg.n, cfg.seed});
  write_field(fs::path(cfg.out) / "field.lqgf", f, ctx.prov(cfg.seed));
}

void cmd_build_measure(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  write_measure(fs::path(cfg.out) / "measure.lqgm", m, ctx.prov(cfg.seed));
  ctx.log << "measure total=" << format_double(m.total) << '\n';
}

void cmd_solve_spectrum(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  const Spectrum s = spectrum_for(cfg, m, cfg.seed, false);
  write_spectrum(fs::path(cfg.out) / "spectrum.lqgs", s, ctx.prov(cfg.seed));
  ctx.log << "spectrum k=" << s.size() << " max_residual=" << s.report.max_residual << " method=" << s.report.method
          << '\n';
}

void cmd_weyl(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  write_weyl(ctx, cfg.out, cfg.seed, spectrum_for(cfg, m, cfg.seed, false), m);
}

void cmd_spacing(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  write_spacing(ctx, cfg.out, cfg.seed, spectrum_for(cfg, m, cfg.seed, false), m);
}

void cmd_heat(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  write_heat(ctx, cfg.out, cfg.seed, spectrum_for(cfg, m, cfg.seed, false), m);
}

void cmd_jlambda(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const LiouvilleMeasure m = measure_for(cfg, cfg.seed);
  const Spectrum s = spectrum_for(cfg, m, cfg.seed, true);
  // Default: the largest lambda whose Laplace tail stays below 5%.
  double lambda = cfg.lambda;
  const double slope = default_tail_slope(s.eigenvalues);
  if (lambda <= 0.0) {
    lambda = s.eigenvalues.back() / 20.0;
    for (;;) {
      const LaplaceValue v = laplace_of_weighted_trace(s.eigenvalues, lambda, slope);
      if (lambda <= 1.0 || v.tail_bound <= kKernelRefuseFraction * v.value) break;
      lambda *= 0.5;
    }
  }
  const LaplaceValue lv = laplace_of_weighted_trace(s.eigenvalues, lambda, slope);
  require(lv.tail_bound <= kKernelRefuseFraction * lv.value, ErrorKind::Resolution,
          "lambda " + format_double(lambda) + " is beyond the range resolved by " + std::to_string(s.size()) +
              " eigenvalues");
  const std::vector<double> j = j_lambda_field(s, lambda);
  CsvWriter csv(fs::path(cfg.out) / "jlambda.csv", {"x_index", "mass", "J", "lambda"}, ctx.prov(cfg.seed));
  for (std::size_t x = 0; x < j.size(); ++x)
    csv.cell(static_cast<long long>(x)).cell(m.mass[x]).cell(j[x]).cell(lambda).end_row();

  const std::vector<NamedRegion> regions{{"left_half", regions::left_half},
                                         {"right_half", regions::right_half},
                                         {"quadrant", regions::quadrant}};
  CsvWriter que(fs::path(cfg.out) / "que.csv", {"n", "region", "overlap", "target", "ipr"}, ctx.prov(cfg.seed));
  for (const QueRow& r : que_overlap(s, m, regions, 1, static_cast<int>(s.size())))
    que.cell(r.n).cell(r.region).cell(r.overlap).cell(r.target).cell(r.ipr).end_row();
  ctx.log << "jlambda lambda=" << format_double(lambda) << '\n';
}

ConeFunctional functional_of(const std::string& name) {
  if (name == "I") return ConeFunctional::I;
  if (name == "I_tilde") return ConeFunctional::ITilde;
  throw Error(ErrorKind::Config, "unknown functional '" + name + "'");
}

void cmd_cone(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  ConeOptions o;
  o.gamma = cfg.gamma;
  o.m = cfg.m;
  o.functional = functional_of(cfg.functional);
  o.lambda_scale = cfg.lambda > 0.0 ? cfg.lambda : 1.0;
  o.dt = cfg.dt;
  o.n_paths = cfg.paths;
  o.seed = cfg.seed;
  const MCEstimate e = estimate_cone_constant(o);
  CsvWriter csv(fs::path(cfg.out) / "cone.csv", {"gamma", "m", "f", "n_paths", "dt", "T", "mean", "stderr", "target"},
                ctx.prov(cfg.seed));
  csv.cell(e.gamma).cell(e.m).cell(std::string(to_string(o.functional))).cell(static_cast<long long>(e.n_paths));
  csv.cell(e.dt).cell(e.t_max).cell(e.mean).cell(e.std_error).cell(e.target.value_or(std::nan(""))).end_row();
  ctx.log << "cone mean=" << format_double(e.mean) << " stderr=" << format_double(e.std_error)
          << " target=" << format_double(e.target.value_or(std::nan(""))) << '\n';
}

void cmd_bridge(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::vector<double> levels{0.5, 1.0, 1.5};
  CsvWriter csv(fs::path(cfg.out) / "bridge.csv", {"steps", "level", "probability", "stderr", "exact"},
                ctx.prov(cfg.seed));
  for (int steps : {cfg.steps, 2 * cfg.steps}) {
    const BridgeMaxResult r = bridge_max_check(1.0, steps, levels, cfg.paths, cfg.seed);
    for (std::size_t i = 0; i < levels.size(); ++i)
      csv.cell(steps).cell(r.levels[i]).cell(r.probability[i]).cell(r.std_error[i]).cell(r.exact[i]).end_row();
  }
}

void cmd_tauberian(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::vector<double> grid = log_grid(10.0, 1e6, 21);
  const TransformReport power = tauberian_check(cfg.rho, TauberianDensity::Power, grid);
  const TransformReport logp = tauberian_check(cfg.rho, TauberianDensity::LogPower, grid);
  for (const auto& [name, rep] : {std::pair{"tauberian.csv", &power}, std::pair{"tauberian_log.csv", &logp}}) {
    CsvWriter csv(fs::path(cfg.out) / name, {"lambda", "lhs", "rhs", "ratio"}, ctx.prov(cfg.seed));
    for (std::size_t i = 0; i < rep->grid.size(); ++i)
      csv.cell(rep->grid[i]).cell(rep->lhs[i]).cell(rep->rhs[i]).cell(rep->ratio[i]).end_row();
  }
  ctx.log << "tauberian rho=" << format_double(cfg.rho) << " power_dev=" << power.max_deviation
          << " log_dev_at_max=" << std::abs(logp.ratio.back() - 1.0) << '\n';
}

// Full pipeline per seed: field, measure, spectrum, then the Weyl, spacing,
// subleading and heat-trace data behind the figures.
void cmd_reproduce(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const fs::path root = cfg.out;
  CsvWriter summary(root / "summary.csv",
                    {"seed", "total_mass", "slope", "reference", "ratio", "riemannian_ratio", "mean_gap", "ks_vs_wigner",
                     "subleading_amplitude", "subleading_exponent"},
                    ctx.prov(cfg.seeds.front()));
  for (std::uint64_t seed : cfg.seeds) {
    const fs::path dir = root / ("seed_" + std::to_string(seed));
    const GridField f = sample_gff(GridSpec{cfg.n, seed});
    const LiouvilleMeasure m = build_measure(f, cfg.gamma);
    write_field(dir / "field.lqgf", f, ctx.prov(seed), cfg.gamma);
    write_measure(dir / "measure.lqgm", m, ctx.prov(seed));
    const Spectrum s = spectrum_for(cfg, m, seed, false);
    write_spectrum(dir / "spectrum.lqgs", s, ctx.prov(seed));
    const WeylFit fit = write_weyl(ctx, dir, seed, s, m);
    const SpacingStats st = write_spacing(ctx, dir, seed, s, m);
    const SubleadingFit sub = subleading_fit(s.eigenvalues, cfg.gamma, m.total, window_of(cfg));
    write_heat(ctx, dir, seed, s, m);
    summary.cell(static_cast<long long>(seed)).cell(m.total).cell(fit.slope).cell(fit.reference).cell(fit.ratio());
    summary.cell(fit.slope / (c_gamma(0.0) * m.total)).cell(st.mean_gap).cell(st.ks_vs_wigner);
    summary.cell(sub.amplitude).cell(sub.exponent).end_row();
  }
}

}  // namespace

void run_or_throw(const std::string& subcommand, const ExperimentConfig& config, std::ostream& log) {
  require(std::find(subcommands().begin(), subcommands().end(), subcommand) != subcommands().end(), ErrorKind::Config,
          "unknown subcommand '" + subcommand + "'");
  config.validate(subcommand);
  const Context ctx{config, log, config.hash()};
  fs::create_directories(config.out);
  if (subcommand == "sample-field") cmd_sample_field(ctx);
  else if (subcommand == "build-measure") cmd_build_measure(ctx);
  else if (subcommand == "solve-spectrum") cmd_solve_spectrum(ctx);
  else if (subcommand == "weyl") cmd_weyl(ctx);
  else if (subcommand == "spacing") cmd_spacing(ctx);
  else if (subcommand == "heat") cmd_heat(ctx);
  else if (subcommand == "jlambda") cmd_jlambda(ctx);
  else if (subcommand == "cone-mc") cmd_cone(ctx);
  else if (subcommand == "bridge-check") cmd_bridge(ctx);
  else if (subcommand == "tauberian") cmd_tauberian(ctx);
  else cmd_reproduce(ctx);
}

int run(const std::string& subcommand, const ExperimentConfig& config, std::ostream& log) {
  try {
    run_or_throw(subcommand, config, log);
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace lqg
