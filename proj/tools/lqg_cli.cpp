#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lqg/cli.hpp"
#include "lqg/error.hpp"
#include "lqg/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Liouville quantum gravity spectral and path experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", lqg::version_string());

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags override it");

  // Every config key is also a flag. Values go through ExperimentConfig::set so
  // the file and the command line share one parser.
  const std::map<std::string, std::string> keys{
      {"n", "grid size (interior nodes per side)"},
      {"gamma", "LQG parameter"},
      {"k", "number of eigenvalues"},
      {"tol", "eigenpair relative residual tolerance"},
      {"seed", "seed for single-realization commands"},
      {"seeds", "comma-separated seeds for reproduce-figures"},
      {"window-lo", "first eigenvalue index of the fit window"},
      {"window-hi", "last eigenvalue index of the fit window"},
      {"paths", "Monte Carlo sample count"},
      {"dt", "path time step"},
      {"m", "cone drift"},
      {"steps", "bridge steps"},
      {"lambda", "spectral parameter (0 picks a default)"},
      {"functional", "cone functional: I or I_tilde"},
      {"rho", "Tauberian exponent"},
      {"out", "output directory"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [flag, help] : keys) app.add_option("--" + flag, values[flag], help);

  const std::map<std::string, std::string> about{
      {"sample-field", "sample a Dirichlet GFF on the grid (field.lqgf)"},
      {"build-measure", "discrete Liouville measure from a sampled field (measure.lqgm)"},
      {"solve-spectrum", "lowest k eigenvalues of the Liouville Laplacian (spectrum.lqgs)"},
      {"weyl", "eigenvalue counting function and Weyl slope fit (weyl.csv)"},
      {"spacing", "unfolded spacing ECDF against the Wigner surmise (spacing.csv)"},
      {"heat", "heat trace with truncation bounds (heat.csv)"},
      {"jlambda", "resolvent functional J and eigenfunction overlaps (jlambda.csv, que.csv)"},
      {"cone-mc", "Monte Carlo estimate of the cone constant (cone.csv)"},
      {"bridge-check", "Brownian bridge maximum against its exact law (bridge.csv)"},
      {"tauberian", "Tauberian transform checks on power and log densities (tauberian*.csv)"},
      {"reproduce-figures", "field, measure, spectrum and statistics for every seed plus summary.csv"},
  };
  for (const auto& name : lqg::subcommands()) app.add_subcommand(name, about.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lqg::kExitConfig;
  }

  lqg::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = lqg::ExperimentConfig::load(config_path);
    for (const auto& [flag, help] : keys) {
      if (app.count("--" + flag) == 0) continue;
      std::string key = flag;
      for (char& c : key)
        if (c == '-') c = '_';
      cfg.set(key, values[flag]);
    }
  } catch (const lqg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lqg::exit_status(e.kind());
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  return lqg::run(sub, cfg, std::cerr);
}
