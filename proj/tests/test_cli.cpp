#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lqg/cli.hpp"
#include "lqg/io.hpp"
#include "lqg/kernels.hpp"

namespace lqg {
namespace {

namespace fs = std::filesystem;

fs::path out_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lqg_cli_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Everything after the provenance header: the part that must be reproducible.
std::string payload(const fs::path& p) {
  const std::string text = slurp(p);
  if (p.extension() == ".csv") {
    std::size_t pos = 0;
    while (text.compare(pos, 2, "# ") == 0) pos = text.find('\n', pos) + 1;
    return text.substr(pos);
  }
  return text.substr(text.find("\n\n") + 2);
}

std::vector<std::string> csv_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("# ", 0) != 0) lines.push_back(line);
  return lines;
}

int run_quiet(const std::string& sub, const ExperimentConfig& cfg) {
  std::ostringstream log;
  return run(sub, cfg, log);
}

TEST(Cli, SolveSpectrumFlatExample) {
  ExperimentConfig cfg;
  cfg.n = 127;
  cfg.gamma = 0.0;
  cfg.k = 20;
  cfg.out = out_dir("solve").string();
  ASSERT_EQ(run_quiet("solve-spectrum", cfg), kExitOk);
  const Spectrum s = read_spectrum(fs::path(cfg.out) / "spectrum.lqgs");
  ASSERT_EQ(s.size(), 20);
  EXPECT_NEAR(s.eigenvalues[0] / (std::numbers::pi * std::numbers::pi), 1.0, 0.01);
  const std::string head = slurp(fs::path(cfg.out) / "spectrum.lqgs");
  EXPECT_NE(head.find("config=" + cfg.hash()), std::string::npos);
  EXPECT_NE(head.find(std::string("version=") + version_string()), std::string::npos);
}

TEST(Cli, ExitCodes) {
  ExperimentConfig cfg;
  cfg.out = out_dir("codes").string();
  EXPECT_EQ(run_quiet("no-such-command", cfg), kExitConfig);
  cfg.gamma = 3.0;
  EXPECT_EQ(run_quiet("weyl", cfg), kExitConfig);

  ExperimentConfig j;
  j.n = 15;
  j.k = 40;
  j.window_hi = 40;
  j.lambda = 1e7;
  j.out = out_dir("resolution").string();
  EXPECT_EQ(run_quiet("jlambda", j), kExitResolution);

  EXPECT_EQ(exit_status(ErrorKind::Convergence), kExitConvergence);
  EXPECT_EQ(exit_status(ErrorKind::Io), kExitFailure);
}

TEST(Cli, CsvSchemas) {
  ExperimentConfig cfg;
  cfg.n = 31;
  cfg.k = 300;
  cfg.window_hi = 300;
  cfg.out = out_dir("schemas").string();
  const fs::path out = cfg.out;
  ASSERT_EQ(run_quiet("weyl", cfg), kExitOk);
  ASSERT_EQ(run_quiet("spacing", cfg), kExitOk);
  ASSERT_EQ(run_quiet("heat", cfg), kExitOk);
  EXPECT_EQ(csv_lines(out / "weyl.csv").front(), "lambda,count,prediction,riemannian");
  EXPECT_EQ(csv_lines(out / "weyl.csv").size(), 301u);
  EXPECT_EQ(csv_lines(out / "spacing.csv").front(), "s,ecdf,wigner_cdf");
  EXPECT_EQ(csv_lines(out / "heat.csv").front(), "t,S,tS,prediction,tail_bound");

  cfg.k = 60;
  cfg.window_hi = 60;
  cfg.n = 15;
  ASSERT_EQ(run_quiet("jlambda", cfg), kExitOk);
  EXPECT_EQ(csv_lines(out / "jlambda.csv").front(), "x_index,mass,J,lambda");
  EXPECT_EQ(csv_lines(out / "jlambda.csv").size(), 226u);
  EXPECT_EQ(csv_lines(out / "que.csv").front(), "n,region,overlap,target,ipr");

  cfg.paths = 2000;
  cfg.steps = 64;
  ASSERT_EQ(run_quiet("bridge-check", cfg), kExitOk);
  EXPECT_EQ(csv_lines(out / "bridge.csv").size(), 7u);
  ASSERT_EQ(run_quiet("tauberian", cfg), kExitOk);
  EXPECT_EQ(csv_lines(out / "tauberian.csv").front(), "lambda,lhs,rhs,ratio");
}

TEST(Cli, ConeExample) {
  ExperimentConfig cfg;
  cfg.gamma = 1.0;
  cfg.m = 1.0;
  cfg.paths = 4000;
  cfg.out = out_dir("cone").string();
  ASSERT_EQ(run_quiet("cone-mc", cfg), kExitOk);
  const auto lines = csv_lines(fs::path(cfg.out) / "cone.csv");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "gamma,m,f,n_paths,dt,T,mean,stderr,target");
  std::stringstream row(lines[1]);
  std::vector<std::string> cells;
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 9u);
  const double mean = std::stod(cells[6]), se = std::stod(cells[7]), target = std::stod(cells[8]);
  EXPECT_NEAR(target, 0.31831, 5e-6);
  EXPECT_NEAR(mean, target, 3.0 * se);
}

TEST(Cli, PayloadsReproducibleAcrossRerunsAndThreads) {
  ExperimentConfig cfg;
  cfg.n = 41;
  cfg.k = 250;
  cfg.window_lo = 50;
  cfg.window_hi = 250;
  cfg.seeds = {4, 5};
  cfg.paths = 300;
  const fs::path a = out_dir("det_a"), b = out_dir("det_b");
  cfg.out = a.string();
  set_thread_count(1);
  ASSERT_EQ(run_quiet("reproduce-figures", cfg), kExitOk);
  ASSERT_EQ(run_quiet("cone-mc", cfg), kExitOk);
  cfg.out = b.string();
  set_thread_count(3);
  ASSERT_EQ(run_quiet("reproduce-figures", cfg), kExitOk);
  ASSERT_EQ(run_quiet("cone-mc", cfg), kExitOk);
  set_thread_count(0);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(payload(entry.path()), payload(other)) << entry.path();
    ++compared;
  }
  EXPECT_GE(compared, 10);
}

}  // namespace
}  // namespace lqg
