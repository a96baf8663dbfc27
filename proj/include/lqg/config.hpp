#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lqg {

/// Flat key=value experiment configuration shared by every CLI subcommand.
struct ExperimentConfig {
  int n = 127;
  double gamma = 0.5;
  int k = 400;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int window_lo = 100;
  int window_hi = 400;
  long paths = 100000;
  double dt = 1e-3;
  double m = 1.0;
  int steps = 512;
  double lambda = 0.0;  // 0 picks a value from the resolved window
  std::string functional = "I";
  double rho = 0.5;
  std::string out = "out";

  /// Canonical text form; parse(to_text()) reproduces the config exactly.
  std::string to_text() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Sets one key from its text value; throws a Config error for unknown keys
  /// or malformed values.
  void set(const std::string& key, const std::string& value);

  /// 16 hex digits of FNV-1a over to_text().
  std::string hash() const;

  /// Checks the parameters the given subcommand uses; throws a Config error.
  void validate(const std::string& subcommand) const;
};

}  // namespace lqg
