#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/grid.hpp"
#include "lqg/spectral.hpp"

namespace lqg {

/// Version string baked in at configure time (git describe when available).
const char* version_string();

/// Provenance stamped into every artifact header.
struct Provenance {
  std::uint64_t seed = 0;
  std::string version = version_string();
  std::string config_hash = "none";
};

void write_field(const std::filesystem::path& path, const GridField& field, const Provenance& prov,
                 std::optional<double> gamma = std::nullopt);
GridField read_field(const std::filesystem::path& path);

void write_measure(const std::filesystem::path& path, const LiouvilleMeasure& measure, const Provenance& prov);
LiouvilleMeasure read_measure(const std::filesystem::path& path);

/// LQGS1 eigenvalue file; eigenvectors, when present, go to `<path>.vec`
/// (LQGF1 header with a count line, then one n*n payload per vector).
void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum, const Provenance& prov);
Spectrum read_spectrum(const std::filesystem::path& path, bool load_vectors = false);

std::filesystem::path vector_sidecar(const std::filesystem::path& path);

/// Shortest round-tripping decimal form of x.
std::string format_double(double x);

/// CSV with `# key=value` provenance lines ahead of the column header.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns, const Provenance& prov);

  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(const std::string& x);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace lqg
