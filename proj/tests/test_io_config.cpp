#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lqg/config.hpp"
#include "lqg/field.hpp"
#include "lqg/gmc.hpp"
#include "lqg/io.hpp"
#include "lqg/spectral.hpp"

namespace lqg {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lqg_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-8), "1e-08");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, FieldRoundTripAndHeader) {
  const GridField f = sample_gff(GridSpec{7, 12});
  Provenance prov;
  prov.seed = 12;
  prov.config_hash = "abc";
  const auto path = scratch("f.lqgf");
  write_field(path, f, prov, 0.5);
  const GridField g = read_field(path);
  EXPECT_EQ(g.spec.n, 7);
  EXPECT_EQ(g.spec.seed, 12u);
  EXPECT_EQ(g.values, f.values);
  const std::string text = slurp(path);
  EXPECT_EQ(text.rfind("LQGF1\nn=7\nseed=12\ngamma=0.5\nversion=", 0), 0u);
  EXPECT_NE(text.find("config=abc\n\n"), std::string::npos);
  EXPECT_EQ(text.size() - (text.find("\n\n") + 2), 49 * sizeof(double));
}

TEST(Io, MeasureRoundTrip) {
  const LiouvilleMeasure m = build_measure(sample_gff(GridSpec{9, 3}), 0.7);
  const auto path = scratch("m.lqgm");
  write_measure(path, m, Provenance{});
  const LiouvilleMeasure r = read_measure(path);
  EXPECT_EQ(r.mass, m.mass);
  EXPECT_EQ(r.gamma, 0.7);
  EXPECT_EQ(r.total, m.total);
}

TEST(Io, SpectrumRoundTripWithVectors) {
  const LiouvilleMeasure m = build_measure(sample_gff(GridSpec{8, 3}), 0.5);
  SolverOptions o;
  o.k = 6;
  o.want_vectors = true;
  const Spectrum s = solve_spectrum(assemble_pair(m), o);
  const auto path = scratch("s.lqgs");
  Provenance prov;
  prov.seed = 3;
  write_spectrum(path, s, prov);
  const Spectrum r = read_spectrum(path, true);
  EXPECT_EQ(r.eigenvalues, s.eigenvalues);
  ASSERT_TRUE(r.has_vectors());
  EXPECT_EQ(*r.eigenvectors, *s.eigenvectors);
  EXPECT_EQ(r.spec.n, 8);
  EXPECT_EQ(r.tol, s.tol);
  EXPECT_FALSE(read_spectrum(path, false).has_vectors());
}

TEST(Io, RejectsWrongMagicAndTruncation) {
  const auto path = scratch("bad.lqgf");
  {
    std::ofstream out(path);
    out << "LQGM1\nn=2\nseed=1\ngamma=0\nversion=x\nconfig=y\n\n";
  }
  EXPECT_THROW(read_field(path), Error);
  {
    std::ofstream out(path);
    out << "LQGF1\nn=2\nseed=1\ngamma=none\nversion=x\nconfig=y\n\n1234";
  }
  EXPECT_THROW(read_field(path), Error);
  EXPECT_THROW(read_field(scratch("missing.lqgf")), Error);
}

TEST(Csv, ProvenanceAndRows) {
  const auto path = scratch("t.csv");
  {
    Provenance prov;
    prov.seed = 4;
    prov.config_hash = "h";
    CsvWriter csv(path, {"a", "b"}, prov);
    csv.cell(1.5).cell(2).end_row();
    EXPECT_THROW(csv.end_row(), Error);
    EXPECT_THROW(csv.cell(1.0).cell(2.0).cell(3.0), Error);
  }
  const std::string text = slurp(path);
  EXPECT_EQ(text.rfind("# seed=4\n# version=", 0), 0u);
  EXPECT_NE(text.find("# config=h\na,b\n1.5,2\n"), std::string::npos);
}

TEST(Config, RoundTripAndOverrides) {
  ExperimentConfig c;
  c.set("n", "255");
  c.set("gamma", "0.5");
  c.set("seeds", "1, 2,3");
  c.set("dt", "0.0005");
  c.set("functional", "I_tilde");
  const ExperimentConfig r = ExperimentConfig::parse(c.to_text());
  EXPECT_EQ(r.to_text(), c.to_text());
  EXPECT_EQ(r.hash(), c.hash());
  EXPECT_EQ(r.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(r.dt, 0.0005);
  EXPECT_EQ(c.hash().size(), 16u);
  ExperimentConfig d = c;
  d.set("k", "401");
  EXPECT_NE(d.hash(), c.hash());
}

TEST(Config, ParseCommentsAndErrors) {
  const ExperimentConfig c = ExperimentConfig::parse("# comment\n\n n = 31 \ngamma=1\n");
  EXPECT_EQ(c.n, 31);
  EXPECT_EQ(c.gamma, 1.0);
  try {
    ExperimentConfig::parse("bogus=1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  EXPECT_THROW(ExperimentConfig::parse("n=abc\n"), Error);
  EXPECT_THROW(ExperimentConfig::parse("just text\n"), Error);
  EXPECT_THROW(ExperimentConfig::load(scratch("nope.cfg")), Error);
}

TEST(Config, LoadFromFile) {
  const auto path = scratch("c.cfg");
  {
    std::ofstream out(path);
    out << "n=63\nk=50\n";
  }
  const ExperimentConfig c = ExperimentConfig::load(path);
  EXPECT_EQ(c.n, 63);
  EXPECT_EQ(c.k, 50);
}

TEST(Config, ValidationPerSubcommand) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate("weyl"));
  EXPECT_NO_THROW(c.validate("spacing"));
  c.gamma = 2.0;
  EXPECT_THROW(c.validate("weyl"), Error);
  EXPECT_NO_THROW(c.validate("tauberian"));
  c = ExperimentConfig{};
  c.window_hi = c.k + 1;
  EXPECT_THROW(c.validate("weyl"), Error);
  c = ExperimentConfig{};
  c.dt = 0.01;
  EXPECT_THROW(c.validate("cone-mc"), Error);
  c = ExperimentConfig{};
  c.rho = 0.0;
  EXPECT_THROW(c.validate("tauberian"), Error);
  c = ExperimentConfig{};
  c.functional = "J";
  EXPECT_THROW(c.validate("cone-mc"), Error);
}

}  // namespace
}  // namespace lqg
