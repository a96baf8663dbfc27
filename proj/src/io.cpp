#include "lqg/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <map>

#include "lqg/kernels.hpp"

#ifndef LQG_VERSION
#define LQG_VERSION "0.1.0"
#endif

namespace lqg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
      return "invalid spec";
    case ErrorKind::Domain:
      return "domain error";
    case ErrorKind::Precondition:
      return "precondition violated";
    case ErrorKind::InsufficientProbes:
      return "insufficient probes";
    case ErrorKind::EmptyRegion:
      return "empty region";
    case ErrorKind::Convergence:
      return "convergence failure";
    case ErrorKind::Resolution:
      return "unresolved";
    case ErrorKind::Io:
      return "i/o error";
    case ErrorKind::Config:
      return "config error";
    case ErrorKind::Internal:
      return "internal error";
  }
  return "error";
}

const char* version_string() { return LQG_VERSION; }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

using Header = std::map<std::string, std::string>;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void write_header(std::ostream& out, const char* magic, const std::vector<std::pair<std::string, std::string>>& kv,
                  const Provenance& prov) {
  out << magic << '\n';
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
  out << "version=" << prov.version << '\n';
  out << "config=" << prov.config_hash << '\n';
  out << '\n';
}

Header read_header(std::istream& in, const char* magic, const std::filesystem::path& path) {
  std::string line;
  std::getline(in, line);
  require(in.good() && line == magic, ErrorKind::Io, path.string() + " is not a " + magic + " file");
  Header h;
  while (std::getline(in, line) && !line.empty()) {
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Io, "malformed header line in " + path.string());
    h[line.substr(0, eq)] = line.substr(eq + 1);
  }
  require(in.good(), ErrorKind::Io, "truncated header in " + path.string());
  return h;
}

const std::string& field_of(const Header& h, const std::string& key, const std::filesystem::path& path) {
  const auto it = h.find(key);
  require(it != h.end(), ErrorKind::Io, "header of " + path.string() + " lacks " + key);
  return it->second;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  require(static_cast<std::size_t>(in.gcount()) == count * sizeof(double), ErrorKind::Io,
          "truncated payload in " + path.string());
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

void write_field(const std::filesystem::path& path, const GridField& field, const Provenance& prov,
                 std::optional<double> gamma) {
  auto out = open_out(path);
  write_header(out, "LQGF1",
               {{"n", std::to_string(field.spec.n)},
                {"seed", std::to_string(field.spec.seed)},
                {"gamma", gamma ? format_double(*gamma) : "none"}},
               prov);
  write_doubles(out, field.values.data(), field.values.size());
  require(out.good(), ErrorKind::Io, "write failed for " + path.string());
}

GridField read_field(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header h = read_header(in, "LQGF1", path);
  GridField f;
  f.spec.n = std::stoi(field_of(h, "n", path));
  f.spec.seed = std::stoull(field_of(h, "seed", path));
  f.spec.validate();
  f.values.resize(f.spec.size());
  read_doubles(in, f.values.data(), f.values.size(), path);
  return f;
}

void write_measure(const std::filesystem::path& path, const LiouvilleMeasure& measure, const Provenance& prov) {
  auto out = open_out(path);
  write_header(out, "LQGM1",
               {{"n", std::to_string(measure.spec.n)},
                {"seed", std::to_string(measure.spec.seed)},
                {"gamma", format_double(measure.gamma)}},
               prov);
  write_doubles(out, measure.mass.data(), measure.mass.size());
  require(out.good(), ErrorKind::Io, "write failed for " + path.string());
}

LiouvilleMeasure read_measure(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header h = read_header(in, "LQGM1", path);
  LiouvilleMeasure m;
  m.spec.n = std::stoi(field_of(h, "n", path));
  m.spec.seed = std::stoull(field_of(h, "seed", path));
  m.spec.validate();
  m.gamma = std::stod(field_of(h, "gamma", path));
  m.mass.resize(m.spec.size());
  read_doubles(in, m.mass.data(), m.mass.size(), path);
  m.total = kernels::serial::chunked_sum(m.mass);
  return m;
}

std::filesystem::path vector_sidecar(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".vec";
  return p;
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spectrum, const Provenance& prov) {
  auto out = open_out(path);
  write_header(out, "LQGS1",
               {{"n", std::to_string(spectrum.spec.n)},
                {"gamma", format_double(spectrum.gamma)},
                {"seed", std::to_string(prov.seed)},
                {"k", std::to_string(spectrum.size())},
                {"tol", format_double(spectrum.tol)}},
               prov);
  write_doubles(out, spectrum.eigenvalues.data(), spectrum.eigenvalues.size());
  require(out.good(), ErrorKind::Io, "write failed for " + path.string());
  if (!spectrum.has_vectors()) return;

  const auto side = vector_sidecar(path);
  auto vout = open_out(side);
  write_header(vout, "LQGF1",
               {{"n", std::to_string(spectrum.spec.n)},
                {"seed", std::to_string(prov.seed)},
                {"gamma", format_double(spectrum.gamma)},
                {"count", std::to_string(spectrum.size())}},
               prov);
  const Eigen::MatrixXd& f = *spectrum.eigenvectors;
  write_doubles(vout, f.data(), static_cast<std::size_t>(f.size()));
  require(vout.good(), ErrorKind::Io, "write failed for " + side.string());
}

Spectrum read_spectrum(const std::filesystem::path& path, bool load_vectors) {
  auto in = open_in(path);
  const Header h = read_header(in, "LQGS1", path);
  Spectrum s;
  s.spec.n = std::stoi(field_of(h, "n", path));
  s.spec.seed = std::stoull(field_of(h, "seed", path));
  s.gamma = std::stod(field_of(h, "gamma", path));
  s.tol = std::stod(field_of(h, "tol", path));
  const int k = std::stoi(field_of(h, "k", path));
  require(k >= 0, ErrorKind::Io, "negative eigenvalue count in " + path.string());
  s.eigenvalues.resize(static_cast<std::size_t>(k));
  read_doubles(in, s.eigenvalues.data(), s.eigenvalues.size(), path);
  if (load_vectors) {
    const auto side = vector_sidecar(path);
    auto vin = open_in(side);
    const Header vh = read_header(vin, "LQGF1", side);
    require(std::stoi(field_of(vh, "count", side)) == k && std::stoi(field_of(vh, "n", side)) == s.spec.n,
            ErrorKind::Io, "eigenvector sidecar does not match " + path.string());
    Eigen::MatrixXd f(static_cast<Eigen::Index>(s.spec.size()), k);
    read_doubles(vin, f.data(), static_cast<std::size_t>(f.size()), side);
    s.eigenvectors = std::move(f);
  }
  return s;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const Provenance& prov)
    : out_(open_out(path)), columns_(columns.size()) {
  out_ << "# seed=" << prov.seed << '\n';
  out_ << "# version=" << prov.version << '\n';
  out_ << "# config=" << prov.config_hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& x) {
  require(filled_ < columns_, ErrorKind::Internal, "too many CSV cells in a row");
  out_ << (filled_ ? "," : "") << x;
  ++filled_;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }
CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  require(filled_ == columns_, ErrorKind::Internal, "incomplete CSV row");
  out_ << '\n';
  filled_ = 0;
  require(out_.good(), ErrorKind::Io, "CSV write failed");
}

}  // namespace lqg
