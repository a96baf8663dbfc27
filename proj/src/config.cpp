#include "lqg/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "lqg/error.hpp"
#include "lqg/io.hpp"

namespace lqg {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  require(res.ec == std::errc() && res.ptr == last, ErrorKind::Config,
          "bad value '" + text + "' for key '" + key + "'");
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

}  // namespace

std::string ExperimentConfig::to_text() const {
  std::ostringstream text;
  text << "n=" << n << '\n'
      << "gamma=" << format_double(gamma) << '\n'
      << "k=" << k << '\n'
      << "tol=" << format_double(tol) << '\n'
      << "seed=" << seed << '\n'
      << "seeds=" << join(seeds) << '\n'
      << "window_lo=" << window_lo << '\n'
      << "window_hi=" << window_hi << '\n'
      << "paths=" << paths << '\n'
      << "dt=" << format_double(dt) << '\n'
      << "m=" << format_double(m) << '\n'
      << "steps=" << steps << '\n'
      << "lambda=" << format_double(lambda) << '\n'
      << "functional=" << functional << '\n'
      << "rho=" << format_double(rho) << '\n'
      << "out=" << out << '\n';
  return text.str();
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "n") n = parse_number<int>(key, value);
  else if (key == "gamma") gamma = parse_number<double>(key, value);
  else if (key == "k") k = parse_number<int>(key, value);
  else if (key == "tol") tol = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "seeds") {
    seeds.clear();
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) seeds.push_back(parse_number<std::uint64_t>(key, trim(item)));
  } else if (key == "window_lo") window_lo = parse_number<int>(key, value);
  else if (key == "window_hi") window_hi = parse_number<int>(key, value);
  else if (key == "paths") paths = parse_number<long>(key, value);
  else if (key == "dt") dt = parse_number<double>(key, value);
  else if (key == "m") m = parse_number<double>(key, value);
  else if (key == "steps") steps = parse_number<int>(key, value);
  else if (key == "lambda") lambda = parse_number<double>(key, value);
  else if (key == "functional") functional = value;
  else if (key == "rho") rho = parse_number<double>(key, value);
  else if (key == "out") out = value;
  else throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Config, "line " + std::to_string(number) + ": expected key=value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Config, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentConfig::validate(const std::string& subcommand) const {
  auto check = [](bool ok, const std::string& what) { require(ok, ErrorKind::Config, what); };
  static const std::set<std::string> grid_users{"sample-field", "build-measure", "solve-spectrum", "weyl",
                                                "spacing",      "heat",          "jlambda",        "reproduce-figures"};
  if (grid_users.count(subcommand)) {
    check(n >= 1, "n must be >= 1");
    check(gamma >= 0.0 && gamma < 2.0, "gamma must lie in [0, 2)");
  }
  if (subcommand == "solve-spectrum" || subcommand == "weyl" || subcommand == "spacing" || subcommand == "heat" ||
      subcommand == "jlambda" || subcommand == "reproduce-figures") {
    check(k >= 1 && static_cast<long>(k) <= static_cast<long>(n) * n, "k must lie in [1, n*n]");
    check(tol > 0.0 && tol <= 1e-4, "tol must lie in (0, 1e-4]");
  }
  if (subcommand == "weyl" || subcommand == "spacing" || subcommand == "reproduce-figures") {
    check(window_lo >= 1 && window_hi <= k, "window must lie inside the computed spectrum");
    check(window_hi - window_lo >= (subcommand == "weyl" ? 50 : 200), "window too short");
    check(!seeds.empty(), "seeds must be non-empty");
  }
  if (subcommand == "jlambda") check(lambda >= 0.0, "lambda must be non-negative");
  if (subcommand == "cone-mc") {
    check(gamma > 0.0 && gamma < 2.0, "gamma must lie in (0, 2)");
    check(m > 0.0, "m must be positive");
    check(paths >= 2, "paths must be >= 2");
    check(dt > 0.0 && dt <= 1e-3, "dt must lie in (0, 1e-3]");
    check(functional == "I" || functional == "I_tilde", "functional must be I or I_tilde");
    check(lambda >= 0.0, "lambda must be non-negative");
  }
  if (subcommand == "bridge-check") {
    check(paths >= 2, "paths must be >= 2");
    check(steps >= 2, "steps must be >= 2");
  }
  if (subcommand == "tauberian") check(rho > 0.0 && rho <= 4.0, "rho must lie in (0, 4]");
  check(!out.empty(), "out must be non-empty");
}

}  // namespace lqg
