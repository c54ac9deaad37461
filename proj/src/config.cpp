#include "leafcurrent/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace leafcurrent {

namespace pt = boost::property_tree;

namespace {

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (text.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " is not a number: '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("config: " + key + " is not an unsigned integer");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("config: " + key + " must be an integer");
  return static_cast<int>(v);
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("config: empty list entry in '" + text + "'");
    out.push_back(parse_double("list", item.substr(first)));
  }
  return out;
}

void RunConfig::validate() const {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!std::isfinite(a) || !std::isfinite(b)) bad("geometry.a and geometry.b must be finite");
  if (b == 0.0) bad("geometry.b must be nonzero");
  if (!(A > 0.0) || !std::isfinite(A)) bad("epsilon_profiles.A must be positive");
  parse_profile(profile, A);
  quad.validate();
  if (deltas.empty()) bad("current_mass.deltas is empty");
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) bad("current_mass.deltas must lie in (0, 1)");
    if (i && !(deltas[i] < deltas[i - 1])) bad("current_mass.deltas must be strictly decreasing");
  }
  if (s_values.empty()) bad("ddc_verifier.s_values is empty");
  for (size_t i = 0; i < s_values.size(); ++i) {
    if (!(s_values[i] > 0.0) || !std::isfinite(s_values[i])) bad("ddc_verifier.s_values must be positive");
    if (i && !(s_values[i] > s_values[i - 1])) bad("ddc_verifier.s_values must be strictly increasing");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) bad("ddc_verifier.lambda must be positive");
  if (out.empty()) bad("cli_reports.out is empty");
  if (threads < 1) bad("cli_reports.threads must be at least 1");
  if (leaf_grid < 2 || extend_grid < 2) bad("grid sizes must be at least 2");
}

Hyperbolicity config_hyperbolicity(const RunConfig& c, std::string* log) {
  if (c.b > 0.0) return make_hyperbolicity(c.a, c.b);
  const cplx e = swapped_eta(c.a, c.b);
  if (log) {
    *log = "b < 0: exchanging z1 and z2, eta = " + format_double(c.a) + (c.b < 0 ? " - " : " + ") +
           format_double(std::abs(c.b)) + "i replaced by 1/eta = " + format_double(e.real()) + " + " +
           format_double(e.imag()) + "i";
  }
  return make_hyperbolicity(e.real(), e.imag());
}

EpsilonProfile config_profile(const RunConfig& c) { return parse_profile(c.profile, c.A); }

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "[geometry]\n"
     << "a = " << format_double(c.a) << "\n"
     << "b = " << format_double(c.b) << "\n\n"
     << "[epsilon_profiles]\n"
     << "profile = " << c.profile << "\n"
     << "A = " << format_double(c.A) << "\n\n"
     << "[harmonic_extension]\n"
     << "tol_rel = " << format_double(c.quad.tol_rel) << "\n"
     << "tol_abs = " << format_double(c.quad.tol_abs) << "\n"
     << "max_subdivisions = " << c.quad.max_subdivisions << "\n"
     << "tail_cutoff_t = " << format_double(c.quad.tail_cutoff_t) << "\n\n"
     << "[current_mass]\n"
     << "deltas = " << join(c.deltas) << "\n\n"
     << "[ddc_verifier]\n"
     << "s_values = " << join(c.s_values) << "\n"
     << "lambda = " << format_double(c.lambda) << "\n\n"
     << "[cli_reports]\n"
     << "out = " << c.out << "\n"
     << "threads = " << c.threads << "\n"
     << "seed = " << c.seed << "\n"
     << "leaf_grid = " << c.leaf_grid << "\n"
     << "extend_grid = " << c.extend_grid << "\n";
  return os.str();
}

RunConfig parse_config_text(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  RunConfig c;
  const std::set<std::string> sections{"geometry", "epsilon_profiles", "harmonic_extension",
                                       "current_mass", "ddc_verifier", "cli_reports"};
  for (const auto& [section, body] : tree) {
    if (!sections.count(section)) throw std::invalid_argument("config: unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      const std::string full = section + "." + key;
      if (full == "geometry.a") c.a = parse_double(full, v);
      else if (full == "geometry.b") c.b = parse_double(full, v);
      else if (full == "epsilon_profiles.profile") c.profile = v;
      else if (full == "epsilon_profiles.A") c.A = parse_double(full, v);
      else if (full == "harmonic_extension.tol_rel") c.quad.tol_rel = parse_double(full, v);
      else if (full == "harmonic_extension.tol_abs") c.quad.tol_abs = parse_double(full, v);
      else if (full == "harmonic_extension.max_subdivisions") c.quad.max_subdivisions = parse_int(full, v);
      else if (full == "harmonic_extension.tail_cutoff_t") c.quad.tail_cutoff_t = parse_double(full, v);
      else if (full == "current_mass.deltas") c.deltas = parse_number_list(v);
      else if (full == "ddc_verifier.s_values") c.s_values = parse_number_list(v);
      else if (full == "ddc_verifier.lambda") c.lambda = parse_double(full, v);
      else if (full == "cli_reports.out") c.out = v;
      else if (full == "cli_reports.threads") c.threads = parse_int(full, v);
      else if (full == "cli_reports.seed") c.seed = parse_u64(full, v);
      else if (full == "cli_reports.leaf_grid") c.leaf_grid = parse_int(full, v);
      else if (full == "cli_reports.extend_grid") c.extend_grid = parse_int(full, v);
      else throw std::invalid_argument("config: unknown key " + full);
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace leafcurrent
