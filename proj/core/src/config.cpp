#include "fracma/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fracma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SolverConfig: " + what);
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string printed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One parsed line plus its provenance, so setters can report exactly.
struct Cursor {
  const std::string* source = nullptr;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error(*source + ":" + std::to_string(line) + ": " +
                             what);
  }

  double number(const std::string& raw) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size() || !std::isfinite(v)) fail("malformed number '" + raw + "'");
      return v;
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + raw + "'");
    }
  }

  int integer(const std::string& raw) const {
    const double v = number(raw);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail("expected an integer, got '" + raw + "'");
    return int(v);
  }

  std::vector<double> list(const std::string& raw) const {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(trim(item)));
    if (out.empty()) fail("expected a comma-separated list");
    return out;
  }
};

using Setter = std::function<void(SolverConfig&, const Cursor&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& key_table() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"problem",
       {
           {"dimension", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.dimension = at.integer(v); }},
           {"s", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.s = at.number(v); }},
           {"cone_eigenvalues", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.cone_eigenvalues = at.list(v); }},
           {"bump_amplitude", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.bump_amplitude = at.number(v); }},
           {"bump_decay", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.bump_decay = at.number(v); }},
       }},
      {"grid",
       {
           {"box_radius", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.box_radius = at.number(v); }},
           {"nodes_per_side", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.nodes_per_side = at.integer(v); }},
       }},
      {"quadrature",
       {
           {"inner_radius", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.quad.inner_radius = at.number(v); }},
           {"switch_radius", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.quad.switch_radius = at.number(v); }},
           {"closure_radius", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.quad.closure_radius = at.number(v); }},
           {"radial_per_decade", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.quad.radial_per_decade = at.integer(v); }},
           {"angular", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.quad.angular = at.integer(v); }},
       }},
      {"family",
       {
           {"rotations", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.family_rotations = at.integer(v); }},
           {"eigen_per_stage", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.family_eigen_per_stage = at.integer(v); }},
           {"verification_factor", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.verification_factor = at.integer(v); }},
       }},
      {"solver",
       {
           {"stages", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.stages = at.integer(v); }},
           {"tol_fp", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.tol_fp = at.number(v); }},
           {"max_policy_updates", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.max_policy_updates = at.integer(v); }},
           {"max_sweeps", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.max_sweeps = at.integer(v); }},
           {"damping", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.damping = at.number(v); }},
           {"truncation_radius", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.truncation_radius = at.number(v); }},
           {"barrier_tau", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.barrier_tau = at.number(v); }},
           {"audit_fraction", [](SolverConfig& c, const Cursor& at, const std::string& v) { c.audit_fraction = at.number(v); }},
       }},
  };
  return table;
}

}  // namespace

void SolverConfig::validate() const {
  require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
  require(s > 0.5 && s < 1.0, "s must lie in (1/2, 1)");
  require(int(cone_eigenvalues.size()) == dimension,
          "cone_eigenvalues needs one entry per dimension");
  for (double lam : cone_eigenvalues)
    require(lam > 0.0, "cone eigenvalues must be positive");
  require(bump_amplitude >= 0.0, "bump_amplitude must be >= 0");
  require(bump_decay > 0.0, "bump_decay must be positive");
  require(box_radius > 0.0, "box_radius must be positive");
  require(nodes_per_side >= 3, "nodes_per_side must be >= 3");
  quad.validate();
  require(family_rotations >= 1, "family rotations must be >= 1");
  require(family_eigen_per_stage >= 1, "family eigen_per_stage must be >= 1");
  require(verification_factor >= 1, "verification_factor must be >= 1");
  require(stages >= 1 && stages <= 40, "stages must lie in [1, 40]");
  require(tol_fp > 0.0, "tol_fp must be positive");
  require(max_policy_updates >= 1, "max_policy_updates must be >= 1");
  require(max_sweeps >= 1, "max_sweeps must be >= 1");
  require(damping > 0.0 && damping <= 1.0, "damping must lie in (0, 1]");
  require(truncation_radius >= 0.0, "truncation_radius must be >= 0");
  require(audit_fraction > 0.0 && audit_fraction <= 1.0,
          "audit_fraction must lie in (0, 1]");
  require(barrier_tau >= 0.0, "barrier_tau must be >= 0");
  if (barrier_tau > 0.0) {
    const double cap = std::min(2.0 * s - 1.0, dimension - 2.0 * s);
    require(barrier_tau < cap,
            "barrier_tau must lie in (0, min{2s-1, n-2s}) = (0, " +
                printed(cap) + ")");
  }
}

SolverConfig parse_config(const std::string& text,
                          const std::string& source_name) {
  SolverConfig config;
  const auto& table = key_table();
  const std::map<std::string, Setter>* section = nullptr;
  std::string section_name;
  std::map<std::string, int> seen;  // "section.key" -> first line

  std::istringstream in(text);
  std::string raw;
  Cursor at{&source_name, 0};
  while (std::getline(in, raw)) {
    ++at.line;
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section_name = trim(line.substr(1, line.size() - 2));
      const auto it = table.find(section_name);
      if (it == table.end()) at.fail("unknown section [" + section_name + "]");
      section = &it->second;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected key = value");
    if (!section) at.fail("key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = section->find(key);
    if (it == section->end()) {
      at.fail("unknown key '" + key + "' in [" + section_name + "]");
    }
    const std::string qualified = section_name + "." + key;
    if (const auto prev = seen.find(qualified); prev != seen.end()) {
      at.fail("duplicate key '" + key + "' (first set on line " +
              std::to_string(prev->second) + ")");
    }
    seen[qualified] = at.line;
    if (value.empty()) at.fail("empty value for '" + key + "'");
    it->second(config, at, value);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(source_name + ": " + err.what());
  }
  return config;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string canonical_text(const SolverConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "dimension = " << c.dimension << "\n";
  out << "s = " << printed(c.s) << "\n";
  out << "cone_eigenvalues = ";
  for (std::size_t i = 0; i < c.cone_eigenvalues.size(); ++i) {
    out << (i ? ", " : "") << printed(c.cone_eigenvalues[i]);
  }
  out << "\n";
  out << "bump_amplitude = " << printed(c.bump_amplitude) << "\n";
  out << "bump_decay = " << printed(c.bump_decay) << "\n";
  out << "[grid]\n";
  out << "box_radius = " << printed(c.box_radius) << "\n";
  out << "nodes_per_side = " << c.nodes_per_side << "\n";
  out << "[quadrature]\n";
  out << "inner_radius = " << printed(c.quad.inner_radius) << "\n";
  out << "switch_radius = " << printed(c.quad.switch_radius) << "\n";
  out << "closure_radius = " << printed(c.quad.closure_radius) << "\n";
  out << "radial_per_decade = " << c.quad.radial_per_decade << "\n";
  out << "angular = " << c.quad.angular << "\n";
  out << "[family]\n";
  out << "rotations = " << c.family_rotations << "\n";
  out << "eigen_per_stage = " << c.family_eigen_per_stage << "\n";
  out << "verification_factor = " << c.verification_factor << "\n";
  out << "[solver]\n";
  out << "stages = " << c.stages << "\n";
  out << "tol_fp = " << printed(c.tol_fp) << "\n";
  out << "max_policy_updates = " << c.max_policy_updates << "\n";
  out << "max_sweeps = " << c.max_sweeps << "\n";
  out << "damping = " << printed(c.damping) << "\n";
  out << "truncation_radius = " << printed(c.truncation_radius) << "\n";
  out << "barrier_tau = " << printed(c.barrier_tau) << "\n";
  out << "audit_fraction = " << printed(c.audit_fraction) << "\n";
  return out.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t config_hash(const SolverConfig& config) {
  return fnv1a64(canonical_text(config));
}

}  // namespace fracma
