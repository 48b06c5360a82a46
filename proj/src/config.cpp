#include "covlap/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace covlap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "algebra",
      "grid.L",
      "grid.n",
      "sigma",
      "seed",
      "potential.kind",
      "potential.bumps",
      "potential.amplitude",
      "potential.file",
      "potential.smoothness",
      "source.kind",
      "source.bumps",
      "source.amplitude",
      "source.file",
      "z0.file",
      "solver.tol",
      "solver.max_iter",
      "solver.preconditioner",
      "checks",
      "family.samples",
      "family.min_bumps",
      "family.max_bumps",
      "family.min_radius",
      "family.max_radius",
      "family.center_frac",
      "family.min_amplitude",
      "family.max_amplitude",
      "apriori.n",
      "embedding.n",
      "interpolation.n",
      "interpolation.which",
      "interpolation.q",
      "mollified.p",
      "mollified.deltas",
      "ginibre.deltas",
      "gurka.sigma",
      "gurka.p",
      "bench.n",
      "output_dir",
      "output.csv",
  };
  return keys;
}

class KeyMap {
 public:
  explicit KeyMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& dflt) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double num(const std::string& key, double dflt) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("field '" + key + "': not a number: '" + it->second +
                        "'");
    }
  }

  int integer(const std::string& key, int dflt) const {
    const double v = num(key, dflt);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError("field '" + key + "': not an integer");
    return i;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t dflt) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ConfigError("field '" + key + "': not an unsigned integer");
    }
  }

  bool boolean(const std::string& key, bool dflt) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("field '" + key + "': expected true/false");
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    const auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  std::vector<double> num_list(const std::string& key,
                               std::vector<double> dflt) const {
    if (!has(key)) return dflt;
    std::vector<double> out;
    for (const auto& s : list(key)) {
      try {
        out.push_back(std::stod(s));
      } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': bad list entry '" + s + "'");
      }
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key,
                            std::vector<int> dflt) const {
    if (!has(key)) return dflt;
    std::vector<int> out;
    for (const double v : num_list(key, {})) out.push_back(static_cast<int>(v));
    return out;
  }

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": unknown field '" +
                        key + "'");
    kv[key] = value;
  }

  const KeyMap m(kv);
  ScenarioConfig c;
  c.algebra = m.str("algebra", c.algebra);
  c.grid_L = m.num("grid.L", c.grid_L);
  c.grid_n = m.integer("grid.n", c.grid_n);
  c.sigma = m.num("sigma", c.sigma);
  c.seed = m.u64("seed", c.seed);

  c.potential_kind = m.str("potential.kind", c.potential_kind);
  c.potential_bumps = m.integer("potential.bumps", c.potential_bumps);
  c.potential_amplitude = m.num("potential.amplitude", c.potential_amplitude);
  c.potential_file = m.str("potential.file", c.potential_file);
  c.potential_smoothness = m.str("potential.smoothness", c.potential_smoothness);

  c.source_kind = m.str("source.kind", c.source_kind);
  c.source_bumps = m.integer("source.bumps", c.source_bumps);
  c.source_amplitude = m.num("source.amplitude", c.source_amplitude);
  c.source_file = m.str("source.file", c.source_file);

  c.z0_file = m.str("z0.file", c.z0_file);

  c.solver_tol = m.num("solver.tol", c.solver_tol);
  c.solver_max_iter = m.integer("solver.max_iter", c.solver_max_iter);
  const std::string precond = m.str("solver.preconditioner", "none");
  if (precond == "diag")
    c.solver_diag_precond = true;
  else if (precond != "none")
    throw ConfigError("field 'solver.preconditioner': expected none or diag");

  c.checks = m.list("checks");

  c.family_samples = m.integer("family.samples", c.family_samples);
  c.family_min_bumps = m.integer("family.min_bumps", c.family_min_bumps);
  c.family_max_bumps = m.integer("family.max_bumps", c.family_max_bumps);
  c.family_min_radius = m.num("family.min_radius", c.family_min_radius);
  c.family_max_radius = m.num("family.max_radius", c.family_max_radius);
  c.family_center_frac = m.num("family.center_frac", c.family_center_frac);
  c.family_min_amplitude = m.num("family.min_amplitude", c.family_min_amplitude);
  c.family_max_amplitude = m.num("family.max_amplitude", c.family_max_amplitude);

  c.apriori_n = m.integer("apriori.n", c.apriori_n);
  c.embedding_n = m.integer("embedding.n", c.embedding_n);
  c.interpolation_n = m.integer("interpolation.n", c.interpolation_n);
  c.interpolation_which = m.integer("interpolation.which", c.interpolation_which);
  c.interpolation_q = m.num("interpolation.q", c.interpolation_q);
  c.mollified_p = m.integer("mollified.p", c.mollified_p);
  c.mollified_deltas = m.num_list("mollified.deltas", c.mollified_deltas);
  c.ginibre_deltas = m.num_list("ginibre.deltas", c.ginibre_deltas);
  c.gurka_sigma = m.num("gurka.sigma", c.gurka_sigma);
  c.gurka_p = m.num("gurka.p", c.gurka_p);

  c.bench_n = m.int_list("bench.n", c.bench_n);
  c.output_dir = m.str("output_dir", c.output_dir);
  c.output_csv = m.boolean("output.csv", c.output_csv);

  if (const char* env = std::getenv("COVLAP_THREADS")) {
    try {
      c.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError("COVLAP_THREADS: not an integer");
    }
  }

  c.resolved = m.raw();
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ScenarioConfig c = parse_config_text(ss.str());
  c.resolved["__config_path"] = path;
  return c;
}

namespace {

int smoothness_class(const std::string& decl) {
  if (decl.size() < 2 || decl[0] != 'C') return -1;
  try {
    return std::stoi(decl.substr(1));
  } catch (const std::exception&) {
    return -1;
  }
}

}  // namespace

void validate_config(const ScenarioConfig& cfg, bool for_solve) {
  if (!(cfg.sigma > 0.0) || !(cfg.sigma <= 1.0))
    throw ConfigError("field 'sigma': must lie in (0, 1], got " +
                      std::to_string(cfg.sigma));
  if (!(cfg.grid_L > 0.0)) throw ConfigError("field 'grid.L': must be positive");
  if (cfg.grid_n < 3) throw ConfigError("field 'grid.n': need at least 3 nodes");
  if (for_solve && cfg.grid_n < 5)
    throw ConfigError("field 'grid.n': solves need n >= 5");
  if (!(cfg.solver_tol > 0.0))
    throw ConfigError("field 'solver.tol': must be positive");
  if (cfg.solver_max_iter < 1)
    throw ConfigError("field 'solver.max_iter': must be >= 1");

  auto must_exist = [](const std::string& field, const std::string& path) {
    if (!path.empty() && !std::filesystem::exists(path))
      throw ConfigError("field '" + field + "': file does not exist: " + path);
  };
  must_exist("potential.file", cfg.potential_file);
  must_exist("source.file", cfg.source_file);
  must_exist("z0.file", cfg.z0_file);
  if (cfg.algebra != "su2" && cfg.algebra != "su3" &&
      cfg.algebra.rfind("u1", 0) != 0)
    must_exist("algebra", cfg.algebra);

  if (cfg.potential_kind == "file") {
    if (cfg.potential_file.empty())
      throw ConfigError("field 'potential.file': required for kind=file");
    // smoothness-class metadata mirrors the local assumptions on A_k
    const int cls = smoothness_class(cfg.potential_smoothness);
    if (cls < 0)
      throw ConfigError(
          "field 'potential.smoothness': file-loaded potentials must declare "
          "a class like C0, C1, ...");
    const int max_n = std::max(cfg.apriori_n, std::max(cfg.embedding_n,
                                                       cfg.interpolation_n));
    const int required = std::max(0, max_n - 3);
    if (cls < required)
      throw ConfigError("field 'potential.smoothness': checks of order " +
                        std::to_string(max_n) + " need at least C" +
                        std::to_string(required));
  } else if (cfg.potential_kind != "bumps" && cfg.potential_kind != "zero") {
    throw ConfigError("field 'potential.kind': expected bumps, file or zero");
  }

  if (cfg.source_kind != "bumps" && cfg.source_kind != "file" &&
      cfg.source_kind != "zero" && cfg.source_kind != "manufactured")
    throw ConfigError(
        "field 'source.kind': expected bumps, file, zero or manufactured");
  if (cfg.source_kind == "file" && cfg.source_file.empty())
    throw ConfigError("field 'source.file': required for kind=file");

  const double gsig = (cfg.gurka_sigma < 0.0) ? cfg.sigma : cfg.gurka_sigma;
  if (!(gsig >= 0.0) || !(gsig <= 1.0))
    throw ConfigError("field 'gurka.sigma': must lie in [0, 1]");
  if (!(cfg.gurka_p > 1.0))
    throw ConfigError("field 'gurka.p': must be greater than 1");

  for (const int n : cfg.bench_n)
    if (n < 5) throw ConfigError("field 'bench.n': every entry needs n >= 5");
  if (cfg.output_dir.empty())
    throw ConfigError("field 'output_dir': must not be empty");
}

}  // namespace covlap
