#include "quatflow/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "quatflow/errors.hpp"

namespace quatflow::io {

namespace {

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"", {"grid", "nu", "t_end", "dt", "nonlinearity_mode", "nonlinear", "diag_every", "r_exponent", "besov",
            "forcing", "initial", "output"}},
      {"grid", {"dim", "sizes", "domain_length"}},
      {"besov", {"s", "p", "q_idx"}},
      {"forcing", {"kind", "amplitude", "mode", "decay_rate"}},
      {"initial", {"preset", "snapshot", "amplitude"}},
      {"output", {"snapshot_every"}},
  };
  return keys;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a{
      {"viscosity", "nu"},       {"kinematic_viscosity", "nu"}, {"timestep", "dt"},  {"time_step", "dt"},
      {"t_final", "t_end"},      {"end_time", "t_end"},         {"horizon", "t_end"}, {"length", "domain_length"},
      {"mode_vector", "mode"},   {"q", "q_idx"},
  };
  return a;
}

std::string where(const YAML::Node& node, const std::string& source) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return source;
  return source + ":" + std::to_string(m.line + 1);
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

void reject_unknown(const YAML::Node& map, const std::string& section, const std::string& source) {
  if (!map.IsMap()) {
    throw ConfigurationError(where(map, source) + ": '" + (section.empty() ? "<root>" : section) +
                             "' must be a mapping");
  }
  const auto& allowed = known_keys().at(section);
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    std::string msg = where(kv.first, source) + ": unknown key '" + qualified(section, key) + "'";
    if (auto s = suggest_key(key, section)) msg += "; did you mean '" + *s + "'?";
    throw ConfigurationError(msg);
  }
}

double as_double(const YAML::Node& node, const std::string& key, const std::string& source) {
  try {
    const std::string text = node.as<std::string>();
    if (text == "inf" || text == "infinity" || text == ".inf") return std::numeric_limits<double>::infinity();
    return node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigurationError(where(node, source) + ": '" + key + "' must be a number");
  }
}

int as_int(const YAML::Node& node, const std::string& key, const std::string& source) {
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    throw ConfigurationError(where(node, source) + ": '" + key + "' must be an integer");
  }
}

bool as_bool(const YAML::Node& node, const std::string& key, const std::string& source) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigurationError(where(node, source) + ": '" + key + "' must be true or false");
  }
}

std::string as_string(const YAML::Node& node, const std::string& key, const std::string& source) {
  if (!node.IsScalar()) throw ConfigurationError(where(node, source) + ": '" + key + "' must be a string");
  return node.as<std::string>();
}

template <typename T, typename Conv>
std::vector<T> as_list(const YAML::Node& node, const std::string& key, const std::string& source, Conv conv) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(conv(item, key, source));
  } else {
    out.push_back(conv(node, key, source));
  }
  return out;
}

void parse_grid(const YAML::Node& node, GridSpec& grid, const std::string& source) {
  reject_unknown(node, "grid", source);
  std::vector<int> sizes{32};
  std::vector<double> lengths{1.0};
  int dim = 0;
  if (node["dim"]) dim = as_int(node["dim"], "grid.dim", source);
  if (node["sizes"]) sizes = as_list<int>(node["sizes"], "grid.sizes", source, as_int);
  if (node["domain_length"]) {
    lengths = as_list<double>(node["domain_length"], "grid.domain_length", source, as_double);
  }
  if (dim == 0) dim = sizes.size() > 1 ? static_cast<int>(sizes.size()) : 2;
  if (dim != 2 && dim != 3) {
    throw ConfigurationError(where(node, source) + ": grid.dim must be 2 or 3, got " + std::to_string(dim));
  }
  auto fill = [&](auto& values, const char* key) {
    if (values.size() == 1) values.resize(static_cast<std::size_t>(dim), values.front());
    if (values.size() != static_cast<std::size_t>(dim)) {
      throw ConfigurationError(where(node, source) + ": " + key + " has " + std::to_string(values.size()) +
                               " entries but grid.dim is " + std::to_string(dim));
    }
  };
  fill(sizes, "grid.sizes");
  fill(lengths, "grid.domain_length");
  grid.dim = dim;
  grid.sizes = {1, 1, 1};
  grid.lengths = {1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) {
    grid.sizes[a] = sizes[static_cast<std::size_t>(a)];
    grid.lengths[a] = lengths[static_cast<std::size_t>(a)];
  }
}

ParsedConfig parse_root(const YAML::Node& root, const std::string& source) {
  ParsedConfig out;
  if (!root || root.IsNull()) return out;
  reject_unknown(root, "", source);
  SimConfig& sim = out.sim;

  if (root["grid"]) parse_grid(root["grid"], sim.grid, source);
  if (root["nu"]) sim.nu = as_double(root["nu"], "nu", source);
  if (root["t_end"]) sim.t_end = as_double(root["t_end"], "t_end", source);
  if (root["dt"]) sim.dt = as_double(root["dt"], "dt", source);
  if (root["diag_every"]) sim.diag_every = as_int(root["diag_every"], "diag_every", source);
  if (root["r_exponent"]) sim.r_exponent = as_double(root["r_exponent"], "r_exponent", source);
  if (root["nonlinear"]) sim.nonlinear = as_bool(root["nonlinear"], "nonlinear", source);
  if (root["nonlinearity_mode"]) {
    const std::string m = as_string(root["nonlinearity_mode"], "nonlinearity_mode", source);
    if (m == "advective") sim.nonlinearity_mode = NonlinearityMode::advective;
    else if (m == "hamilton") sim.nonlinearity_mode = NonlinearityMode::hamilton;
    else throw ConfigurationError(where(root["nonlinearity_mode"], source) + ": nonlinearity_mode must be advective or hamilton");
  }
  if (const YAML::Node b = root["besov"]) {
    reject_unknown(b, "besov", source);
    if (b["s"]) sim.besov.s = as_double(b["s"], "besov.s", source);
    if (b["p"]) sim.besov.p = as_double(b["p"], "besov.p", source);
    if (b["q_idx"]) sim.besov.q_idx = as_double(b["q_idx"], "besov.q_idx", source);
  }
  if (const YAML::Node f = root["forcing"]) {
    reject_unknown(f, "forcing", source);
    if (f["kind"]) {
      const std::string k = as_string(f["kind"], "forcing.kind", source);
      if (k == "none") sim.forcing.kind = ForcingKind::none;
      else if (k == "steady_low_mode") sim.forcing.kind = ForcingKind::steady_low_mode;
      else if (k == "time_decaying_low_mode") sim.forcing.kind = ForcingKind::time_decaying_low_mode;
      else throw ConfigurationError(where(f["kind"], source) + ": unknown forcing.kind '" + k + "'");
    }
    if (f["amplitude"]) sim.forcing.amplitude = as_double(f["amplitude"], "forcing.amplitude", source);
    if (f["decay_rate"]) sim.forcing.decay_rate = as_double(f["decay_rate"], "forcing.decay_rate", source);
    if (f["mode"]) {
      const auto mode = as_list<int>(f["mode"], "forcing.mode", source, as_int);
      if (mode.size() > 3) throw ConfigurationError(where(f["mode"], source) + ": forcing.mode has too many entries");
      sim.forcing.mode = {0, 0, 0};
      std::copy(mode.begin(), mode.end(), sim.forcing.mode.begin());
    }
  }
  if (const YAML::Node i = root["initial"]) {
    reject_unknown(i, "initial", source);
    if (i["preset"]) out.run.preset = as_string(i["preset"], "initial.preset", source);
    if (i["snapshot"]) out.run.initial_snapshot = as_string(i["snapshot"], "initial.snapshot", source);
    if (i["amplitude"]) out.run.initial_amplitude = as_double(i["amplitude"], "initial.amplitude", source);
  }
  if (const YAML::Node o = root["output"]) {
    reject_unknown(o, "output", source);
    if (o["snapshot_every"]) out.run.snapshot_every = as_int(o["snapshot_every"], "output.snapshot_every", source);
    if (out.run.snapshot_every < 0) throw ConfigurationError(source + ": output.snapshot_every must be >= 0");
  }

  try {
    sim.validate();
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(source + ": " + e.what());
  }
  return out;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<std::string> suggest_key(const std::string& key, const std::string& section) {
  const auto it = known_keys().find(section);
  if (it == known_keys().end()) return std::nullopt;
  const auto& allowed = it->second;
  std::optional<std::string> best;
  std::size_t best_d = 3;
  auto consider = [&](const std::string& candidate, const std::string& target) {
    if (std::find(allowed.begin(), allowed.end(), target) == allowed.end()) return;
    const std::size_t d = edit_distance(key, candidate);
    if (d < best_d) {
      best_d = d;
      best = target;
    }
  };
  for (const auto& k : allowed) consider(k, k);
  for (const auto& [alias, target] : aliases()) consider(alias, target);
  return best;
}

ParsedConfig parse_config_string(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigurationError(source + ":" + std::to_string(e.mark.line + 1) + ": malformed configuration: " + e.msg);
  }
  return parse_root(root, source);
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open configuration file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), path.string());
}

}  // namespace quatflow::io
