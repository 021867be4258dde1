#include "quatflow/io/records_json.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>

#include "quatflow/errors.hpp"

namespace quatflow::io {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

Json bands_to_json(const BandValues& b) {
  Json out = Json::object();
  out["low"] = number(b.low);
  for (const auto& [j, v] : b.bands) out[std::to_string(j)] = number(v);
  return out;
}

BandValues bands_from_json(const Json& j) {
  BandValues out;
  for (const auto& [key, value] : j.items()) {
    if (key == "low") out.low = read_number(value);
    else out.bands[std::stoi(key)] = read_number(value);
  }
  return out;
}

Json besov_to_json(const BesovParams& b) {
  auto index = [](double v) { return std::isinf(v) ? Json("inf") : Json(v); };
  return Json{{"s", b.s}, {"p", index(b.p)}, {"q_idx", index(b.q_idx)}};
}

double index_from_json(const Json& j) {
  if (j.is_string()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace

Json record_to_json(const DiagnosticsRecord& r) {
  Json j;
  j["t"] = number(r.t);
  j["step_index"] = r.step_index;
  j["total_energy"] = number(r.total_energy);
  j["band_energy"] = bands_to_json(r.band_energy);
  j["band_dissipation"] = bands_to_json(r.band_dissipation);
  Json w = Json::array();
  for (double v : r.besov_weighted_energy) w.push_back(number(v));
  j["besov_weighted_energy"] = w;
  j["besov_norm"] = number(r.besov_norm);
  j["gronwall_lhs"] = number(r.gronwall_lhs);
  const GronwallTerms& g = r.gronwall_rhs_terms;
  j["gronwall_rhs_terms"] = Json{{"initial_norm", number(g.initial_norm)},
                                 {"forcing_integral", number(g.forcing_integral)},
                                 {"exponent_integral", number(g.exponent_integral)},
                                 {"forcing_norm", number(g.forcing_norm)},
                                 {"forcing_lr_integral", number(g.forcing_lr_integral)}};
  j["energy_balance_residual"] = number(r.energy_balance_residual);
  j["blow_up"] = r.blow_up;
  return j;
}

DiagnosticsRecord record_from_json(const Json& j) {
  DiagnosticsRecord r;
  r.t = read_number(j.at("t"));
  r.step_index = j.at("step_index").get<long>();
  r.total_energy = read_number(j.at("total_energy"));
  r.band_energy = bands_from_json(j.at("band_energy"));
  r.band_dissipation = bands_from_json(j.at("band_dissipation"));
  const Json& w = j.at("besov_weighted_energy");
  for (std::size_t c = 0; c < 4; ++c) r.besov_weighted_energy[c] = read_number(w.at(c));
  r.besov_norm = read_number(j.at("besov_norm"));
  r.gronwall_lhs = read_number(j.at("gronwall_lhs"));
  const Json& g = j.at("gronwall_rhs_terms");
  r.gronwall_rhs_terms.initial_norm = read_number(g.at("initial_norm"));
  r.gronwall_rhs_terms.forcing_integral = read_number(g.at("forcing_integral"));
  r.gronwall_rhs_terms.exponent_integral = read_number(g.at("exponent_integral"));
  r.gronwall_rhs_terms.forcing_norm = g.contains("forcing_norm") ? read_number(g.at("forcing_norm")) : 0.0;
  r.gronwall_rhs_terms.forcing_lr_integral =
      g.contains("forcing_lr_integral") ? read_number(g.at("forcing_lr_integral")) : 0.0;
  r.energy_balance_residual = read_number(j.at("energy_balance_residual"));
  r.blow_up = j.at("blow_up").get<bool>();
  return r;
}

std::string to_ndjson_line(const DiagnosticsRecord& r) { return record_to_json(r).dump() + "\n"; }

std::vector<DiagnosticsRecord> read_ndjson(std::istream& in) {
  std::vector<DiagnosticsRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw ConfigurationError("diagnostics line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<DiagnosticsRecord> read_ndjson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open diagnostics file '" + path.string() + "'");
  return read_ndjson(in);
}

Json config_to_json(const SimConfig& cfg) {
  Json grid;
  grid["dim"] = cfg.grid.dim;
  Json sizes = Json::array(), lengths = Json::array();
  for (int a = 0; a < cfg.grid.dim; ++a) {
    sizes.push_back(cfg.grid.sizes[a]);
    lengths.push_back(cfg.grid.lengths[a]);
  }
  grid["sizes"] = sizes;
  grid["domain_length"] = lengths;
  Json mode = Json::array();
  for (int a = 0; a < cfg.grid.dim; ++a) mode.push_back(cfg.forcing.mode[a]);
  return Json{{"grid", grid},
              {"nu", cfg.nu},
              {"t_end", cfg.t_end},
              {"dt", cfg.dt},
              {"nonlinearity_mode", to_string(cfg.nonlinearity_mode)},
              {"nonlinear", cfg.nonlinear},
              {"forcing",
               Json{{"kind", to_string(cfg.forcing.kind)},
                    {"amplitude", cfg.forcing.amplitude},
                    {"mode", mode},
                    {"decay_rate", cfg.forcing.decay_rate}}},
              {"diag_every", cfg.diag_every},
              {"besov", besov_to_json(cfg.besov)},
              {"r_exponent", cfg.r_exponent}};
}

SimConfig config_from_json(const Json& j) {
  SimConfig cfg;
  const Json& grid = j.at("grid");
  cfg.grid.dim = grid.at("dim").get<int>();
  cfg.grid.sizes = {1, 1, 1};
  cfg.grid.lengths = {1.0, 1.0, 1.0};
  for (int a = 0; a < cfg.grid.dim; ++a) {
    cfg.grid.sizes[a] = grid.at("sizes").at(static_cast<std::size_t>(a)).get<int>();
    cfg.grid.lengths[a] = grid.at("domain_length").at(static_cast<std::size_t>(a)).get<double>();
  }
  cfg.nu = j.at("nu").get<double>();
  cfg.t_end = j.at("t_end").get<double>();
  cfg.dt = j.at("dt").get<double>();
  cfg.nonlinearity_mode =
      j.at("nonlinearity_mode").get<std::string>() == "hamilton" ? NonlinearityMode::hamilton : NonlinearityMode::advective;
  cfg.nonlinear = j.at("nonlinear").get<bool>();
  const Json& f = j.at("forcing");
  const std::string kind = f.at("kind").get<std::string>();
  cfg.forcing.kind = kind == "steady_low_mode"          ? ForcingKind::steady_low_mode
                     : kind == "time_decaying_low_mode" ? ForcingKind::time_decaying_low_mode
                                                        : ForcingKind::none;
  cfg.forcing.amplitude = f.at("amplitude").get<double>();
  cfg.forcing.decay_rate = f.at("decay_rate").get<double>();
  cfg.forcing.mode = {0, 0, 0};
  for (std::size_t a = 0; a < f.at("mode").size() && a < 3; ++a) cfg.forcing.mode[a] = f.at("mode").at(a).get<int>();
  cfg.diag_every = j.at("diag_every").get<int>();
  const Json& b = j.at("besov");
  cfg.besov = {b.at("s").get<double>(), index_from_json(b.at("p")), index_from_json(b.at("q_idx"))};
  cfg.r_exponent = j.at("r_exponent").get<double>();
  return cfg;
}

Json scaling_fit_to_json(const ScalingFit& fit) {
  Json bands = Json::array();
  for (const BandBracket& b : fit.bands) {
    bands.push_back(Json{{"j", b.j}, {"ratio", number(b.ratio)}, {"lower", b.lower}, {"upper", b.upper},
                         {"inside", b.inside}});
  }
  return Json{{"slope", number(fit.slope)},
              {"intercept", number(fit.intercept)},
              {"residual", number(fit.residual)},
              {"slope_range", Json::array({kSlopeLow, kSlopeHigh})},
              {"slope_in_range", fit.slope_in_range},
              {"all_bands_inside_bracket", fit.all_inside},
              {"usable_bands", fit.usable_bands},
              {"bands", bands}};
}

Json gronwall_to_json(const GronwallReport& r) {
  return Json{{"min_c", number(r.min_c)},
              {"contact_time", number(r.contact_time)},
              {"lhs_identically_zero", r.lhs_identically_zero},
              {"censored", r.censored},
              {"unbounded", r.unbounded},
              {"records_used", r.records_used}};
}

}  // namespace quatflow::io
