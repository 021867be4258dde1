#include "quatflow/io/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "quatflow/diagnostics.hpp"
#include "quatflow/errors.hpp"
#include "quatflow/filter_bank.hpp"
#include "quatflow/io/snapshot.hpp"
#include "quatflow/presets.hpp"
#include "quatflow/simulation.hpp"

#ifndef QUATFLOW_VERSION
#define QUATFLOW_VERSION "0.0.0"
#endif

namespace quatflow::io {

namespace fs = std::filesystem;

const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::completed: return "completed";
    case RunOutcome::blow_up: return "blow_up";
    case RunOutcome::error: return "error";
  }
  return "error";
}

int exit_code(RunOutcome o) {
  switch (o) {
    case RunOutcome::completed: return 0;
    case RunOutcome::blow_up: return 2;
    case RunOutcome::error: return 1;
  }
  return 1;
}

std::string artifact_version() { return QUATFLOW_VERSION; }

namespace {

Json run_options_to_json(const RunOptions& r) {
  return Json{{"preset", r.preset},
              {"snapshot", r.initial_snapshot},
              {"amplitude", r.initial_amplitude},
              {"snapshot_every", r.snapshot_every}};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Json& v) { return v.is_number() ? fmt(v.get<double>()) : std::string("nan"); }

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.qfld", step);
  return buf;
}

}  // namespace

std::string config_digest(const ParsedConfig& cfg) {
  const std::string canonical =
      Json{{"sim", config_to_json(cfg.sim)}, {"run", run_options_to_json(cfg.run)}}.dump();
  const std::uint64_t h = fnv1a64(reinterpret_cast<const std::uint8_t*>(canonical.data()), canonical.size());
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

QField load_initial(const ParsedConfig& cfg) {
  QField q;
  if (!cfg.run.initial_snapshot.empty()) {
    q = read_snapshot(cfg.run.initial_snapshot, cfg.sim.grid);
  } else if (!cfg.run.preset.empty()) {
    q = make_preset(cfg.run.preset).initial;
    if (!(q.grid() == cfg.sim.grid)) {
      throw ConfigurationError("preset '" + cfg.run.preset + "' uses grid " + q.grid().shape_string() +
                               ", configuration has " + cfg.sim.grid.shape_string());
    }
  } else {
    q = QField(cfg.sim.grid, Representation::physical);
  }
  if (cfg.run.initial_amplitude != 1.0) q *= cfg.run.initial_amplitude;
  return q;
}

RunSummary run_simulation(const ParsedConfig& cfg, const QField& initial, const fs::path& output_dir,
                          std::ostream& log) {
  RunSummary summary;
  std::error_code ec;
  if (!fs::exists(output_dir)) {
    const fs::path parent = output_dir.has_parent_path() ? output_dir.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) {
      summary.message = "output parent directory '" + parent.string() + "' does not exist";
      return summary;
    }
    fs::create_directory(output_dir, ec);
    if (ec) {
      summary.message = "cannot create output directory: " + ec.message();
      return summary;
    }
  } else if (!fs::is_directory(output_dir)) {
    summary.message = "output path '" + output_dir.string() + "' is not a directory";
    return summary;
  }

  const std::string started = utc_now();
  Json manifest;
  manifest["config_digest"] = config_digest(cfg);
  manifest["artifact_version"] = artifact_version();
  manifest["start_time"] = started;

  std::vector<fs::path>& files = summary.files;
  SimulationResult result;
  long last_snapshot = -1;
  try {
    const fs::path diag_path = output_dir / "diagnostics.ndjson";
    std::ofstream diag(diag_path, std::ios::trunc);
    if (!diag) throw ConfigurationError("cannot write '" + diag_path.string() + "'");
    files.push_back(diag_path.filename());

    auto save = [&](const SolverState& s) {
      const fs::path p = output_dir / snapshot_name(s.step_index);
      write_snapshot(inverse_transform(s.q_hat), p);
      files.push_back(p.filename());
      last_snapshot = s.step_index;
    };
    const int every = cfg.run.snapshot_every;
    result = simulate(
        cfg.sim, initial, [&](const DiagnosticsRecord& r) { diag << to_ndjson_line(r); },
        [&](const SolverState& s) {
          if (s.step_index == 0 || (every > 0 && s.step_index % every == 0)) save(s);
        });
    diag.flush();
    if (!result.blow_up && result.final_state.step_index != last_snapshot) save(result.final_state);
    summary.outcome = result.blow_up ? RunOutcome::blow_up : RunOutcome::completed;
    summary.message = result.blow_up ? result.blow_up_reason : "completed";
  } catch (const std::exception& e) {
    summary.outcome = RunOutcome::error;
    summary.message = e.what();
  }

  manifest["end_time"] = utc_now();
  manifest["outcome"] = to_string(summary.outcome);
  manifest["censored"] = summary.outcome == RunOutcome::blow_up;
  if (summary.outcome == RunOutcome::blow_up) {
    manifest["blow_up"] = Json{{"step_index", result.blow_up_step},
                               {"reason", result.blow_up_reason},
                               {"last_finite_besov_norm", std::isfinite(result.last_finite_besov)
                                                              ? Json(result.last_finite_besov)
                                                              : Json(nullptr)}};
  }
  if (summary.outcome == RunOutcome::error) manifest["error"] = summary.message;
  manifest["config"] = config_to_json(cfg.sim);
  manifest["run_options"] = run_options_to_json(cfg.run);
  const fs::path manifest_path = output_dir / "manifest.json";
  files.push_back(manifest_path.filename());
  Json listed = Json::array();
  for (const auto& f : files) listed.push_back(f.string());
  manifest["files"] = listed;

  std::ofstream out(manifest_path, std::ios::trunc);
  out << manifest.dump(2) << "\n";

  log << "outcome: " << to_string(summary.outcome) << " (" << summary.message << ")\n";
  if (!result.records.empty()) {
    const DiagnosticsRecord& last = result.records.back();
    log << "records: " << result.records.size() << ", final t = " << last.t << ", energy = " << last.total_energy
        << ", besov norm = " << last.besov_norm << "\n";
  }
  return summary;
}

std::string decompose_table(const QField& field, std::optional<int> j_min) {
  const FilterBank bank = build_filter_bank(field.grid(), j_min);
  const QField spec = to_representation(field, Representation::spectral);
  const BandDecomposition decomp = decompose(spec, bank);
  const double norm = std::sqrt(l2_norm_sq(spec));
  const double err = norm > 0.0 ? std::sqrt(l2_norm_sq(spec - decomp.reconstruct())) / norm : 0.0;

  std::ostringstream os;
  os << "j,E_w,E_x,E_y,E_z,E_total,reconstruction_error\n";
  auto row = [&](const std::string& label, const QField& band) {
    os << label;
    for (int c = 0; c < QField::kComponents; ++c) os << ',' << fmt(0.5 * component_l2_norm_sq(band, c));
    os << ',' << fmt(0.5 * l2_norm_sq(band)) << ',' << fmt(err) << '\n';
  };
  row("low", decomp.low_block);
  for (const auto& [j, band] : decomp.bands) row(std::to_string(j), band);
  return os.str();
}

Json norms_report(const QField& field, const BesovParams& params, double scale, std::optional<int> j_min) {
  params.validate();
  QField f = field;
  f *= scale;
  const FilterBank bank = build_filter_bank(f.grid(), j_min);
  const BesovBreakdown b = besov_breakdown(f, bank, params);
  Json terms = Json::object();
  terms["low"] = b.low_term;
  for (const auto& [j, t] : b.band_terms) terms[std::to_string(j)] = t;
  auto index = [](double v) { return std::isinf(v) ? Json("inf") : Json(v); };
  return Json{{"scale", scale},
              {"s", params.s},
              {"p", index(params.p)},
              {"q_idx", index(params.q_idx)},
              {"j_min", bank.j_min()},
              {"j_max", bank.j_max()},
              {"lp_norm", lp_norm(f, params.p)},
              {"besov_norm", b.norm},
              {"weighted_terms", terms}};
}

static std::string index_text(const Json& v) { return v.is_string() ? v.get<std::string>() : fmt(v.get<double>()); }

std::string norms_text(const Json& r) {
  std::ostringstream os;
  os << "L^p norm (p = " << index_text(r["p"]) << "): " << fmt(r["lp_norm"].get<double>()) << "\n";
  os << "Besov norm B^" << fmt(r["s"].get<double>()) << "_{" << index_text(r["p"]) << "," << index_text(r["q_idx"])
     << "}: " << fmt(r["besov_norm"].get<double>()) << "\n";
  os << "weighted band terms 2^{js} ||Delta_j f||_p:\n";
  for (const auto& [key, value] : r["weighted_terms"].items()) {
    os << "  " << std::setw(4) << key << "  " << fmt(value.get<double>()) << "\n";
  }
  return os.str();
}

Json analyze_records(const std::vector<DiagnosticsRecord>& records, double nu) {
  if (records.empty()) throw InsufficientDataError("no diagnostics records to analyze");
  Json out;
  out["records"] = records.size();
  out["nu"] = nu;
  try {
    out["scaling_fit"] = scaling_fit_to_json(dissipation_scaling_fit(records, nu));
  } catch (const InsufficientDataError& e) {
    out["scaling_fit"] = Json{{"error", e.what()}};
  }
  out["gronwall"] = gronwall_to_json(gronwall_monitor(records));
  return out;
}

std::string analyze_text(const Json& r) {
  std::ostringstream os;
  os << "records: " << r["records"].get<std::size_t>() << "\n";
  const Json& fit = r["scaling_fit"];
  if (fit.contains("error")) {
    os << "dissipation scaling fit: " << fit["error"].get<std::string>() << "\n";
  } else {
    os << "dissipation scaling fit: slope " << fmt(fit["slope"]) << " (expected in [1.8, 2.2]: "
       << (fit["slope_in_range"].get<bool>() ? "pass" : "FAIL") << "), residual " << fmt(fit["residual"])
       << "\n";
    for (const auto& b : fit["bands"]) {
      os << "  band " << std::setw(3) << b["j"].get<int>() << "  ratio " << fmt(b["ratio"])
         << "  bracket [" << fmt(b["lower"]) << ", " << fmt(b["upper"]) << "]  "
         << (b["inside"].get<bool>() ? "pass" : "FAIL") << "\n";
    }
  }
  const Json& g = r["gronwall"];
  os << "gronwall envelope: minimal C = " << (g["min_c"].is_null() ? std::string("inf") : fmt(g["min_c"].get<double>()))
     << ", tightest at t = " << (g["contact_time"].is_null() ? std::string("-") : fmt(g["contact_time"].get<double>()))
     << (g["censored"].get<bool>() ? " (censored: blow-up)" : "") << "\n";
  return os.str();
}

}  // namespace quatflow::io
