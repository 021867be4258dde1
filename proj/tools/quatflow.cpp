// quatflow command-line front end.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "quatflow/errors.hpp"
#include "quatflow/io/config.hpp"
#include "quatflow/io/records_json.hpp"
#include "quatflow/io/run.hpp"
#include "quatflow/io/snapshot.hpp"
#include "quatflow/presets.hpp"

namespace fs = std::filesystem;
using namespace quatflow;

namespace {

double parse_index(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ParameterError("not a number: '" + s + "'");
  return v;
}

// Viscosity recorded in the manifest written next to a diagnostics stream.
std::optional<double> manifest_nu(const fs::path& ndjson) {
  const fs::path manifest = ndjson.parent_path() / "manifest.json";
  std::ifstream in(manifest);
  if (!in) return std::nullopt;
  const io::Json j = io::Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("config") || !j["config"].contains("nu")) return std::nullopt;
  return j["config"]["nu"].get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quatflow: quaternionic Navier-Stokes solver and Littlewood-Paley diagnostics"};
  app.set_version_flag("--version", io::artifact_version());
  app.require_subcommand(1);

  std::string config_path, preset, initial_path, output_dir;
  double amplitude = std::nan("");
  auto* sim = app.add_subcommand("simulate", "Run a simulation and write diagnostics, snapshots and a manifest");
  sim->add_option("--config", config_path, "YAML configuration")->check(CLI::ExistingFile);
  sim->add_option("--preset", preset, "Named preset (configuration and initial field)");
  sim->add_option("--initial", initial_path, "Initial field snapshot")->check(CLI::ExistingFile);
  sim->add_option("--amplitude", amplitude, "Scale factor for the initial field");
  sim->add_option("--output", output_dir, "Output directory")->required();

  std::string snapshot_path, csv_out;
  std::optional<int> j_min;
  auto* dec = app.add_subcommand("decompose", "Per-band energies of a snapshot as CSV");
  dec->add_option("snapshot", snapshot_path, "Snapshot file")->required()->check(CLI::ExistingFile);
  dec->add_option("--jmin", j_min, "Lowest band index");
  dec->add_option("--output", csv_out, "Write the CSV here instead of stdout");

  std::string s_str = "2", p_str = "2", q_str = "2";
  double scale = 1.0;
  bool as_json = false;
  auto* nrm = app.add_subcommand("norms", "L^p and Besov norms of a snapshot");
  nrm->add_option("snapshot", snapshot_path, "Snapshot file")->required()->check(CLI::ExistingFile);
  nrm->add_option("--s", s_str, "Smoothness index");
  nrm->add_option("--p", p_str, "Integrability index (number or inf)");
  nrm->add_option("--q", q_str, "Summability index (number or inf)");
  nrm->add_option("--scale", scale, "Multiply the field before measuring");
  nrm->add_option("--jmin", j_min, "Lowest band index");
  nrm->add_flag("--json", as_json, "Emit JSON");

  std::string ndjson_path;
  std::optional<double> nu;
  auto* ana = app.add_subcommand("analyze", "Dissipation scaling fit and Gronwall envelope of a diagnostics stream");
  ana->add_option("diagnostics", ndjson_path, "diagnostics.ndjson")->required()->check(CLI::ExistingFile);
  ana->add_option("--nu", nu, "Viscosity (default: from manifest.json beside the stream)");
  ana->add_flag("--json", as_json, "Emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      io::ParsedConfig cfg;
      if (!config_path.empty()) {
        cfg = io::parse_config(config_path);
        if (!preset.empty()) cfg.run.preset = preset;
      } else if (!preset.empty()) {
        cfg.sim = make_preset(preset).config;
        cfg.run.preset = preset;
      } else {
        throw ConfigurationError("simulate needs --config or --preset");
      }
      if (!initial_path.empty()) cfg.run.initial_snapshot = initial_path;
      if (!std::isnan(amplitude)) cfg.run.initial_amplitude = amplitude;
      const QField q0 = io::load_initial(cfg);
      const io::RunSummary summary = io::run_simulation(cfg, q0, output_dir, std::cout);
      if (summary.outcome == io::RunOutcome::error) std::cerr << "error: " << summary.message << "\n";
      if (summary.outcome == io::RunOutcome::blow_up) std::cerr << "blow-up: " << summary.message << "\n";
      return io::exit_code(summary.outcome);
    }
    if (*dec) {
      const std::string table = io::decompose_table(io::read_snapshot(snapshot_path), j_min);
      if (csv_out.empty()) {
        std::cout << table;
      } else {
        std::ofstream out(csv_out);
        if (!out) throw ConfigurationError("cannot write '" + csv_out + "'");
        out << table;
      }
      return 0;
    }
    if (*nrm) {
      BesovParams params;
      params.s = parse_index(s_str);
      params.p = parse_index(p_str);
      params.q_idx = parse_index(q_str);
      const io::Json report = io::norms_report(io::read_snapshot(snapshot_path), params, scale, j_min);
      std::cout << (as_json ? report.dump(2) + "\n" : io::norms_text(report));
      return 0;
    }
    if (*ana) {
      if (!nu) nu = manifest_nu(ndjson_path);
      if (!nu) throw ConfigurationError("no --nu given and no manifest.json with config.nu beside the stream");
      const io::Json report = io::analyze_records(io::read_ndjson(fs::path(ndjson_path)), *nu);
      std::cout << (as_json ? report.dump(2) + "\n" : io::analyze_text(report));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
