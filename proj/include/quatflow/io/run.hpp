#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quatflow/besov.hpp"
#include "quatflow/field.hpp"
#include "quatflow/io/config.hpp"
#include "quatflow/io/records_json.hpp"

namespace quatflow::io {

enum class RunOutcome { completed, blow_up, error };

const char* to_string(RunOutcome o);

/// Process exit code: 0 completed, 2 blow-up, 1 error.
int exit_code(RunOutcome o);

std::string artifact_version();

/// Hex FNV-1a digest of the canonical JSON form of the configuration.
std::string config_digest(const ParsedConfig& cfg);

/// Initial field named by the run options (snapshot, then preset), scaled by
/// the initial amplitude. Falls back to the zero field.
QField load_initial(const ParsedConfig& cfg);

struct RunSummary {
  RunOutcome outcome = RunOutcome::error;
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// Runs a simulation into `output_dir`, which is created when its parent
/// exists. Writes diagnostics.ndjson, snapshot_<step>.qfld files and, last,
/// manifest.json listing every file written.
RunSummary run_simulation(const ParsedConfig& cfg, const QField& initial, const std::filesystem::path& output_dir,
                          std::ostream& log);

/// CSV with header j,E_w,E_x,E_y,E_z,E_total,reconstruction_error; the low
/// block is the row with j = low.
std::string decompose_table(const QField& field, std::optional<int> j_min = std::nullopt);

/// L^p norm, Besov norm and the weighted band terms of `scale * field`.
Json norms_report(const QField& field, const BesovParams& params, double scale = 1.0,
                  std::optional<int> j_min = std::nullopt);
std::string norms_text(const Json& report);

/// Scaling fit and Gronwall reports for a diagnostics stream.
Json analyze_records(const std::vector<DiagnosticsRecord>& records, double nu);
std::string analyze_text(const Json& report);

}  // namespace quatflow::io
