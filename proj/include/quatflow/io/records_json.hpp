#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "quatflow/diagnostics.hpp"
#include "quatflow/solver.hpp"

namespace quatflow::io {

using Json = nlohmann::ordered_json;

/// One NDJSON object per record. Keys follow the DiagnosticsRecord field
/// names; band maps are objects keyed by "low" and the stringified j.
/// Non-finite numbers are written as null and read back as NaN.
Json record_to_json(const DiagnosticsRecord& r);
DiagnosticsRecord record_from_json(const Json& j);

std::string to_ndjson_line(const DiagnosticsRecord& r);

/// Blank lines are skipped. Throws ConfigurationError naming the line on malformed input.
std::vector<DiagnosticsRecord> read_ndjson(std::istream& in);
std::vector<DiagnosticsRecord> read_ndjson(const std::filesystem::path& path);

Json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const Json& j);

Json scaling_fit_to_json(const ScalingFit& fit);
Json gronwall_to_json(const GronwallReport& report);

}  // namespace quatflow::io
