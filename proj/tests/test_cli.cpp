#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quatflow/io/config.hpp"
#include "quatflow/io/records_json.hpp"
#include "quatflow/io/snapshot.hpp"
#include "quatflow/presets.hpp"

namespace fs = std::filesystem;
using quatflow::io::Json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("quatflow_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args, const fs::path& out = {}) {
  std::string cmd = std::string(QUATFLOW_BIN) + " " + args;
  cmd += out.empty() ? " >/dev/null 2>&1" : " >" + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("simulate the Taylor-Green preset") {
  const fs::path dir = scratch("tg");
  REQUIRE(run("simulate --preset taylor-green-2d --output " + dir.string()) == 0);
  const Json manifest = Json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["outcome"] == "completed");
  CHECK(manifest["config_digest"].get<std::string>().size() == 16);
  CHECK(manifest.contains("start_time"));
  CHECK(manifest.contains("end_time"));
  CHECK(manifest.contains("artifact_version"));

  // every file in the directory is listed, and nothing else
  std::set<std::string> listed, present;
  for (const auto& f : manifest["files"]) listed.insert(f.get<std::string>());
  for (const auto& e : fs::directory_iterator(dir)) present.insert(e.path().filename().string());
  CHECK(listed == present);

  const auto recs = quatflow::io::read_ndjson(dir / "diagnostics.ndjson");
  REQUIRE(recs.size() == 11);
  for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].total_energy < recs[i - 1].total_energy);

  CHECK(run("analyze " + (dir / "diagnostics.ndjson").string()) == 0);
  CHECK(run("analyze --json " + (dir / "diagnostics.ndjson").string(), dir / "analyze.json") == 0);
  const Json report = Json::parse(slurp(dir / "analyze.json"));
  CHECK(report["gronwall"]["censored"] == false);

  const fs::path snap = dir / "snapshot_000100.qfld";
  REQUIRE(fs::exists(snap));
  CHECK(run("norms --json --s 1 " + snap.string(), dir / "n1.json") == 0);
  CHECK(run("norms --json --s 1 --scale 2 " + snap.string(), dir / "n2.json") == 0);
  const double n1 = Json::parse(slurp(dir / "n1.json"))["besov_norm"].get<double>();
  const double n2 = Json::parse(slurp(dir / "n2.json"))["besov_norm"].get<double>();
  CHECK(n2 == doctest::Approx(2 * n1).epsilon(1e-14));
  CHECK(run("norms --p inf --q inf " + snap.string()) == 0);

  CHECK(run("decompose " + snap.string() + " --output " + (dir / "bands.csv").string()) == 0);
  CHECK(slurp(dir / "bands.csv").rfind("j,E_w,E_x,E_y,E_z,E_total,reconstruction_error\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("heat-only analyze reports a slope near two") {
  const fs::path dir = scratch("heat");
  fs::create_directories(dir);
  write(dir / "heat.yaml", "grid: {sizes: 128, domain_length: 6.283185307179586}\nnu: 0.01\nt_end: 0.01\n"
                           "dt: 0.005\nnonlinear: false\ndiag_every: 1\n");
  // white noise carries energy in every band
  quatflow::io::write_snapshot(quatflow::white_noise_field(quatflow::make_grid(2, 128, 6.283185307179586), 4),
                               dir / "noise.qfld");
  REQUIRE(run("simulate --config " + (dir / "heat.yaml").string() + " --initial " + (dir / "noise.qfld").string() +
              " --output " + (dir / "out").string()) == 0);
  REQUIRE(run("analyze --json " + (dir / "out" / "diagnostics.ndjson").string(), dir / "a.json") == 0);
  const Json a = Json::parse(slurp(dir / "a.json"));
  CHECK(a["nu"].get<double>() == 0.01);
  REQUIRE(a["scaling_fit"].contains("slope"));
  CHECK(a["scaling_fit"]["slope"].get<double>() == doctest::Approx(2.0).epsilon(0.1));
  fs::remove_all(dir);
}

TEST_CASE("overdriven forcing ends in blow-up") {
  const fs::path dir = scratch("blow");
  fs::create_directories(dir);
  write(dir / "hot.yaml",
        "grid: {sizes: 32, domain_length: 6.283185307179586}\nnu: 0.01\nt_end: 1.0\ndt: 0.01\ndiag_every: 1\n"
        "forcing: {kind: steady_low_mode, amplitude: 1.0e6, mode: [1, 2]}\n"
        "initial: {preset: forced-low-mode}\n");
  const int code = run("simulate --config " + (dir / "hot.yaml").string() + " --output " + (dir / "out").string());
  CHECK(code == 2);
  const Json manifest = Json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest["outcome"] == "blow_up");
  CHECK(manifest["censored"] == true);
  CHECK(manifest["blow_up"]["step_index"].get<long>() > 0);

  CHECK(run("analyze --json " + (dir / "out" / "diagnostics.ndjson").string(), dir / "a.json") == 0);
  CHECK(Json::parse(slurp(dir / "a.json"))["gronwall"]["censored"] == true);
  fs::remove_all(dir);
}

TEST_CASE("output directory contract and error exits") {
  const fs::path dir = scratch("dirs");
  fs::create_directories(dir);
  const std::string cfg = (dir / "c.yaml").string();
  write(cfg, "grid: {sizes: 16}\nt_end: 0.002\ndt: 0.001\n");
  CHECK(run("simulate --config " + cfg + " --output " + (dir / "fresh").string()) == 0);
  CHECK(fs::exists(dir / "fresh" / "manifest.json"));
  CHECK(run("simulate --config " + cfg + " --output " + (dir / "missing" / "deeper").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "missing"));

  write(dir / "typo.yaml", "viscocity: 0.1\n");
  CHECK(run("simulate --config " + (dir / "typo.yaml").string() + " --output " + (dir / "x").string(),
            dir / "err.txt") == 1);
  CHECK(slurp(dir / "err.txt").find("'nu'") != std::string::npos);

  CHECK(run("simulate --preset no-such-preset --output " + (dir / "y").string()) == 1);
  write(dir / "empty.ndjson", "");
  CHECK(run("analyze --nu 0.1 " + (dir / "empty.ndjson").string(), dir / "e.txt") == 1);
  CHECK(slurp(dir / "e.txt").find("no diagnostics") != std::string::npos);
  CHECK(run("decompose " + (dir / "c.yaml").string()) == 1);
  fs::remove_all(dir);
}

TEST_CASE("identical runs give identical diagnostics") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run("simulate --preset forced-low-mode --output " + a.string()) == 0);
  REQUIRE(run("simulate --preset forced-low-mode --output " + b.string()) == 0);
  CHECK(slurp(a / "diagnostics.ndjson") == slurp(b / "diagnostics.ndjson"));
  CHECK(slurp(a / "snapshot_000100.qfld") == slurp(b / "snapshot_000100.qfld"));
  fs::remove_all(a);
  fs::remove_all(b);
}
