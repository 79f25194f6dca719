#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadowgeo/geometry.hpp"
#include "shadowgeo/revolution.hpp"

namespace shadowgeo {

using Json = nlohmann::json;

inline constexpr int kScenarioSchemaVersion = 1;

/// Builds a surface from its JSON description (see docs/formats.md).
SurfacePtr make_surface(const Json& spec);
ProfilePtr make_profile(const Json& spec);

struct Scenario {
  std::string name;
  Json surface_spec;
  SurfacePtr surface;
  Vec A;
  Vec B;
  int N = 512;
  double tol = 1e-5;
  double planar_tol = 1e-6;
  std::vector<std::string> reports;
  std::string output_dir;  // as written in the file; may be empty
  std::filesystem::path base_dir;
  std::uint64_t seed = 0x5eedULL;
  int seeds = 16;
  bool expected_inconclusive = false;

  /// Validates the document: schema version, surface, endpoints on the
  /// surface, A != B, N >= 16, positive tolerances.
  static Scenario from_json(const Json& doc, const std::filesystem::path& base_dir = {});
  static Scenario load(const std::filesystem::path& path);

  Json to_json() const;
  /// FNV-1a of the canonical JSON form without the output directory.
  std::uint64_t hash() const;
  bool wants(const std::string& report) const;
};

/// Reports a scenario may request.
const std::vector<std::string>& known_reports();

struct RunOptions {
  /// Overrides the scenario's output directory with <root>/<name>.
  std::optional<std::filesystem::path> output_root;
  bool write_files = true;
  bool reuse_cache = false;
  int threads = 0;
};

struct RunResult {
  int exit_code = 0;
  Json summary;
  std::filesystem::path output_dir;
};

/// Exit codes.
inline constexpr int kExitDefinitive = 0;
inline constexpr int kExitInconclusive = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind);

/// Output root: SHADOWGEO_OUTPUT_DIR if set, else nullopt.
std::optional<std::filesystem::path> env_output_root();

std::filesystem::path resolve_output_dir(const Scenario& scenario, const RunOptions& options);

/// clearance, contraction audit, shadow curve, Theorem 1 audit, then the
/// Clairaut table and canal surface when applicable and requested. Writes
/// CSVs, summary.json and the curve cache.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Loads and runs; load failures give exit 2 (invalid input) with the
/// diagnostic in the summary.
RunResult run_scenario_file(const std::filesystem::path& path, const RunOptions& options = {});

/// Canal surface report for a scenario: knots, envelope residuals and the
/// tangency check along the shadow curve.
RunResult run_canal(const Scenario& scenario, const RunOptions& options = {});

const std::vector<std::string>& suite_kinds();

/// Deterministic scenario documents. Every fifth one is a near-boundary
/// case flagged expected_inconclusive.
std::vector<Json> generate_suite(const std::string& kind, int count, std::uint64_t seed, int dimension = 3);

/// Collects every summary.json under `dir` into one document sorted by
/// scenario name, with totals.
Json merge_reports(const std::filesystem::path& dir);

}  // namespace shadowgeo
