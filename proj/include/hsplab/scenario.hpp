#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsplab/measurement.hpp"
#include "hsplab/verify.hpp"

namespace hsplab {

struct SlateSpec {
  std::string name;  // "standard" | "character" | "constant" | custom name
  std::optional<std::vector<Complex>> custom;
};

struct MeasurementSpec {
  std::string kind;  // "pgm" | "trivial" | "file"
  std::string path;  // kind == "file" only
};

// A batch experiment: a subgroup family, a response space, slates and
// measurements to cross, plus verification toggles. Mirrors the committed
// JSON schema in docs/scenario.schema.json.
struct Scenario {
  std::string group_spec;
  bool conjugates = false;
  std::vector<std::vector<int>> generator_lists;
  std::vector<int> response_moduli;
  std::vector<SlateSpec> slates;
  std::vector<MeasurementSpec> measurements{{"pgm", ""}};
  bool verify_theorem = false;
  std::uint64_t seed = 0;
  std::string format = "csv";

  static Scenario from_json_text(std::string_view text);
  static Scenario from_file(const std::string& path);
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> sample;  // sampled oracle averages for verification
  std::optional<double> tolerance;
  std::optional<std::string> format;
};

struct ScenarioResult {
  std::vector<SuccessReport> reports;  // slate-major, then measurement
  std::vector<double> beta0_sq;        // aligned with reports
  std::vector<DeviationReport> verifications;
  std::string rendered;  // csv or json; identical inputs give identical bytes
  int exit_code = 0;     // 2 when a verification failed
};

ScenarioResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

// Subgroup generators from CLI text: comma-separated element indices, or
// cycle notation like "(12)" / "(1 3)(2 4)" for symmetric groups (1-based
// points).
std::vector<int> parse_generators(const GroupTable& g, const std::string& text);

// Full command-line interface; returns the process exit code
// (0 ok, 1 validation or feasibility error, 2 verification failure).
int cli_main(int argc, const char* const* argv);

}  // namespace hsplab
