#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsplab/error.hpp"
#include "hsplab/scenario.hpp"

using namespace hsplab;

namespace {

std::string scenario_path(const char* name) {
  return std::string(HSPLAB_SOURCE_DIR) + "/scenarios/" + name;
}

std::string temp_file(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int run_cli(std::vector<const char*> args) {
  args.insert(args.begin(), "hsplab");
  return cli_main(static_cast<int>(args.size()), args.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const SuccessReport& find_report(const ScenarioResult& result, const std::string& slate,
                                 const std::string& measurement) {
  for (const SuccessReport& r : result.reports)
    if (r.slate_tag == slate && r.measurement_tag == measurement) return r;
  REQUIRE(false);
  return result.reports.front();
}

}  // namespace

TEST_CASE("scenario text parses with defaults filled in") {
  const Scenario sc = Scenario::from_json_text(R"({
    "group": "symmetric:3",
    "family": {"conjugates_of": [2]},
    "response_moduli": [3],
    "slates": ["character"]
  })");
  CHECK(sc.group_spec == "symmetric:3");
  CHECK(sc.conjugates);
  CHECK(sc.generator_lists == std::vector<std::vector<int>>{{2}});
  CHECK(sc.response_moduli == std::vector<int>{3});
  REQUIRE(sc.measurements.size() == 1);
  CHECK(sc.measurements[0].kind == "pgm");
  CHECK_FALSE(sc.verify_theorem);
  CHECK(sc.seed == 0);
  CHECK(sc.format == "csv");
}

TEST_CASE("scenario parsing rejects malformed input") {
  CHECK_THROWS_AS(Scenario::from_json_text("{not json"), Error);
  CHECK_THROWS_AS(Scenario::from_json_text("[1,2]"), Error);
  CHECK_THROWS_AS(Scenario::from_json_text(R"({"group": "cyclic:2"})"), Error);
  // neither or both family keys
  CHECK_THROWS_AS(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {}, "response_moduli": [2], "slates": ["standard"]
  })"),
                  Error);
  CHECK_THROWS_AS(Scenario::from_json_text(R"({
    "group": "cyclic:2",
    "family": {"conjugates_of": [1], "subgroups": [[1]]},
    "response_moduli": [2], "slates": ["standard"]
  })"),
                  Error);
  CHECK_THROWS_AS(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1]]},
    "response_moduli": [2], "slates": ["standard"], "measurements": ["guess"]
  })"),
                  Error);
  CHECK_THROWS_AS(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1]]},
    "response_moduli": [2], "slates": ["standard"], "format": "xml"
  })"),
                  Error);
  CHECK_THROWS_AS(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1]]},
    "response_moduli": [2], "slates": [{"name": "x"}]
  })"),
                  Error);
  CHECK_THROWS_AS(Scenario::from_file("/nonexistent/path.json"), Error);
}

TEST_CASE("two-point scenario reproduces the reference values") {
  const Scenario sc = Scenario::from_file(scenario_path("deutsch.json"));
  const ScenarioResult result = run_scenario(sc);
  CHECK(result.exit_code == 0);
  REQUIRE(result.reports.size() == 4);  // 2 slates x {pgm, trivial}

  CHECK(find_report(result, "standard", "pgm").s ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(find_report(result, "character", "pgm").s ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(find_report(result, "standard", "trivial").s ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(find_report(result, "character", "trivial").s ==
        doctest::Approx(0.5).epsilon(1e-12));

  // mixed family: the pgm value is reported as a bound, the trivial one exactly
  CHECK(find_report(result, "standard", "pgm").is_lower_bound);
  CHECK_FALSE(find_report(result, "standard", "trivial").is_lower_bound);

  REQUIRE(result.verifications.size() == 2);
  for (const DeviationReport& v : result.verifications) CHECK(v.pass);

  // byte-identical reruns
  CHECK(run_scenario(sc).rendered == result.rendered);
  CHECK(result.rendered.find("slate,measurement,S,is_lower_bound,beta0_sq") !=
        std::string::npos);
}

TEST_CASE("conjugate-family scenario marks pgm rows as exact optima") {
  const Scenario sc = Scenario::from_file(scenario_path("s3-conjugates.json"));
  const ScenarioResult result = run_scenario(sc);
  CHECK(result.exit_code == 0);

  const SuccessReport& chr = find_report(result, "character", "pgm");
  CHECK_FALSE(chr.is_lower_bound);
  CHECK(chr.s == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  const SuccessReport& std_pgm = find_report(result, "standard", "pgm");
  CHECK_FALSE(std_pgm.is_lower_bound);
  CHECK(std_pgm.s == doctest::Approx(5.0 / 9.0).epsilon(1e-10));

  const SuccessReport& cst = find_report(result, "constant", "pgm");
  CHECK(cst.s == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  // json rendering parses back with the advertised fields
  const nlohmann::json doc = nlohmann::json::parse(result.rendered);
  CHECK(doc.at("group") == "symmetric:3");
  CHECK(doc.at("family_size") == 3);
  CHECK(doc.at("response_dim") == 3);
  CHECK(doc.at("results").size() == result.reports.size());
  CHECK(doc.at("results")[0].contains("conditional"));
  CHECK(doc.at("verification").size() == 3);
}

TEST_CASE("scenario validation catches incompatible setups") {
  // response space smaller than a member's index
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "symmetric:3", "family": {"conjugates_of": [2]},
    "response_moduli": [2], "slates": ["character"]
  })")),
                  Error);
  // duplicate family members
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "cyclic:4", "family": {"subgroups": [[2], [2]]},
    "response_moduli": [4], "slates": ["standard"]
  })")),
                  Error);
  // custom slate with the wrong length
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1], []]},
    "response_moduli": [2], "slates": [{"name": "x", "custom": [[1, 0]]}]
  })")),
                  Error);
  // custom slate far from unit norm
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1], []]},
    "response_moduli": [2], "slates": [{"name": "x", "custom": [[2, 0], [0, 0]]}]
  })")),
                  Error);
  // unknown named slate
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1], []]},
    "response_moduli": [2], "slates": ["fourier"]
  })")),
                  Error);
  // missing povm file
  CHECK_THROWS_AS(run_scenario(Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1], []]},
    "response_moduli": [2], "slates": ["standard"],
    "measurements": [{"file": "/nonexistent.povm"}]
  })")),
                  Error);
}

TEST_CASE("a custom slate matching a named one gives identical rows") {
  const Scenario sc = Scenario::from_json_text(R"({
    "group": "cyclic:2", "family": {"subgroups": [[1], []]},
    "response_moduli": [2],
    "slates": ["standard", {"name": "e0", "custom": [[1, 0], [0, 0]]}]
  })");
  const ScenarioResult result = run_scenario(sc);
  REQUIRE(result.reports.size() == 2);
  CHECK(result.reports[0].s == doctest::Approx(result.reports[1].s).epsilon(1e-14));
  CHECK(result.beta0_sq[0] == doctest::Approx(result.beta0_sq[1]).epsilon(1e-14));
}

TEST_CASE("undersampled verification drives the exit code to two") {
  const Scenario sc = Scenario::from_file(scenario_path("s3-conjugates.json"));
  RunOptions opt;
  opt.sample = 2;
  opt.tolerance = 1e-12;
  const ScenarioResult result = run_scenario(sc, opt);
  CHECK(result.exit_code == 2);
}

TEST_CASE("generator text accepts indices and cycle notation") {
  const GroupTable s3 = GroupTable::symmetric(3);
  CHECK(parse_generators(s3, "0, 3") == std::vector<int>{0, 3});
  CHECK(parse_generators(s3, "(12)") == std::vector<int>{2});
  CHECK(parse_generators(s3, "(1 2)") == std::vector<int>{2});
  CHECK(parse_generators(s3, "(123)") == std::vector<int>{3});
  CHECK(parse_generators(s3, "(12)(12)") == std::vector<int>{0});
  CHECK(parse_generators(s3, "(12), (123)").size() == 2);

  const GroupTable s4 = GroupTable::symmetric(4);
  // (12)(34) in one-line form swaps both pairs
  const int expected = symmetric_index(std::vector<int>{1, 0, 3, 2});
  CHECK(parse_generators(s4, "(1 2)(3 4)") == std::vector<int>{expected});

  const GroupTable c4 = GroupTable::cyclic(4);
  CHECK(parse_generators(c4, "2") == std::vector<int>{2});
  CHECK_THROWS_AS(parse_generators(c4, "(12)"), Error);
  CHECK_THROWS_AS(parse_generators(s3, "(14)"), Error);
  CHECK_THROWS_AS(parse_generators(s3, "(12"), Error);
  CHECK_THROWS_AS(parse_generators(s3, "(11)"), Error);
  CHECK_THROWS_AS(parse_generators(s3, "abc"), Error);
  CHECK_THROWS_AS(parse_generators(s3, "1x"), Error);
}

TEST_CASE("cli runs scenarios and writes the requested files") {
  const std::string out = temp_file("hsplab-cli-run.csv");
  const std::string path = scenario_path("deutsch.json");
  CHECK(run_cli({"run", path.c_str(), "--out", out.c_str()}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("slate,measurement,S,is_lower_bound,beta0_sq") != std::string::npos);
  CHECK(text.find("standard,pgm,") != std::string::npos);
  CHECK(text.find("# verify: theorem-equivalence") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("cli two-point table carries the reference values in json") {
  const std::string out = temp_file("hsplab-cli-deutsch.json");
  CHECK(run_cli({"deutsch", "--format", "json", "--out", out.c_str()}) == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  bool saw_plusminus = false;
  for (const auto& row : doc.at("results")) {
    if (row.at("slate") == "standard" && row.at("measurement") == "plusminus") {
      CHECK(row.at("S").get<double>() == doctest::Approx(0.75).epsilon(1e-12));
      saw_plusminus = true;
    }
    if (row.at("slate") == "character" && row.at("measurement") == "pgm")
      CHECK(row.at("S").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(saw_plusminus);
  std::remove(out.c_str());
}

TEST_CASE("cli conjugate comparison and dimension sweep run clean") {
  const std::string out = temp_file("hsplab-cli-conj.json");
  CHECK(run_cli({"conjugate", "--group", "symmetric:3", "--subgroup", "(12)",
                 "--d", "3", "--format", "json", "--out", out.c_str()}) == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  for (const auto& row : doc.at("results"))
    CHECK(row.at("deviation").get<double>() < 1e-9);
  std::remove(out.c_str());

  const std::string sweep = temp_file("hsplab-cli-sweep.csv");
  CHECK(run_cli({"sweep-d", "--group", "symmetric:3", "--subgroup", "2",
                 "--d-min", "3", "--d-max", "6", "--out", sweep.c_str()}) == 0);
  const std::string text = slurp(sweep);
  CHECK(text.find("d,s_character,s_standard") != std::string::npos);
  std::remove(sweep.c_str());
}

TEST_CASE("cli verify subcommand reports pass rows") {
  const std::string out = temp_file("hsplab-cli-verify.csv");
  CHECK(run_cli({"verify", "lemma", "--out", out.c_str()}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("norm-lemma") != std::string::npos);
  CHECK(text.find("true") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("cli maps failures to the documented exit codes") {
  CHECK(run_cli({"run", "/nonexistent/scenario.json"}) == 1);
  CHECK(run_cli({"verify", "unknown-suite"}) == 1);
  CHECK(run_cli({"conjugate", "--group", "nonsense:1", "--subgroup", "0",
                 "--d", "2"}) == 1);
  CHECK(run_cli({}) == 1);              // missing subcommand
  CHECK(run_cli({"--help"}) == 0);      // help is not an error
  const std::string path = scenario_path("s3-conjugates.json");
  const std::string out = temp_file("hsplab-cli-fail.json");
  CHECK(run_cli({"run", path.c_str(), "--sample", "2", "--tolerance", "1e-12",
                 "--out", out.c_str()}) == 2);
  std::remove(out.c_str());
}
