#include "hsplab/scenario.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace hsplab {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::vector<int>> parse_generator_lists(const json& j, const char* key) {
  if (!j.is_array()) throw Error(std::string("scenario: ") + key + " must be an array");
  std::vector<std::vector<int>> lists;
  for (const json& inner : j) {
    if (!inner.is_array()) throw Error(std::string("scenario: ") + key +
                                       " must contain arrays of element indices");
    std::vector<int> gens;
    for (const json& v : inner) {
      if (!v.is_number_integer()) throw Error("scenario: generators must be integers");
      gens.push_back(v.get<int>());
    }
    lists.push_back(std::move(gens));
  }
  return lists;
}

}  // namespace

Scenario Scenario::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("scenario: invalid JSON: ") + e.what());
  }
  try {
    Scenario sc;
    if (!j.is_object()) throw Error("scenario: top level must be an object");
    if (!j.contains("group") || !j["group"].is_string())
      throw Error("scenario: missing string field 'group'");
    sc.group_spec = j["group"].get<std::string>();

    if (!j.contains("family") || !j["family"].is_object())
      throw Error("scenario: missing object field 'family'");
    const json& fam = j["family"];
    if (fam.contains("conjugates_of") == fam.contains("subgroups"))
      throw Error("scenario: family needs exactly one of 'conjugates_of' or 'subgroups'");
    if (fam.contains("conjugates_of")) {
      sc.conjugates = true;
      json wrapper = json::array({fam["conjugates_of"]});
      sc.generator_lists = parse_generator_lists(wrapper, "family.conjugates_of");
    } else {
      sc.conjugates = false;
      sc.generator_lists = parse_generator_lists(fam["subgroups"], "family.subgroups");
      if (sc.generator_lists.empty())
        throw Error("scenario: family.subgroups must be nonempty");
    }

    if (!j.contains("response_moduli") || !j["response_moduli"].is_array())
      throw Error("scenario: missing array field 'response_moduli'");
    for (const json& m : j["response_moduli"]) {
      if (!m.is_number_integer())
        throw Error("scenario: response_moduli must be integers");
      sc.response_moduli.push_back(m.get<int>());
    }

    if (!j.contains("slates") || !j["slates"].is_array() || j["slates"].empty())
      throw Error("scenario: missing nonempty array field 'slates'");
    for (const json& s : j["slates"]) {
      SlateSpec spec;
      if (s.is_string()) {
        spec.name = s.get<std::string>();
      } else if (s.is_object()) {
        if (!s.contains("name") || !s["name"].is_string() || !s.contains("custom"))
          throw Error("scenario: custom slates need 'name' and 'custom'");
        spec.name = s["name"].get<std::string>();
        std::vector<Complex> amps;
        for (const json& pair : s["custom"]) {
          if (!pair.is_array() || pair.size() != 2)
            throw Error("scenario: custom amplitudes must be [re, im] pairs");
          amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        spec.custom = std::move(amps);
      } else {
        throw Error("scenario: slates must be names or custom objects");
      }
      sc.slates.push_back(std::move(spec));
    }

    if (j.contains("measurements")) {
      sc.measurements.clear();
      if (!j["measurements"].is_array() || j["measurements"].empty())
        throw Error("scenario: measurements must be a nonempty array");
      for (const json& m : j["measurements"]) {
        MeasurementSpec spec;
        if (m.is_string()) {
          spec.kind = m.get<std::string>();
          if (spec.kind != "pgm" && spec.kind != "trivial")
            throw Error("scenario: unknown measurement '" + spec.kind + "'");
        } else if (m.is_object() && m.contains("file") && m["file"].is_string()) {
          spec.kind = "file";
          spec.path = m["file"].get<std::string>();
        } else {
          throw Error("scenario: measurements must be 'pgm', 'trivial', or {\"file\": path}");
        }
        sc.measurements.push_back(std::move(spec));
      }
    }

    if (j.contains("verify")) {
      if (!j["verify"].is_object()) throw Error("scenario: verify must be an object");
      if (j["verify"].contains("theorem"))
        sc.verify_theorem = j["verify"]["theorem"].get<bool>();
    }
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("format")) {
      sc.format = j["format"].get<std::string>();
      if (sc.format != "csv" && sc.format != "json")
        throw Error("scenario: format must be 'csv' or 'json'");
    }
    return sc;
  } catch (const json::exception& e) {
    throw Error(std::string("scenario: malformed field: ") + e.what());
  }
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

namespace {

Slate slate_from_spec(const ResponseSpace& x, const SlateSpec& spec) {
  if (!spec.custom) {
    if (spec.name == "standard") return make_slate(x, SlateKind::Standard);
    if (spec.name == "character") return make_slate(x, SlateKind::Character);
    if (spec.name == "constant") return make_slate(x, SlateKind::Constant);
    throw Error("unknown slate name '" + spec.name + "'");
  }
  Vector amps(static_cast<Eigen::Index>(spec.custom->size()));
  for (std::size_t i = 0; i < spec.custom->size(); ++i)
    amps[static_cast<Eigen::Index>(i)] = (*spec.custom)[i];
  return make_slate(x, amps, spec.name);
}

struct RunTable {
  std::string group_label;
  int family_size = 0;
  int response_dim = 0;
  std::vector<SuccessReport> reports;
  std::vector<double> beta0_sq;
  std::vector<DeviationReport> verifications;

  std::string render_csv() const {
    std::string out = "# group: " + group_label +
                      ", family_size: " + std::to_string(family_size) +
                      ", response_dim: " + std::to_string(response_dim) + "\n";
    out += "slate,measurement,S,is_lower_bound,beta0_sq\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const SuccessReport& r = reports[i];
      out += csv_field(r.slate_tag) + "," + csv_field(r.measurement_tag) + "," +
             fmt17(r.s) + "," + (r.is_lower_bound ? "true" : "false") + "," +
             fmt17(beta0_sq[i]) + "\n";
    }
    for (const DeviationReport& v : verifications)
      out += "# verify: " + v.case_id + ", max_abs_deviation=" +
             fmt17(v.max_abs_deviation) + ", tolerance=" + fmt17(v.tolerance) +
             ", pass=" + (v.pass ? std::string("true") : std::string("false")) + "\n";
    return out;
  }

  std::string render_json() const {
    json results = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const SuccessReport& r = reports[i];
      json conditional = json::array();
      for (Eigen::Index row = 0; row < r.conditional.rows(); ++row) {
        json line = json::array();
        for (Eigen::Index col = 0; col < r.conditional.cols(); ++col)
          line.push_back(r.conditional(row, col));
        conditional.push_back(std::move(line));
      }
      results.push_back(json{{"slate", r.slate_tag},
                             {"measurement", r.measurement_tag},
                             {"S", r.s},
                             {"is_lower_bound", r.is_lower_bound},
                             {"beta0_sq", beta0_sq[i]},
                             {"conditional", std::move(conditional)}});
    }
    json verifs = json::array();
    for (const DeviationReport& v : verifications) verifs.push_back(report_to_json(v));
    json doc{{"group", group_label},
             {"family_size", family_size},
             {"response_dim", response_dim},
             {"results", std::move(results)},
             {"verification", std::move(verifs)}};
    return doc.dump(2) + "\n";
  }

  std::string render(const std::string& format) const {
    if (format == "csv") return render_csv();
    if (format == "json") return render_json();
    throw Error("format must be 'csv' or 'json'");
  }
};

}  // namespace

ScenarioResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  const GroupTable g = GroupTable::parse(sc.group_spec);

  SubgroupFamily family;
  if (sc.conjugates) {
    family = conjugacy_family(g, subgroup_closure(g, sc.generator_lists.at(0)));
  } else {
    for (const auto& gens : sc.generator_lists)
      family.members.push_back(subgroup_closure(g, gens));
    for (std::size_t i = 0; i < family.members.size(); ++i)
      for (std::size_t j = i + 1; j < family.members.size(); ++j)
        if (family.members[i].same_elements(family.members[j]))
          throw Error("family members must be pairwise distinct");
  }

  const ResponseSpace x(sc.response_moduli);
  for (const Subgroup& h : family.members)
    if (x.size() < h.index())
      throw Error("response dimension " + std::to_string(x.size()) +
                  " is smaller than subgroup index " + std::to_string(h.index()));

  std::vector<Slate> slates;
  slates.reserve(sc.slates.size());
  for (const SlateSpec& spec : sc.slates) slates.push_back(slate_from_spec(x, spec));

  const int k = family.size();
  const std::vector<double> priors(k, 1.0 / k);

  // Resolve fixed measurements once; the PGM is rebuilt per slate from that
  // slate's own family states.
  std::vector<std::pair<MeasurementSpec, Povm>> fixed;
  for (const MeasurementSpec& m : sc.measurements) {
    if (m.kind == "trivial") {
      fixed.emplace_back(m, trivial_povm(g.order(), k));
    } else if (m.kind == "file") {
      std::ifstream in(m.path, std::ios::binary);
      if (!in) throw Error("cannot open POVM file " + m.path);
      Povm e = load_povm(in);
      if (e.dim() != g.order())
        throw Error("POVM dimension does not match the group order");
      if (e.outcomes() != k)
        throw Error("POVM outcome count does not match the family size");
      fixed.emplace_back(m, std::move(e));
    } else if (m.kind == "pgm") {
      fixed.emplace_back(m, Povm{});
    } else {
      throw Error("unknown measurement kind '" + m.kind + "'");
    }
  }

  ScenarioResult result;
  for (const Slate& v : slates) {
    const double beta0_sq = slate_betas(v).beta0_sq;
    const std::vector<Density> states = family_states(g, family, x.size(), beta0_sq);
    for (const auto& [spec, povm] : fixed) {
      if (spec.kind == "pgm") {
        const bool known_optimal = sc.conjugates;
        result.reports.push_back(
            success(states, pgm(states, priors), v.tag, "pgm", known_optimal));
      } else if (spec.kind == "trivial") {
        result.reports.push_back(success(states, povm, v.tag, "trivial", true));
      } else {
        result.reports.push_back(success(states, povm, v.tag, "file:" + spec.path, false));
      }
      result.beta0_sq.push_back(beta0_sq);
    }
  }

  if (sc.verify_theorem) {
    const double tol = opt.tolerance.value_or(1e-10);
    std::optional<SampleSpec> sample;
    if (opt.sample)
      sample = SampleSpec{*opt.sample, opt.seed.value_or(sc.seed)};
    for (const Subgroup& h : family.members) {
      result.verifications.push_back(
          check_theorem_equivalence(g, h, x, slates, sample, tol));
      if (!result.verifications.back().pass) result.exit_code = 2;
    }
  }

  RunTable table{g.label(), k, x.size(), result.reports, result.beta0_sq,
                 result.verifications};
  result.rendered = table.render(opt.format.value_or(sc.format));
  return result;
}

std::vector<int> parse_generators(const GroupTable& g, const std::string& text) {
  // split on commas outside parentheses
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);

  std::vector<int> gens;
  for (std::string part : parts) {
    const auto first = part.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = part.find_last_not_of(" \t");
    part = part.substr(first, last - first + 1);
    if (part.empty()) continue;

    if (part[0] == '(') {
      if (g.kind() != GroupTable::Kind::Symmetric)
        throw Error("cycle notation is only available for symmetric groups");
      const int n = g.kind_param();
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::vector<int>> cycles;
      std::size_t pos = 0;
      while (pos < part.size()) {
        if (std::isspace(static_cast<unsigned char>(part[pos]))) {
          ++pos;
          continue;
        }
        if (part[pos] != '(') throw Error("bad cycle notation '" + part + "'");
        ++pos;
        std::vector<int> cycle;
        while (pos < part.size() && part[pos] != ')') {
          const char c = part[pos];
          if (std::isdigit(static_cast<unsigned char>(c))) {
            const int point = c - '0';
            if (point < 1 || point > n)
              throw Error("cycle point out of range in '" + part + "'");
            cycle.push_back(point - 1);
            ++pos;
          } else if (c == ' ' || c == ',') {
            ++pos;
          } else {
            throw Error("bad cycle notation '" + part + "'");
          }
        }
        if (pos >= part.size()) throw Error("unterminated cycle in '" + part + "'");
        ++pos;  // closing paren
        for (std::size_t i = 0; i < cycle.size(); ++i)
          for (std::size_t j = i + 1; j < cycle.size(); ++j)
            if (cycle[i] == cycle[j]) throw Error("repeated point in cycle '" + part + "'");
        if (cycle.size() >= 2) cycles.push_back(std::move(cycle));
      }
      // rightmost cycle acts first, matching composition p(q(i))
      for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        std::vector<int> step(n);
        std::iota(step.begin(), step.end(), 0);
        for (std::size_t i = 0; i < it->size(); ++i)
          step[(*it)[i]] = (*it)[(i + 1) % it->size()];
        std::vector<int> composed(n);
        for (int i = 0; i < n; ++i) composed[i] = step[perm[i]];
        perm = std::move(composed);
      }
      gens.push_back(symmetric_index(perm));
    } else {
      int value = 0;
      std::size_t consumed = 0;
      try {
        value = std::stoi(part, &consumed);
      } catch (const std::exception&) {
        throw Error("bad generator '" + part + "'");
      }
      if (consumed != part.size()) throw Error("bad generator '" + part + "'");
      gens.push_back(value);
    }
  }
  return gens;
}

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + out_path);
  f << text;
}

int cmd_run(const std::string& path, const RunOptions& opt, const std::string& out) {
  const Scenario sc = Scenario::from_file(path);
  const ScenarioResult result = run_scenario(sc, opt);
  emit(result.rendered, out);
  return result.exit_code;
}

int cmd_deutsch(const std::string& format, const std::string& out) {
  const GroupTable g = GroupTable::cyclic(2);
  SubgroupFamily family;
  family.members.push_back(subgroup_closure(g, std::vector<int>{1}));
  family.members.push_back(subgroup_closure(g, std::vector<int>{}));
  const ResponseSpace x({2});
  const std::vector<double> priors(2, 0.5);

  Povm plusminus;
  {
    Matrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    plusminus.elements = {plus, minus};
  }
  const Povm trivial = trivial_povm(2, 2);

  RunTable table{g.label(), 2, 2, {}, {}, {}};
  for (SlateKind kind : {SlateKind::Standard, SlateKind::Character}) {
    const Slate v = make_slate(x, kind);
    const double beta0_sq = slate_betas(v).beta0_sq;
    const std::vector<Density> states = family_states(g, family, 2, beta0_sq);
    table.reports.push_back(success(states, pgm(states, priors), v.tag, "pgm", false));
    table.reports.push_back(success(states, plusminus, v.tag, "plusminus", false));
    table.reports.push_back(success(states, trivial, v.tag, "trivial", true));
    table.beta0_sq.insert(table.beta0_sq.end(), 3, beta0_sq);
  }
  emit(table.render(format), out);
  return 0;
}

int cmd_conjugate(const std::string& group_spec, const std::string& subgroup_text,
                  int d, const std::string& format, const std::string& out) {
  const GroupTable g = GroupTable::parse(group_spec);
  const Subgroup h = subgroup_closure(g, parse_generators(g, subgroup_text));
  const IrrepSet s = irrep_set(g);
  const SubgroupFamily family = conjugacy_family(g, h);
  const std::vector<double> priors(family.size(), 1.0 / family.size());

  struct Row {
    std::string slate;
    double formula;
    double brute;
  };
  std::vector<Row> rows;
  for (const char* name : {"character", "standard"}) {
    const double beta0_sq =
        std::string(name) == "character" ? 0.0 : 1.0 / double(d);
    const double formula = conjugate_optimum(g, h, d, beta0_sq, s);
    const std::vector<Density> states = family_states(g, family, d, beta0_sq);
    const double brute = success(states, pgm(states, priors)).s;
    rows.push_back({name, formula, brute});
  }

  if (format == "csv") {
    std::string text = "# group: " + g.label() + ", subgroup_order: " +
                       std::to_string(h.order()) + ", family_size: " +
                       std::to_string(family.size()) + ", response_dim: " +
                       std::to_string(d) + "\n";
    text += "slate,formula,pgm,deviation\n";
    for (const Row& r : rows)
      text += r.slate + "," + fmt17(r.formula) + "," + fmt17(r.brute) + "," +
              fmt17(std::abs(r.formula - r.brute)) + "\n";
    emit(text, out);
  } else if (format == "json") {
    json rows_json = json::array();
    for (const Row& r : rows)
      rows_json.push_back(json{{"slate", r.slate},
                               {"formula", r.formula},
                               {"pgm", r.brute},
                               {"deviation", std::abs(r.formula - r.brute)}});
    json doc{{"group", g.label()},
             {"subgroup_order", h.order()},
             {"family_size", family.size()},
             {"response_dim", d},
             {"results", std::move(rows_json)}};
    emit(doc.dump(2) + "\n", out);
  } else {
    throw Error("format must be 'csv' or 'json'");
  }
  return 0;
}

int cmd_sweep_d(const std::string& group_spec, const std::string& subgroup_text,
                int d_min, int d_max, const std::string& format,
                const std::string& out) {
  const GroupTable g = GroupTable::parse(group_spec);
  const Subgroup h = subgroup_closure(g, parse_generators(g, subgroup_text));
  const IrrepSet s = irrep_set(g);
  if (d_min < 2 || d_min > d_max) throw Error("bad response dimension range");
  if (d_min < h.index()) throw Error("d-min smaller than the subgroup index");

  if (format == "csv") {
    std::string text = "# group: " + g.label() + ", subgroup_order: " +
                       std::to_string(h.order()) + "\n";
    text += "d,s_character,s_standard\n";
    for (int d = d_min; d <= d_max; ++d)
      text += std::to_string(d) + "," + fmt17(conjugate_optimum(g, h, d, 0.0, s)) +
              "," + fmt17(conjugate_optimum(g, h, d, 1.0 / double(d), s)) + "\n";
    emit(text, out);
  } else if (format == "json") {
    json rows = json::array();
    for (int d = d_min; d <= d_max; ++d)
      rows.push_back(json{{"d", d},
                          {"s_character", conjugate_optimum(g, h, d, 0.0, s)},
                          {"s_standard", conjugate_optimum(g, h, d, 1.0 / double(d), s)}});
    json doc{{"group", g.label()},
             {"subgroup_order", h.order()},
             {"results", std::move(rows)}};
    emit(doc.dump(2) + "\n", out);
  } else {
    throw Error("format must be 'csv' or 'json'");
  }
  return 0;
}

std::vector<DeviationReport> verify_suite(const std::string& suite, std::uint64_t seed,
                                          std::optional<std::int64_t> sample_count,
                                          std::optional<double> tol) {
  std::vector<DeviationReport> reports;

  auto theorem_case = [&](const std::string& spec, std::vector<int> gens,
                          std::vector<int> moduli, std::uint64_t case_seed) {
    const GroupTable g = GroupTable::parse(spec);
    const Subgroup h = subgroup_closure(g, gens);
    const ResponseSpace x(moduli);
    std::mt19937_64 rng(case_seed);
    std::vector<Slate> slates;
    for (int i = 0; i < 5; ++i) slates.push_back(random_slate(x, rng));
    std::optional<SampleSpec> sample;
    if (sample_count) sample = SampleSpec{*sample_count, case_seed};
    reports.push_back(
        check_theorem_equivalence(g, h, x, slates, sample, tol.value_or(1e-10)));
  };

  if (suite == "theorem" || suite == "all") {
    theorem_case("cyclic:4", {2}, {4}, seed + 1);
    theorem_case("symmetric:3", {3}, {2}, seed + 2);
    theorem_case("symmetric:3", {2}, {3}, seed + 3);
    theorem_case("symmetric:3", {2}, {4}, seed + 4);
    theorem_case("dihedral:4", {2}, {4}, seed + 5);
  }
  if (suite == "linearity" || suite == "all") {
    {
      const GroupTable g = GroupTable::cyclic(2);
      SubgroupFamily family;
      family.members.push_back(subgroup_closure(g, std::vector<int>{1}));
      family.members.push_back(subgroup_closure(g, std::vector<int>{}));
      reports.push_back(check_linearity(g, family, ResponseSpace({2}), 20, 5,
                                        seed + 6, tol.value_or(1e-10)));
    }
    {
      const GroupTable g = GroupTable::symmetric(3);
      const SubgroupFamily family =
          conjugacy_family(g, subgroup_closure(g, std::vector<int>{2}));
      reports.push_back(check_linearity(g, family, ResponseSpace({3}), 20, 5,
                                        seed + 7, tol.value_or(1e-10)));
    }
  }
  if (suite == "lemma" || suite == "all") {
    reports.push_back(
        check_lemma_inequality(8, 6, 1000, seed + 8, tol.value_or(1e-12)));
  }
  if (suite == "conjugate" || suite == "all") {
    const GroupTable g = GroupTable::symmetric(3);
    const Subgroup h = subgroup_closure(g, std::vector<int>{2});
    reports.push_back(check_conjugate_formula(g, h, 3, 8, tol.value_or(1e-9)));
  }
  if (reports.empty())
    throw Error("unknown verify suite '" + suite +
                "' (expected theorem, linearity, lemma, conjugate, or all)");
  return reports;
}

int cmd_verify(const std::string& suite, std::uint64_t seed,
               std::optional<std::int64_t> sample_count, std::optional<double> tol,
               const std::string& format, const std::string& out) {
  const std::vector<DeviationReport> reports = verify_suite(suite, seed, sample_count, tol);
  if (format == "csv") {
    std::string text = "case,max_abs_deviation,tolerance,pass,instances,oracle_functions\n";
    for (const DeviationReport& r : reports)
      text += csv_field(r.case_id) + "," + fmt17(r.max_abs_deviation) + "," +
              fmt17(r.tolerance) + "," + (r.pass ? "true" : "false") + "," +
              std::to_string(r.instances) + "," + std::to_string(r.oracle_functions) +
              "\n";
    emit(text, out);
  } else if (format == "json") {
    json docs = json::array();
    for (const DeviationReport& r : reports) docs.push_back(report_to_json(r));
    emit(docs.dump(2) + "\n", out);
  } else {
    throw Error("format must be 'csv' or 'json'");
  }
  for (const DeviationReport& r : reports)
    if (!r.pass) return 2;
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Numerical laboratory for single-query hidden subgroup discrimination"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, format = "csv";
  std::string group_spec, subgroup_text, suite;
  std::optional<std::uint64_t> seed_opt;
  std::optional<std::int64_t> sample_opt;
  std::optional<double> tol_opt;
  int d = 0, d_min = 0, d_max = 0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed_opt, "Override the scenario seed");
  run->add_option("--sample", sample_opt, "Sampled oracle averages with this many draws")
      ->check(CLI::PositiveNumber);
  run->add_option("--tolerance", tol_opt, "Verification tolerance override")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Write output to this file instead of stdout");
  std::string run_format;
  run->add_option("--format", run_format, "Output format (csv or json)");

  CLI::App* deutsch = app.add_subcommand("deutsch", "Two-point reference table");
  deutsch->add_option("--out", out_path, "Output file");
  deutsch->add_option("--format", format, "Output format (csv or json)");

  CLI::App* conjugate =
      app.add_subcommand("conjugate", "Conjugate-family optimum vs brute-force PGM");
  conjugate->add_option("--group", group_spec, "Group spec")->required();
  conjugate->add_option("--subgroup", subgroup_text,
                        "Subgroup generators (indices or cycles)")->required();
  conjugate->add_option("--d", d, "Response dimension")->required();
  conjugate->add_option("--out", out_path, "Output file");
  conjugate->add_option("--format", format, "Output format (csv or json)");

  CLI::App* sweep = app.add_subcommand("sweep-d", "Optimum vs response dimension");
  sweep->add_option("--group", group_spec, "Group spec")->required();
  sweep->add_option("--subgroup", subgroup_text,
                    "Subgroup generators (indices or cycles)")->required();
  sweep->add_option("--d-min", d_min, "Smallest response dimension")->required();
  sweep->add_option("--d-max", d_max, "Largest response dimension")->required();
  sweep->add_option("--out", out_path, "Output file");
  sweep->add_option("--format", format, "Output format (csv or json)");

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "theorem | linearity | lemma | conjugate | all")
      ->required();
  verify->add_option("--seed", seed_opt, "Base seed for random draws");
  verify->add_option("--sample", sample_opt, "Sampled oracle averages with this many draws")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", tol_opt, "Tolerance override for every check");
  verify->add_option("--out", out_path, "Output file");
  verify->add_option("--format", format, "Output format (csv or json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(run)) {
      RunOptions opt;
      opt.seed = seed_opt;
      opt.sample = sample_opt;
      opt.tolerance = tol_opt;
      if (!run_format.empty()) {
        if (run_format != "csv" && run_format != "json")
          throw Error("format must be 'csv' or 'json'");
        opt.format = run_format;
      }
      return cmd_run(scenario_path, opt, out_path);
    }
    if (app.got_subcommand(deutsch)) return cmd_deutsch(format, out_path);
    if (app.got_subcommand(conjugate))
      return cmd_conjugate(group_spec, subgroup_text, d, format, out_path);
    if (app.got_subcommand(sweep))
      return cmd_sweep_d(group_spec, subgroup_text, d_min, d_max, format, out_path);
    if (app.got_subcommand(verify))
      return cmd_verify(suite, seed_opt.value_or(0), sample_opt, tol_opt, format,
                        out_path);
    throw Error("no subcommand selected");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hsplab
