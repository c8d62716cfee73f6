#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsplab/group.hpp"
#include "hsplab/states.hpp"

namespace hsplab {

struct DeviationReport {
  std::string case_id;
  double max_abs_deviation = 0;
  double tolerance = 0;
  bool pass = false;
  std::int64_t instances = 0;         // slates, trials, or grid cells checked
  std::int64_t oracle_functions = 0;  // hiding functions enumerated behind the check
};

nlohmann::json report_to_json(const DeviationReport& r);

// Closed-form subgroup state against the oracle-enumeration average, per
// slate. Full enumeration by default; a seeded sample otherwise (per-slate
// seeds derive from sample->seed).
DeviationReport check_theorem_equivalence(const GroupTable& g, const Subgroup& h,
                                          const ResponseSpace& x,
                                          const std::vector<Slate>& slates,
                                          std::optional<SampleSpec> sample = {},
                                          double tol = 1e-10);

// success(v, E) against beta0_sq / K + (1 - beta0_sq) success(v_c, E) over a
// random grid of slates and POVMs, with every state built by brute-force
// oracle averaging.
DeviationReport check_linearity(const GroupTable& g, const SubgroupFamily& family,
                                const ResponseSpace& x, int n_slates, int n_povms,
                                std::uint64_t seed, double tol = 1e-10);

// (1/n)||sum v_i||^2 <= sum ||v_i||^2 on random draws, with exact equality
// on equal-vector draws.
DeviationReport check_lemma_inequality(int n_vectors, int dim, int trials,
                                       std::uint64_t seed, double tol = 1e-12);

// Conjugate-family optimum formula against the brute-force full-matrix PGM
// at the character slate, for each response dimension in [d_min, d_max];
// also requires the formula to be nonincreasing in the dimension.
DeviationReport check_conjugate_formula(const GroupTable& g, const Subgroup& h,
                                        int d_min, int d_max, double tol = 1e-9);

}  // namespace hsplab
