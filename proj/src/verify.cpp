#include "hsplab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "hsplab/measurement.hpp"

namespace hsplab {

nlohmann::json report_to_json(const DeviationReport& r) {
  return nlohmann::json{{"case", r.case_id},
                        {"max_abs_deviation", r.max_abs_deviation},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass},
                        {"instances", r.instances},
                        {"oracle_functions", r.oracle_functions}};
}

DeviationReport check_theorem_equivalence(const GroupTable& g, const Subgroup& h,
                                          const ResponseSpace& x,
                                          const std::vector<Slate>& slates,
                                          std::optional<SampleSpec> sample,
                                          double tol) {
  const CosetList cosets = left_cosets(g, h);
  DeviationReport r;
  r.case_id = "theorem-equivalence " + g.label() + " |H|=" +
              std::to_string(h.order()) + " D=" + std::to_string(x.size()) +
              (sample ? " sampled" : " full");
  r.tolerance = tol;
  int slate_index = 0;
  for (const Slate& v : slates) {
    const double beta0_sq = slate_betas(v).beta0_sq;
    const Density closed = subgroup_state_closed(g, h, x.size(), beta0_sq);
    std::optional<SampleSpec> mode = sample;
    if (mode) mode->seed = sample->seed + static_cast<std::uint64_t>(slate_index);
    const Density averaged = subgroup_state_average(g, cosets, v, mode);
    r.max_abs_deviation = std::max(r.max_abs_deviation, max_abs(closed - averaged));
    r.oracle_functions +=
        mode ? mode->count : injection_count(x.size(), cosets.index());
    ++r.instances;
    ++slate_index;
  }
  r.pass = r.max_abs_deviation <= tol;
  return r;
}

DeviationReport check_linearity(const GroupTable& g, const SubgroupFamily& family,
                                const ResponseSpace& x, int n_slates, int n_povms,
                                std::uint64_t seed, double tol) {
  if (family.size() < 1) throw Error("family must be nonempty");
  const int k = family.size();
  std::vector<CosetList> cosets;
  cosets.reserve(k);
  for (const Subgroup& h : family.members) cosets.push_back(left_cosets(g, h));

  DeviationReport r;
  r.case_id = "linearity " + g.label() + " K=" + std::to_string(k) +
              " D=" + std::to_string(x.size());
  r.tolerance = tol;

  auto brute_states = [&](const Slate& v) {
    std::vector<Density> states;
    states.reserve(k);
    for (int i = 0; i < k; ++i) {
      states.push_back(subgroup_state_average(g, cosets[i], v));
      r.oracle_functions += injection_count(x.size(), cosets[i].index());
    }
    return states;
  };

  std::mt19937_64 rng(seed);
  const Slate character = make_slate(x, SlateKind::Character);
  const std::vector<Density> character_states = brute_states(character);

  std::vector<Povm> povms;
  povms.reserve(n_povms);
  for (int i = 0; i < n_povms; ++i) povms.push_back(random_povm(g.order(), k, rng));
  std::vector<double> s_vc(n_povms);
  for (int i = 0; i < n_povms; ++i)
    s_vc[i] = success(character_states, povms[i]).s;

  for (int j = 0; j < n_slates; ++j) {
    const Slate v = random_slate(x, rng);
    const double beta0_sq = slate_betas(v).beta0_sq;
    const std::vector<Density> states = brute_states(v);
    for (int i = 0; i < n_povms; ++i) {
      const double actual = success(states, povms[i]).s;
      const double predicted = success_from_character(beta0_sq, s_vc[i], k);
      r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(actual - predicted));
      ++r.instances;
    }
  }
  r.pass = r.max_abs_deviation <= tol;
  return r;
}

DeviationReport check_lemma_inequality(int n_vectors, int dim, int trials,
                                       std::uint64_t seed, double tol) {
  if (n_vectors < 1 || dim < 1 || trials < 1)
    throw Error("lemma check needs positive sizes");
  std::mt19937_64 rng(seed);
  DeviationReport r;
  r.case_id = "norm-lemma n=" + std::to_string(n_vectors) +
              " dim=" + std::to_string(dim);
  r.tolerance = tol;

  auto draw = [&]() {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian(rng);
    return v;
  };

  for (int t = 0; t < trials; ++t) {
    Vector sum = Vector::Zero(dim);
    double rhs = 0;
    for (int i = 0; i < n_vectors; ++i) {
      const Vector v = draw();
      sum += v;
      rhs += v.squaredNorm();
    }
    const double lhs = sum.squaredNorm() / n_vectors;
    r.max_abs_deviation = std::max(r.max_abs_deviation, lhs - rhs);
    ++r.instances;
  }
  // Equality must be exact (within tol) when every vector is the same.
  const int equal_trials = std::max(1, trials / 10);
  for (int t = 0; t < equal_trials; ++t) {
    const Vector v = draw();
    const double lhs = (double(n_vectors) * v).squaredNorm() / n_vectors;
    const double rhs = n_vectors * v.squaredNorm();
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(lhs - rhs));
    ++r.instances;
  }
  r.pass = r.max_abs_deviation <= tol;
  return r;
}

DeviationReport check_conjugate_formula(const GroupTable& g, const Subgroup& h,
                                        int d_min, int d_max, double tol) {
  if (d_min < 2 || d_min > d_max) throw Error("bad response dimension range");
  if (d_min < h.index()) throw Error("d_min smaller than the subgroup index");
  const IrrepSet s = irrep_set(g);
  const SubgroupFamily family = conjugacy_family(g, h);
  const std::vector<double> priors(family.size(), 1.0 / family.size());

  DeviationReport r;
  r.case_id = "conjugate-formula " + g.label() + " |H|=" + std::to_string(h.order()) +
              " D=" + std::to_string(d_min) + ".." + std::to_string(d_max);
  r.tolerance = tol;

  double previous = 2.0;  // above any probability
  for (int d = d_min; d <= d_max; ++d) {
    const double formula = conjugate_optimum(g, h, d, 0.0, s);
    const std::vector<Density> states = family_states(g, family, d, 0.0);
    const double brute = success(states, pgm(states, priors)).s;
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(formula - brute));
    r.max_abs_deviation = std::max(r.max_abs_deviation, formula - previous);
    previous = formula;
    ++r.instances;
  }
  r.pass = r.max_abs_deviation <= tol;
  return r;
}

}  // namespace hsplab
