#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "hsplab/error.hpp"
#include "hsplab/group.hpp"
#include "hsplab/irreps.hpp"
#include "hsplab/linalg.hpp"
#include "hsplab/measurement.hpp"
#include "hsplab/states.hpp"

using namespace hsplab;

namespace {

Matrix ket_plus() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

Matrix ket_minus() {
  Matrix m(2, 2);
  m << 0.5, -0.5, -0.5, 0.5;
  return m;
}

}  // namespace

TEST_CASE("povm validation accepts resolutions of the identity only") {
  validate_povm(trivial_povm(3, 4));

  Povm bad_sum;
  bad_sum.elements = {ket_plus(), ket_plus()};
  CHECK_THROWS_AS(validate_povm(bad_sum), Error);

  Povm negative;
  Matrix over = 1.5 * ket_plus(), under = Matrix::Identity(2, 2) - over;
  negative.elements = {over, under};  // under has eigenvalue -1/2
  CHECK_THROWS_AS(validate_povm(negative), Error);

  Povm non_hermitian;
  Matrix skew(2, 2);
  skew << 0.5, 0.1, -0.1, 0.5;
  non_hermitian.elements = {skew, Matrix::Identity(2, 2) - skew};
  CHECK_THROWS_AS(validate_povm(non_hermitian), Error);
}

TEST_CASE("pgm reproduces the two-point hand values") {
  const std::vector<double> half{0.5, 0.5};

  // standard-slate pair: flat-plus-coherent vs maximally mixed
  const std::vector<Density> standard{ket_plus(), Matrix::Identity(2, 2) / 2.0};
  const Povm m = pgm(standard, half);
  validate_povm(m);
  CHECK(max_abs(m.elements[0] - (2.0 / 3.0) * ket_plus()) < 1e-12);
  CHECK(max_abs(m.elements[1] - ((1.0 / 3.0) * ket_plus() + ket_minus())) < 1e-12);
  const SuccessReport r = success(standard, m, "standard", "pgm");
  check_success_report(r);
  CHECK(r.s == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.is_lower_bound);

  // orthogonal pair: the pgm is the perfect projective measurement
  const std::vector<Density> orthogonal{ket_plus(), ket_minus()};
  const SuccessReport perfect = success(orthogonal, pgm(orthogonal, half));
  CHECK(perfect.s == doctest::Approx(1.0).epsilon(1e-12));

  // identical pair: nothing to learn, the pgm guesses uniformly
  const std::vector<Density> same{ket_plus(), ket_plus()};
  const SuccessReport blind = success(same, pgm(same, half));
  CHECK(blind.s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pgm completes the kernel and handles one-outcome families") {
  const std::vector<Density> single{ket_plus()};
  const Povm one = pgm(single, {1.0});
  REQUIRE(one.outcomes() == 1);
  CHECK(max_abs(one.elements[0] - Matrix::Identity(2, 2)) < 1e-12);

  // rank-deficient average state: elements still sum to the identity
  Matrix e0 = Matrix::Zero(3, 3);
  e0(0, 0) = 1.0;
  const std::vector<Density> degenerate{e0, e0};
  const Povm m = pgm(degenerate, {0.5, 0.5});
  validate_povm(m);
  CHECK(success(degenerate, m).s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pgm rejects malformed priors") {
  const std::vector<Density> states{ket_plus(), ket_minus()};
  CHECK_THROWS_AS(pgm(states, {0.5}), Error);
  CHECK_THROWS_AS(pgm(states, {0.7, 0.7}), Error);
  CHECK_THROWS_AS(pgm(states, {1.5, -0.5}), Error);
}

TEST_CASE("block pgm agrees with the full-matrix pgm on a conjugate family") {
  const GroupTable g = GroupTable::symmetric(3);
  const IrrepSet s = irrep_set(g);
  const SubgroupFamily family =
      conjugacy_family(g, subgroup_closure(g, std::vector<int>{2}));
  const std::vector<double> priors(3, 1.0 / 3.0);

  for (int d : {3, 5}) {
    const BlockPovm blocks = pgm_blocks(s, family, d);
    validate_block_povm(blocks);
    const SuccessReport block_report =
        success_blocks(s, family_state_blocks(s, family, d, 0.0), blocks);
    check_success_report(block_report);

    const std::vector<Density> states = family_states(g, family, d, 0.0);
    const SuccessReport full_report = success(states, pgm(states, priors));
    CHECK(block_report.s == doctest::Approx(full_report.s).epsilon(1e-11));
    CHECK(max_abs((block_report.conditional - full_report.conditional).cast<Complex>()) <
          1e-10);
  }
}

TEST_CASE("twirling preserves completeness and family statistics") {
  const GroupTable g = GroupTable::symmetric(3);
  const SubgroupFamily family =
      conjugacy_family(g, subgroup_closure(g, std::vector<int>{2}));
  const std::vector<Density> states = family_states(g, family, 4, 0.25);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const Povm e = random_povm(6, 3, rng);
    const Povm t = povm_twirl(g, e);
    validate_povm(t);
    const SuccessReport before = success(states, e);
    const SuccessReport after = success(states, t);
    CHECK(max_abs((before.conditional - after.conditional).cast<Complex>()) < 1e-10);
  }
  CHECK_THROWS_AS(povm_twirl(g, trivial_povm(4, 2)), Error);
}

TEST_CASE("success reports expose conditionals that are stochastic") {
  const GroupTable g = GroupTable::symmetric(3);
  const SubgroupFamily family =
      conjugacy_family(g, subgroup_closure(g, std::vector<int>{2}));
  const std::vector<Density> states = family_states(g, family, 3, 0.0);
  const SuccessReport r =
      success(states, pgm(states, {1.0 / 3, 1.0 / 3, 1.0 / 3}), "character", "pgm",
              true);
  check_success_report(r);
  CHECK_FALSE(r.is_lower_bound);
  CHECK(r.slate_tag == "character");
  for (int k = 0; k < 3; ++k)
    CHECK(r.conditional.row(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
  double diag = 0;
  for (int k = 0; k < 3; ++k) diag += r.conditional(k, k);
  CHECK(r.s == doctest::Approx(diag / 3.0).epsilon(1e-12));

  SuccessReport broken = r;
  broken.conditional(0, 0) += 0.1;
  CHECK_THROWS_AS(check_success_report(broken), Error);
}

TEST_CASE("character value propagates linearly to any slate weight") {
  const GroupTable g = GroupTable::symmetric(3);
  const SubgroupFamily family =
      conjugacy_family(g, subgroup_closure(g, std::vector<int>{2}));
  std::mt19937_64 rng(23);
  const Povm e = random_povm(6, 3, rng);
  const double s_vc = success(family_states(g, family, 4, 0.0), e).s;
  for (double w : {0.1, 0.25, 0.7}) {
    const double direct = success(family_states(g, family, 4, w), e).s;
    CHECK(direct == doctest::Approx(success_from_character(w, s_vc, 3)).epsilon(1e-12));
  }
}

TEST_CASE("conjugate family optimum has the advertised closed values") {
  const GroupTable g = GroupTable::symmetric(3);
  const IrrepSet s = irrep_set(g);
  const Subgroup h = subgroup_closure(g, std::vector<int>{2});

  CHECK(conjugate_optimum(g, h, 3, 0.0, s) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // the zero-weight value decays toward the large-d limit
  double prev = conjugate_optimum(g, h, 3, 0.0, s);
  for (int d = 4; d <= 40; ++d) {
    const double cur = conjugate_optimum(g, h, d, 0.0, s);
    CHECK(cur < prev + 1e-15);
    prev = cur;
  }
  CHECK(conjugate_optimum(g, h, 4000, 0.0, s) ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-3));

  // at the standard slate weight 1/d the dimension drops out entirely
  for (int d : {3, 4, 7, 50})
    CHECK(conjugate_optimum(g, h, d, 1.0 / d, s) ==
          doctest::Approx(5.0 / 9.0).epsilon(1e-12));

  // a normal subgroup is identified perfectly at zero weight
  const Subgroup a3 = subgroup_closure(g, std::vector<int>{3});
  for (int d : {2, 3, 10})
    CHECK(conjugate_optimum(g, a3, d, 0.0, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("povm text round trip preserves elements and validates on load") {
  std::mt19937_64 rng(29);
  const Povm e = random_povm(4, 3, rng);
  std::stringstream buf;
  save_povm(buf, e);
  const Povm loaded = load_povm(buf);
  REQUIRE(loaded.outcomes() == 3);
  for (int k = 0; k < 3; ++k) CHECK(max_abs(loaded.elements[k] - e.elements[k]) < 1e-16);

  std::stringstream broken("povm 2 2\nelement 0\n1 0 0 0\n0 0 1 0\nelement 1\n1 0 0 0\n0 0 1 0\n");
  CHECK_THROWS_AS(load_povm(broken), Error);
}

TEST_CASE("random povms are valid for a spread of shapes") {
  std::mt19937_64 rng(31);
  for (int dim : {2, 5})
    for (int k : {1, 2, 6}) {
      const Povm e = random_povm(dim, k, rng);
      CHECK(e.outcomes() == k);
      validate_povm(e);
    }
}

TEST_CASE("conjugate optimum matches the brute pgm at arbitrary slate weights") {
  const GroupTable g = GroupTable::symmetric(3);
  const IrrepSet s = irrep_set(g);
  const Subgroup h = subgroup_closure(g, std::vector<int>{2});
  const SubgroupFamily family = conjugacy_family(g, h);
  const std::vector<double> priors(3, 1.0 / 3);

  for (int d : {3, 5}) {
    // the measurement built from the zero-weight states is optimal for every
    // weight, so its success curve must trace the closed formula exactly
    const Povm e = pgm(family_states(g, family, d, 0.0), priors);
    for (double w : {0.0, 1.0 / d, 0.41, 0.9}) {
      const double direct = success(family_states(g, family, d, w), e).s;
      CHECK(direct == doctest::Approx(conjugate_optimum(g, h, d, w, s)).epsilon(1e-9));
    }
  }
}
