#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hsplab/group.hpp"
#include "hsplab/irreps.hpp"
#include "hsplab/linalg.hpp"

namespace hsplab {

// Finite abelian response space X = Z/m_1 x ... x Z/m_r with every modulus a
// prime power >= 2. Elements are mixed-radix indices, first factor least
// significant.
class ResponseSpace {
 public:
  explicit ResponseSpace(std::vector<int> moduli);

  int size() const { return d_; }
  const std::vector<int>& moduli() const { return moduli_; }
  int digit(int x, int j) const { return (x / radix_[j]) % moduli_[j]; }
  int add(int a, int b) const;
  int subtract(int a, int b) const;
  // The bicharacter omega^{y.x} = prod_j exp(2 pi i y_j x_j / m_j).
  Complex character(int y, int x) const;

 private:
  std::vector<int> moduli_;
  std::vector<int> radix_;
  int d_ = 1;
  std::vector<std::vector<Complex>> roots_;  // per factor: all m_j-th roots of unity
};

// A unit vector of query amplitudes over the response space. Custom inputs
// are renormalized when off unit norm by at most 1e-6 (renormalized flags a
// deviation beyond 1e-9); larger deviations are rejected.
struct Slate {
  ResponseSpace space;
  Vector amplitudes;
  bool renormalized = false;
  std::string tag;
};

enum class SlateKind { Standard, Character, Constant };

Slate make_slate(const ResponseSpace& x, SlateKind kind);
Slate make_slate(const ResponseSpace& x, const Vector& custom, std::string tag = "custom");
Slate random_slate(const ResponseSpace& x, std::mt19937_64& rng);

// Fourier-side amplitudes of a slate and the weight of its y = 0 component.
struct Betas {
  Vector values;
  double beta0_sq = 0;
};

Betas slate_betas(const Slate& v);

// A hiding function: an injection gamma from coset slots into the response
// space, tagged with the subgroup-family index it hides.
struct OracleFunction {
  int k = 0;
  std::vector<int> gamma;
};

inline constexpr std::int64_t kFullEnumerationCap = 1'000'000;

// Number of injections from an n-slot domain into a d-point codomain,
// saturating at kFullEnumerationCap + 1.
std::int64_t injection_count(int d, int n);

struct SampleSpec {
  std::int64_t count = 0;
  std::uint64_t seed = 0;
};

// Streams injections gamma : slots -> X. Full mode walks all of them in
// lexicographic order and refuses domains past the cap; sample mode draws
// uniform injections reproducibly from the seed.
class OracleEnumerator {
 public:
  static OracleEnumerator full(int d, int n);
  static OracleEnumerator sample(int d, int n, SampleSpec spec);

  // Fills gamma with the next injection; false when exhausted.
  bool next(std::vector<int>& gamma);
  std::int64_t total() const { return total_; }

 private:
  OracleEnumerator() = default;
  int d_ = 0;
  int n_ = 0;
  bool sampling_ = false;
  std::int64_t total_ = 0;
  std::int64_t emitted_ = 0;
  std::vector<int> current_;
  std::vector<char> used_;
  std::mt19937_64 rng_;
  std::vector<int> pool_;
};

using Density = Matrix;

// Throws unless rho is Hermitian, PSD, and unit trace within tol.
void check_density(const Density& rho, double tol = 1e-10);

// State of the group register after one query against the oracle gamma:
// assembled in the coset basis from the slate's Fourier weights, then
// expanded to the group basis.
Density query_register_state(const GroupTable& g, const CosetList& cosets,
                             std::span<const int> gamma, const Slate& v);

// Average of query_register_state over oracle functions: the full ensemble
// by default, or a seeded uniform sample.
Density subgroup_state_average(const GroupTable& g, const CosetList& cosets,
                               const Slate& v,
                               std::optional<SampleSpec> sample = {});

// Closed-form subgroup state: the right convolution operator of the mixture
// of the flat function with the H-supported kernel at weight |beta_0|^2.
Density subgroup_state_closed(const GroupTable& g, const Subgroup& h, int d,
                              double beta0_sq);

// Fourier blocks of the zero-weight (character-query) subgroup state:
// a scalar (D - N)/((D - 1) N) on the trivial irrep and
// D/((D - 1) N) times the H-invariant projector elsewhere.
FourierBlocks subgroup_state_blocks(const IrrepSet& s, const Subgroup& h, int d);

// Same, mixed with the flat state at weight beta0_sq.
FourierBlocks slate_state_blocks(const IrrepSet& s, const Subgroup& h, int d,
                                 double beta0_sq);

}  // namespace hsplab
