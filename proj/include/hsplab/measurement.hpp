#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hsplab/group.hpp"
#include "hsplab/irreps.hpp"
#include "hsplab/states.hpp"

namespace hsplab {

struct Povm {
  std::vector<Matrix> elements;
  int outcomes() const { return static_cast<int>(elements.size()); }
  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
};

// Throws unless every element is Hermitian PSD and the elements sum to the
// identity, all within tol.
void validate_povm(const Povm& e, double tol = 1e-9);

// A POVM stored per Fourier block: elements[k][lambda] is the block of
// outcome k at irrep lambda. Per lambda the blocks must sum to the identity.
struct BlockPovm {
  std::vector<std::vector<Matrix>> elements;
  int outcomes() const { return static_cast<int>(elements.size()); }
};

void validate_block_povm(const BlockPovm& e, double tol = 1e-9);

// Pretty Good Measurement for the given states and priors: each element is
// p_k sigma^{-1/2} rho_k sigma^{-1/2} on the image of the average state
// sigma, completed by an equal share of the kernel projector.
Povm pgm(const std::vector<Density>& states, const std::vector<double>& priors);

// Blockwise PGM for the character-query states of a subgroup family,
// assembled per irrep from the closed-form Fourier blocks.
BlockPovm pgm_blocks(const IrrepSet& s, const SubgroupFamily& family, int d);

// Group average E_k -> (1/|G|) sum_z L(z) E_k L(z)†.
Povm povm_twirl(const GroupTable& g, const Povm& e);

// K copies of I/K: ignores the state and guesses uniformly.
Povm trivial_povm(int dim, int k);

struct SuccessReport {
  double s = 0;
  // conditional(k, k'): probability of outcome k' given the state of family
  // member k. Rows sum to one.
  Eigen::MatrixXd conditional;
  std::string slate_tag;
  std::string measurement_tag;
  // When set, s is only a lower bound on the optimal success probability;
  // cleared for the trivial measurement and for the conjugate-family PGM,
  // whose values are exact.
  bool is_lower_bound = true;
};

// Throws if the report's internal consistency invariants fail.
void check_success_report(const SuccessReport& r, double tol = 1e-9);

SuccessReport success(const std::vector<Density>& states, const Povm& e,
                      std::string slate_tag = {}, std::string measurement_tag = {},
                      bool known_optimal = false);

SuccessReport success_blocks(const IrrepSet& s, const std::vector<FourierBlocks>& states,
                             const BlockPovm& e, std::string slate_tag = {},
                             std::string measurement_tag = {}, bool known_optimal = false);

// Success probability of any slate from the character-query value of the
// same measurement: beta0_sq / K + (1 - beta0_sq) s_vc.
double success_from_character(double beta0_sq, double s_vc, int k);

// Optimal success probability for the conjugacy family of H at response
// dimension d and slate weight beta0_sq, from the normalizer index and the
// Plancherel mass of the irreps with H-invariant vectors.
double conjugate_optimum(const GroupTable& g, const Subgroup& h, int d,
                         double beta0_sq, const IrrepSet& s);

// Closed-form states of every family member at the same slate weight.
std::vector<Density> family_states(const GroupTable& g, const SubgroupFamily& family,
                                   int d, double beta0_sq);

std::vector<FourierBlocks> family_state_blocks(const IrrepSet& s,
                                               const SubgroupFamily& family, int d,
                                               double beta0_sq);

// Random POVM with k outcomes: Gram matrices of Gaussian blocks, normalized
// through the inverse square root of their sum.
Povm random_povm(int dim, int k, std::mt19937_64& rng);

// Plain-text exchange format (17 significant digits); load validates.
void save_povm(std::ostream& out, const Povm& e);
Povm load_povm(std::istream& in);

}  // namespace hsplab
