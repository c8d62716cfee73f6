#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hsplab/group.hpp"
#include "hsplab/linalg.hpp"

namespace hsplab {

// One unitary irreducible representation: a dim x dim unitary matrix per
// group element, indexed by element.
struct Irrep {
  int label = 0;
  int dim = 0;
  std::vector<Matrix> mats;
  Vector character() const;
};

// A complete set of pairwise inequivalent unitary irreps of a fixed group.
// Construction sorts canonically (trivial first, then ascending dimension,
// ties by character lexicographic order) and relabels by position, so
// irreps()[0] is always the trivial representation. The group must outlive
// the set.
class IrrepSet {
 public:
  IrrepSet(const GroupTable& g, std::vector<Irrep> irreps);

  const GroupTable& group() const { return *group_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  int count() const { return static_cast<int>(irreps_.size()); }
  const Irrep& at(int label) const { return irreps_.at(label); }

 private:
  const GroupTable* group_;
  std::vector<Irrep> irreps_;
};

// Builds the full irrep set. Abelian groups get exact characters, dihedral
// groups the standard one- and two-dimensional closed forms, everything else
// a seeded randomized isotypic decomposition of the regular representation
// (identical seed, identical output). Throws DecompositionError when the
// randomized route fails to certify; retry with a different seed.
IrrepSet irrep_set(const GroupTable& g, std::uint64_t seed = 0);

struct IrrepValidation {
  double unitarity_defect = 0;
  double homomorphism_defect = 0;
  double orthogonality_defect = 0;  // of the matrix-coefficient basis
  int dim_square_sum = 0;
  bool dims_ok = false;
  bool pass(double tol = 1e-9) const {
    return dims_ok && unitarity_defect <= tol && homomorphism_defect <= tol &&
           orthogonality_defect <= tol;
  }
};

IrrepValidation verify_irrep_set(const IrrepSet& s);

// Algebra-valued Fourier transform of a function on the group: one
// d_lambda x d_lambda block per irrep, blocks[lambda] = sum_g phi(g) pi(g).
struct FourierBlocks {
  std::vector<Matrix> blocks;
};

FourierBlocks fourier_blocks(const IrrepSet& s, const Vector& phi);
Vector inverse_fourier(const IrrepSet& s, const FourierBlocks& f);

// Right convolution operator R(phi) = sum_z phi(z) R(z) with
// R(z)|g> = |g z^{-1}>; left analogue uses L(z)|g> = |z g>.
Matrix regular_rep(const GroupTable& g, const Vector& phi);
Matrix left_regular_rep(const GroupTable& g, const Vector& phi);
Matrix right_translation(const GroupTable& g, int z);
Matrix left_translation(const GroupTable& g, int z);

// Unitary matrix of normalized matrix coefficients. Conjugating any
// regular_rep output by it gives a block-diagonal matrix carrying d_lambda
// consecutive copies of each Fourier block.
Matrix coefficient_basis(const IrrepSet& s);

// Average of pi over the subgroup: the orthogonal projector onto the
// H-invariant vectors of the irrep.
Matrix h_invariant_projector(const Irrep& rho, const Subgroup& h);

// Irreps whose H-invariant projector is nonzero, plus their total Plancherel
// mass sum d_lambda^2 / |G|.
struct LambdaSupport {
  std::vector<int> lambdas;
  double plancherel_mass = 0;
};

LambdaSupport lambda_support(const IrrepSet& s, const Subgroup& h);

// Plain-text exchange format (17 significant digits); load validates the
// full set of irrep-set invariants and throws on defects.
void save_irreps(std::ostream& out, const IrrepSet& s);
IrrepSet load_irreps(std::istream& in, const GroupTable& g);

}  // namespace hsplab
