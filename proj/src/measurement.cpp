#include "hsplab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace hsplab {

namespace {

constexpr double kKernelCutoff = 1e-12;  // relative eigenvalue cutoff

void require_square_same_dim(const std::vector<Matrix>& mats) {
  if (mats.empty()) throw Error("POVM must have at least one element");
  const Eigen::Index dim = mats[0].rows();
  for (const Matrix& m : mats)
    if (m.rows() != dim || m.cols() != dim)
      throw Error("POVM elements must be square with a common dimension");
}

// Real trace of a product of Hermitian factors without forming the product.
double trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace

void validate_povm(const Povm& e, double tol) {
  require_square_same_dim(e.elements);
  const int dim = e.dim();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& m : e.elements) {
    if (hermiticity_defect(m) > tol)
      throw Error("POVM element is not Hermitian");
    if (min_eigenvalue(m) < -tol)
      throw Error("POVM element has a negative eigenvalue");
    sum += m;
  }
  if (max_abs(sum - Matrix::Identity(dim, dim)) > tol)
    throw Error("POVM elements do not sum to the identity");
}

void validate_block_povm(const BlockPovm& e, double tol) {
  if (e.elements.empty()) throw Error("POVM must have at least one element");
  const std::size_t blocks = e.elements[0].size();
  for (const auto& outcome : e.elements)
    if (outcome.size() != blocks)
      throw Error("block POVM outcomes must share the block structure");
  for (std::size_t l = 0; l < blocks; ++l) {
    const Eigen::Index dim = e.elements[0][l].rows();
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& outcome : e.elements) {
      const Matrix& m = outcome[l];
      if (m.rows() != dim || m.cols() != dim)
        throw Error("block POVM blocks must agree in shape");
      if (hermiticity_defect(m) > tol)
        throw Error("block POVM element is not Hermitian");
      if (min_eigenvalue(m) < -tol)
        throw Error("block POVM element has a negative eigenvalue");
      sum += m;
    }
    if (max_abs(sum - Matrix::Identity(dim, dim)) > tol)
      throw Error("block POVM blocks do not sum to the identity");
  }
}

Povm pgm(const std::vector<Density>& states, const std::vector<double>& priors) {
  require_square_same_dim(states);
  if (states.size() != priors.size())
    throw Error("need exactly one prior per state");
  double total = 0;
  for (double p : priors) {
    if (p < 0) throw Error("priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("priors must sum to one");

  const int dim = static_cast<int>(states[0].rows());
  Matrix avg = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < states.size(); ++k) avg += priors[k] * states[k];
  Matrix kernel;
  const Matrix isq = inv_sqrt_psd(avg, kKernelCutoff, &kernel);
  const double share = 1.0 / double(states.size());
  Povm e;
  e.elements.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    e.elements.push_back(
        hermitize(priors[k] * isq * states[k] * isq + share * kernel));
  return e;
}

BlockPovm pgm_blocks(const IrrepSet& s, const SubgroupFamily& family, int d) {
  if (family.size() < 1) throw Error("family must be nonempty");
  const int k = family.size();
  std::vector<FourierBlocks> states;
  states.reserve(k);
  for (const Subgroup& h : family.members)
    states.push_back(subgroup_state_blocks(s, h, d));

  BlockPovm e;
  e.elements.assign(k, {});
  const std::size_t blocks = states[0].blocks.size();
  for (std::size_t l = 0; l < blocks; ++l) {
    const Eigen::Index dim = states[0].blocks[l].rows();
    Matrix avg = Matrix::Zero(dim, dim);
    for (int i = 0; i < k; ++i) avg += states[i].blocks[l];
    avg /= double(k);
    Matrix kernel;
    const Matrix isq = inv_sqrt_psd(avg, kKernelCutoff, &kernel);
    for (int i = 0; i < k; ++i)
      e.elements[i].push_back(hermitize(
          (isq * states[i].blocks[l] * isq + kernel) / double(k)));
  }
  return e;
}

Povm povm_twirl(const GroupTable& g, const Povm& e) {
  require_square_same_dim(e.elements);
  const int n = g.order();
  if (e.dim() != n) throw Error("POVM dimension does not match the group order");
  Povm out;
  out.elements.reserve(e.elements.size());
  for (const Matrix& m : e.elements) {
    Matrix t = Matrix::Zero(n, n);
    // (L(z) m L(z)†)(u, v) = m(z^{-1} u, z^{-1} v)
    for (int z = 0; z < n; ++z) {
      const int zi = g.inv(z);
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) t(u, v) += m(g.mul(zi, u), g.mul(zi, v));
    }
    out.elements.push_back(t / double(n));
  }
  return out;
}

Povm trivial_povm(int dim, int k) {
  if (dim < 1 || k < 1) throw Error("trivial POVM needs positive dimension and outcomes");
  Povm e;
  e.elements.assign(k, Matrix::Identity(dim, dim) / double(k));
  return e;
}

void check_success_report(const SuccessReport& r, double tol) {
  const Eigen::Index k = r.conditional.rows();
  if (r.conditional.cols() != k) throw Error("conditional matrix must be square");
  double diag = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double row = r.conditional.row(i).sum();
    if (std::abs(row - 1.0) > tol)
      throw Error("conditional row sums deviate from one");
    for (Eigen::Index j = 0; j < k; ++j)
      if (r.conditional(i, j) < -tol)
        throw Error("conditional probabilities must be nonnegative");
    diag += r.conditional(i, i);
  }
  if (std::abs(r.s - diag / double(k)) > 1e-12)
    throw Error("success value does not match the conditional diagonal");
}

namespace {

SuccessReport finish_report(Eigen::MatrixXd conditional, std::string slate_tag,
                            std::string measurement_tag, bool known_optimal) {
  SuccessReport r;
  r.conditional = std::move(conditional);
  double diag = 0;
  for (Eigen::Index i = 0; i < r.conditional.rows(); ++i) diag += r.conditional(i, i);
  r.s = diag / double(r.conditional.rows());
  r.slate_tag = std::move(slate_tag);
  r.measurement_tag = std::move(measurement_tag);
  r.is_lower_bound = !known_optimal;
  return r;
}

}  // namespace

SuccessReport success(const std::vector<Density>& states, const Povm& e,
                      std::string slate_tag, std::string measurement_tag,
                      bool known_optimal) {
  require_square_same_dim(states);
  if (static_cast<int>(states.size()) != e.outcomes())
    throw Error("need exactly one POVM outcome per family member");
  if (e.dim() != states[0].rows())
    throw Error("POVM dimension does not match the states");
  const int k = static_cast<int>(states.size());
  Eigen::MatrixXd conditional(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      conditional(i, j) = trace_product(e.elements[j], states[i]);
  return finish_report(std::move(conditional), std::move(slate_tag),
                       std::move(measurement_tag), known_optimal);
}

SuccessReport success_blocks(const IrrepSet& s, const std::vector<FourierBlocks>& states,
                             const BlockPovm& e, std::string slate_tag,
                             std::string measurement_tag, bool known_optimal) {
  if (states.empty()) throw Error("need at least one state");
  if (static_cast<int>(states.size()) != e.outcomes())
    throw Error("need exactly one POVM outcome per family member");
  const int k = static_cast<int>(states.size());
  const std::size_t blocks = s.irreps().size();
  Eigen::MatrixXd conditional = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    if (states[i].blocks.size() != blocks)
      throw Error("state blocks do not match the irrep set");
    for (int j = 0; j < k; ++j) {
      if (e.elements[j].size() != blocks)
        throw Error("POVM blocks do not match the irrep set");
      double acc = 0;
      for (std::size_t l = 0; l < blocks; ++l)
        acc += s.irreps()[l].dim * trace_product(e.elements[j][l], states[i].blocks[l]);
      conditional(i, j) = acc;
    }
  }
  return finish_report(std::move(conditional), std::move(slate_tag),
                       std::move(measurement_tag), known_optimal);
}

double success_from_character(double beta0_sq, double s_vc, int k) {
  if (k < 1) throw Error("family size must be positive");
  if (beta0_sq < -1e-12 || beta0_sq > 1.0 + 1e-12)
    throw Error("beta0_sq outside [0, 1]");
  beta0_sq = std::clamp(beta0_sq, 0.0, 1.0);
  return beta0_sq / double(k) + (1.0 - beta0_sq) * s_vc;
}

double conjugate_optimum(const GroupTable& g, const Subgroup& h, int d,
                         double beta0_sq, const IrrepSet& s) {
  if (&h.parent() != &g) throw Error("subgroup does not belong to this group table");
  if (&s.group() != &g) throw Error("irrep set does not belong to this group table");
  if (d < 2) throw Error("response dimension must be at least 2");
  if (d < h.index()) throw Error("response dimension smaller than the subgroup index");
  if (beta0_sq < -1e-12 || beta0_sq > 1.0 + 1e-12)
    throw Error("beta0_sq outside [0, 1]");
  beta0_sq = std::clamp(beta0_sq, 0.0, 1.0);
  const double nc = double(g.order()) / normalizer(g, h).order();
  const double mass = lambda_support(s, h).plancherel_mass;
  const double dd = double(d);
  return (beta0_sq - (1.0 - beta0_sq) / (dd - 1.0)) / nc +
         (1.0 - beta0_sq) * (dd / (dd - 1.0)) * (h.order() / nc) * mass;
}

std::vector<Density> family_states(const GroupTable& g, const SubgroupFamily& family,
                                   int d, double beta0_sq) {
  std::vector<Density> states;
  states.reserve(family.members.size());
  for (const Subgroup& h : family.members)
    states.push_back(subgroup_state_closed(g, h, d, beta0_sq));
  return states;
}

std::vector<FourierBlocks> family_state_blocks(const IrrepSet& s,
                                               const SubgroupFamily& family, int d,
                                               double beta0_sq) {
  std::vector<FourierBlocks> states;
  states.reserve(family.members.size());
  for (const Subgroup& h : family.members)
    states.push_back(slate_state_blocks(s, h, d, beta0_sq));
  return states;
}

Povm random_povm(int dim, int k, std::mt19937_64& rng) {
  if (dim < 1 || k < 1) throw Error("random POVM needs positive dimension and outcomes");
  std::vector<Matrix> grams;
  grams.reserve(k);
  Matrix sum = Matrix::Zero(dim, dim);
  for (int i = 0; i < k; ++i) {
    Matrix b(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) b(r, c) = gaussian(rng);
    Matrix gram = b * b.adjoint();
    sum += gram;
    grams.push_back(std::move(gram));
  }
  Matrix kernel;
  const Matrix isq = inv_sqrt_psd(sum, kKernelCutoff, &kernel);
  Povm e;
  e.elements.reserve(k);
  for (const Matrix& gram : grams)
    e.elements.push_back(hermitize(isq * gram * isq + kernel / double(k)));
  return e;
}

void save_povm(std::ostream& out, const Povm& e) {
  require_square_same_dim(e.elements);
  out << "povm " << e.dim() << ' ' << e.outcomes() << '\n';
  for (int k = 0; k < e.outcomes(); ++k) {
    out << "element " << k << '\n';
    const Matrix& m = e.elements[k];
    for (int i = 0; i < e.dim(); ++i) {
      for (int j = 0; j < e.dim(); ++j)
        out << (j ? " " : "") << fmt17(m(i, j).real()) << ' ' << fmt17(m(i, j).imag());
      out << '\n';
    }
  }
}

Povm load_povm(std::istream& in) {
  std::string word;
  int dim = 0, count = 0;
  if (!(in >> word >> dim >> count) || word != "povm" || dim < 1 || count < 1)
    throw Error("POVM file: bad header");
  Povm e;
  e.elements.reserve(count);
  for (int k = 0; k < count; ++k) {
    int label = -1;
    if (!(in >> word >> label) || word != "element" || label != k)
      throw Error("POVM file: bad element header");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double re = 0, im = 0;
        if (!(in >> re >> im)) throw Error("POVM file: truncated matrix data");
        m(i, j) = Complex(re, im);
      }
    e.elements.push_back(std::move(m));
  }
  validate_povm(e);
  return e;
}

}  // namespace hsplab
