#include "hsplab/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

namespace hsplab {

namespace {

constexpr double kCertifyTol = 1e-7;     // off-orthonormality that fails a build
constexpr double kCharMatchTol = 1e-6;   // character equality for dedupe
constexpr double kCharOrderTol = 1e-8;   // tie tolerance in the canonical sort

Vector character_of(const std::vector<Matrix>& mats) {
  Vector chi(static_cast<Eigen::Index>(mats.size()));
  for (std::size_t g = 0; g < mats.size(); ++g) chi[static_cast<Eigen::Index>(g)] = mats[g].trace();
  return chi;
}

bool char_equal(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() < kCharMatchTol;
}

bool char_lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double dre = a[i].real() - b[i].real();
    if (std::abs(dre) > kCharOrderTol) return dre < 0;
    const double dim = a[i].imag() - b[i].imag();
    if (std::abs(dim) > kCharOrderTol) return dim < 0;
  }
  return false;
}

bool is_trivial_char(const Vector& chi) {
  for (Eigen::Index i = 0; i < chi.size(); ++i)
    if (std::abs(chi[i] - Complex(1.0, 0.0)) > kCharMatchTol) return false;
  return true;
}

// Characters of an abelian group, built by extending along a chain of cyclic
// steps: adjoin the lowest missing element a with a^m the first power inside
// the current subgroup, and extend every character by each m-th root of its
// value at a^m. Values stay exact roots of unity.
std::vector<Vector> abelian_characters(const GroupTable& g) {
  const int n = g.order();
  std::vector<int> members{g.identity()};
  std::vector<int> slot(n, -1);
  slot[g.identity()] = 0;
  std::vector<std::vector<Complex>> chars{{Complex(1.0, 0.0)}};

  while (static_cast<int>(members.size()) < n) {
    int a = 0;
    while (slot[a] >= 0) ++a;
    int m = 1;
    int p = a;
    while (slot[p] < 0) {
      p = g.mul(p, a);
      ++m;
    }
    // members gains the blocks S·a^j for j = 1..m-1
    const std::vector<int> base = members;
    int power = g.identity();
    for (int j = 1; j < m; ++j) {
      power = g.mul(power, a);
      for (int s : base) {
        const int e = g.mul(s, power);
        slot[e] = static_cast<int>(members.size());
        members.push_back(e);
      }
    }
    const int anchor = slot[p];  // position of a^m in the old ordering
    std::vector<std::vector<Complex>> extended;
    extended.reserve(chars.size() * static_cast<std::size_t>(m));
    for (const auto& chi : chars) {
      const Complex w = chi[anchor];
      const double base_arg = std::arg(w) / m;
      for (int t = 0; t < m; ++t) {
        const Complex zeta =
            std::polar(1.0, base_arg + 2.0 * std::numbers::pi * t / m);
        std::vector<Complex> ext(members.size());
        Complex zp(1.0, 0.0);
        for (int j = 0; j < m; ++j) {
          for (std::size_t i = 0; i < base.size(); ++i)
            ext[j * base.size() + i] = chi[i] * zp;
          zp *= zeta;
        }
        extended.push_back(std::move(ext));
      }
    }
    chars = std::move(extended);
  }

  std::vector<Vector> out;
  out.reserve(chars.size());
  for (const auto& chi : chars) {
    Vector v(n);
    for (int e = 0; e < n; ++e) v[e] = chi[slot[e]];
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Irrep> abelian_irreps(const GroupTable& g) {
  std::vector<Irrep> out;
  for (const Vector& chi : abelian_characters(g)) {
    Irrep r;
    r.dim = 1;
    r.mats.reserve(g.order());
    for (int e = 0; e < g.order(); ++e) {
      Matrix m(1, 1);
      m(0, 0) = chi[e];
      r.mats.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Standard closed forms for dihedral groups of order 2n, n >= 3, in the
// element convention of GroupTable::dihedral.
std::vector<Irrep> dihedral_irreps(const GroupTable& g) {
  const int n = g.kind_param();
  const int order = 2 * n;
  std::vector<Irrep> out;

  auto one_dim = [&](int eps_r, int eps_s) {
    Irrep r;
    r.dim = 1;
    r.mats.reserve(order);
    for (int e = 0; e < order; ++e) {
      const bool refl = e >= n;
      const int a = refl ? e - n : e;
      double v = (eps_r < 0 && (a % 2)) ? -1.0 : 1.0;
      if (refl && eps_s < 0) v = -v;
      Matrix m(1, 1);
      m(0, 0) = Complex(v, 0.0);
      r.mats.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  };

  one_dim(1, 1);
  one_dim(1, -1);
  if (n % 2 == 0) {
    one_dim(-1, 1);
    one_dim(-1, -1);
  }

  const int jmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int j = 1; j <= jmax; ++j) {
    Irrep r;
    r.dim = 2;
    r.mats.reserve(order);
    for (int e = 0; e < order; ++e) {
      const bool refl = e >= n;
      const int a = refl ? e - n : e;
      const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * j * a / n);
      Matrix m = Matrix::Zero(2, 2);
      if (!refl) {
        m(0, 0) = w;
        m(1, 1) = std::conj(w);
      } else {
        m(0, 1) = w;
        m(1, 0) = std::conj(w);
      }
      r.mats.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<int, int>> cluster_ranges(const Eigen::VectorXd& vals, double tol) {
  std::vector<std::pair<int, int>> ranges;
  int start = 0;
  for (int i = 1; i < vals.size(); ++i) {
    if (vals[i] - vals[i - 1] > tol) {
      ranges.emplace_back(start, i - start);
      start = i;
    }
  }
  ranges.emplace_back(start, static_cast<int>(vals.size()) - start);
  return ranges;
}

// Representation matrices of the right regular action restricted to the
// column span of u: m_z = u† R(z) u, with R(z) applied by row gather.
std::vector<Matrix> restricted_rep(const GroupTable& g, const Matrix& u) {
  const int n = g.order();
  const int d = static_cast<int>(u.cols());
  std::vector<Matrix> mats(n);
  Matrix ru(n, d);
  for (int z = 0; z < n; ++z) {
    for (int x = 0; x < n; ++x) ru.row(x) = u.row(g.mul(x, z));
    mats[z] = u.adjoint() * ru;
  }
  return mats;
}

// Splits an invariant subspace into irreducible pieces. The character-norm
// test decides irreducibility; otherwise a random commutant element
// (averaged Hermitian matrix) is eigen-split and each eigenspace recursed.
void split_irreducible(const GroupTable& g, const Matrix& u, std::mt19937_64& rng,
                       int depth, std::vector<Matrix>& out) {
  const int n = g.order();
  const int d = static_cast<int>(u.cols());
  const std::vector<Matrix> mats = restricted_rep(g, u);
  double chi_norm = 0;
  for (const Matrix& m : mats) chi_norm += std::norm(m.trace());
  chi_norm /= n;
  if (std::abs(chi_norm - 1.0) < 1e-6) {
    out.push_back(u);
    return;
  }
  if (depth >= 8)
    throw DecompositionError(
        "irrep decomposition did not converge; retry with a different seed");
  Matrix c = random_hermitian(d, rng);
  Matrix cbar = Matrix::Zero(d, d);
  for (const Matrix& m : mats) cbar += m * c * m.adjoint();
  cbar = hermitize(cbar / double(n));
  Eigen::SelfAdjointEigenSolver<Matrix> es(cbar);
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigendecomposition failed in irrep split");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (auto [lo, len] : cluster_ranges(es.eigenvalues(), 1e-7 * scale))
    split_irreducible(g, u * es.eigenvectors().middleCols(lo, len), rng, depth + 1, out);
}

std::vector<Irrep> numeric_irreps(const GroupTable& g, std::uint64_t seed) {
  const int n = g.order();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Matrix> bases;
  if (n == 1) {
    bases.push_back(Matrix::Ones(1, 1));
  } else {
    // Generic commutant element of the full regular representation;
    // conjugation by the permutation R(z) is an index shift.
    const Matrix a = random_hermitian(n, rng);
    Matrix b(n, n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        Complex acc(0.0, 0.0);
        for (int z = 0; z < n; ++z) acc += a(g.mul(u, z), g.mul(v, z));
        b(u, v) = acc / double(n);
      }
    b = hermitize(b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    if (es.info() != Eigen::Success)
      throw DecompositionError("eigendecomposition failed in irrep split");
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (auto [lo, len] : cluster_ranges(es.eigenvalues(), 1e-7 * scale))
      split_irreducible(g, es.eigenvectors().middleCols(lo, len), rng, 0, bases);
  }

  // One representative per equivalence class; characters identify classes.
  std::vector<Irrep> kept;
  std::vector<Vector> chars;
  for (const Matrix& u : bases) {
    Irrep r;
    r.dim = static_cast<int>(u.cols());
    r.mats = restricted_rep(g, u);
    const Vector chi = character_of(r.mats);
    bool seen = false;
    for (const Vector& known : chars)
      if (char_equal(chi, known)) {
        seen = true;
        break;
      }
    if (!seen) {
      chars.push_back(chi);
      kept.push_back(std::move(r));
    }
  }
  int dim_sq = 0;
  for (const Irrep& r : kept) dim_sq += r.dim * r.dim;
  if (dim_sq != n)
    throw DecompositionError(
        "irrep decomposition found an incomplete set; retry with a different seed");
  return kept;
}

void canonical_sort(std::vector<Irrep>& irreps) {
  std::vector<Vector> chars;
  chars.reserve(irreps.size());
  for (const Irrep& r : irreps) chars.push_back(r.character());
  std::vector<int> order(irreps.size());
  for (std::size_t i = 0; i < irreps.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const bool ta = is_trivial_char(chars[a]);
    const bool tb = is_trivial_char(chars[b]);
    if (ta != tb) return ta;
    if (irreps[a].dim != irreps[b].dim) return irreps[a].dim < irreps[b].dim;
    return char_lex_less(chars[a], chars[b]);
  });
  std::vector<Irrep> sorted;
  sorted.reserve(irreps.size());
  for (int i : order) sorted.push_back(std::move(irreps[i]));
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i].label = static_cast<int>(i);
  irreps = std::move(sorted);
}

}  // namespace

Vector Irrep::character() const { return character_of(mats); }

IrrepSet::IrrepSet(const GroupTable& g, std::vector<Irrep> irreps)
    : group_(&g), irreps_(std::move(irreps)) {
  if (irreps_.empty()) throw Error("irrep set must be nonempty");
  for (const Irrep& r : irreps_) {
    if (r.dim < 1) throw Error("irrep dimension must be positive");
    if (r.mats.size() != static_cast<std::size_t>(g.order()))
      throw Error("irrep must have one matrix per group element");
    for (const Matrix& m : r.mats)
      if (m.rows() != r.dim || m.cols() != r.dim)
        throw Error("irrep matrix has the wrong shape");
  }
  canonical_sort(irreps_);
  if (!is_trivial_char(irreps_.front().character()))
    throw Error("irrep set has no trivial representation");
}

IrrepSet irrep_set(const GroupTable& g, std::uint64_t seed) {
  std::vector<Irrep> irreps;
  if (g.abelian())
    irreps = abelian_irreps(g);
  else if (g.kind() == GroupTable::Kind::Dihedral)
    irreps = dihedral_irreps(g);
  else
    irreps = numeric_irreps(g, seed);

  IrrepSet s(g, std::move(irreps));
  int dim_sq = 0;
  for (const Irrep& r : s.irreps()) dim_sq += r.dim * r.dim;
  if (dim_sq != g.order())
    throw DecompositionError("irrep dimensions are inconsistent with the group order");
  const Matrix theta = coefficient_basis(s);
  const double defect =
      max_abs(theta.adjoint() * theta - Matrix::Identity(g.order(), g.order()));
  if (defect > kCertifyTol)
    throw DecompositionError("irrep set failed to certify (coefficient defect " +
                             fmt17(defect) + "); retry with a different seed");
  return s;
}

IrrepValidation verify_irrep_set(const IrrepSet& s) {
  const GroupTable& g = s.group();
  const int n = g.order();
  IrrepValidation v;
  for (const Irrep& r : s.irreps()) {
    v.dim_square_sum += r.dim * r.dim;
    const Matrix eye = Matrix::Identity(r.dim, r.dim);
    for (int z = 0; z < n; ++z) {
      v.unitarity_defect =
          std::max(v.unitarity_defect, max_abs(r.mats[z].adjoint() * r.mats[z] - eye));
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double d = max_abs(r.mats[a] * r.mats[b] - r.mats[g.mul(a, b)]);
        v.homomorphism_defect = std::max(v.homomorphism_defect, d);
      }
  }
  v.dims_ok = v.dim_square_sum == n;
  const Matrix theta = coefficient_basis(s);
  v.orthogonality_defect = max_abs(theta.adjoint() * theta - Matrix::Identity(n, n));
  return v;
}

FourierBlocks fourier_blocks(const IrrepSet& s, const Vector& phi) {
  if (phi.size() != s.group().order())
    throw Error("function length does not match the group order");
  FourierBlocks f;
  f.blocks.reserve(s.irreps().size());
  for (const Irrep& r : s.irreps()) {
    Matrix b = Matrix::Zero(r.dim, r.dim);
    for (int g = 0; g < s.group().order(); ++g) b += phi[g] * r.mats[g];
    f.blocks.push_back(std::move(b));
  }
  return f;
}

Vector inverse_fourier(const IrrepSet& s, const FourierBlocks& f) {
  const GroupTable& g = s.group();
  const int n = g.order();
  if (f.blocks.size() != s.irreps().size())
    throw Error("block count does not match the irrep count");
  Vector phi = Vector::Zero(n);
  for (std::size_t l = 0; l < f.blocks.size(); ++l) {
    const Irrep& r = s.irreps()[l];
    if (f.blocks[l].rows() != r.dim || f.blocks[l].cols() != r.dim)
      throw Error("block shape does not match the irrep dimension");
    for (int e = 0; e < n; ++e)
      phi[e] += double(r.dim) * (r.mats[g.inv(e)] * f.blocks[l]).trace();
  }
  return phi / double(n);
}

Matrix regular_rep(const GroupTable& g, const Vector& phi) {
  const int n = g.order();
  if (phi.size() != n) throw Error("function length does not match the group order");
  Matrix m(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) m(u, v) = phi[g.mul(g.inv(u), v)];
  return m;
}

Matrix left_regular_rep(const GroupTable& g, const Vector& phi) {
  const int n = g.order();
  if (phi.size() != n) throw Error("function length does not match the group order");
  Matrix m(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) m(u, v) = phi[g.mul(u, g.inv(v))];
  return m;
}

Matrix right_translation(const GroupTable& g, int z) {
  const int n = g.order();
  if (z < 0 || z >= n) throw Error("element index out of range");
  Matrix m = Matrix::Zero(n, n);
  for (int v = 0; v < n; ++v) m(g.mul(v, g.inv(z)), v) = 1.0;
  return m;
}

Matrix left_translation(const GroupTable& g, int z) {
  const int n = g.order();
  if (z < 0 || z >= n) throw Error("element index out of range");
  Matrix m = Matrix::Zero(n, n);
  for (int v = 0; v < n; ++v) m(g.mul(z, v), v) = 1.0;
  return m;
}

Matrix coefficient_basis(const IrrepSet& s) {
  const int n = s.group().order();
  Matrix theta(n, n);
  int col = 0;
  for (const Irrep& r : s.irreps()) {
    const double norm = std::sqrt(double(r.dim) / n);
    for (int i = 0; i < r.dim; ++i)
      for (int j = 0; j < r.dim; ++j) {
        for (int e = 0; e < n; ++e) theta(e, col) = norm * r.mats[e](i, j);
        ++col;
      }
  }
  return theta;
}

Matrix h_invariant_projector(const Irrep& rho, const Subgroup& h) {
  Matrix p = Matrix::Zero(rho.dim, rho.dim);
  for (int t : h.elements()) {
    if (t < 0 || t >= static_cast<int>(rho.mats.size()))
      throw Error("subgroup element out of range for this irrep");
    p += rho.mats[t];
  }
  return p / double(h.order());
}

LambdaSupport lambda_support(const IrrepSet& s, const Subgroup& h) {
  LambdaSupport out;
  for (const Irrep& r : s.irreps()) {
    if (max_abs(h_invariant_projector(r, h)) > 1e-9) {
      out.lambdas.push_back(r.label);
      out.plancherel_mass += double(r.dim) * r.dim / s.group().order();
    }
  }
  return out;
}

void save_irreps(std::ostream& out, const IrrepSet& s) {
  const int n = s.group().order();
  out << "irrepset " << n << ' ' << s.count() << '\n';
  for (const Irrep& r : s.irreps()) {
    out << "irrep " << r.label << ' ' << r.dim << '\n';
    for (int e = 0; e < n; ++e)
      for (int i = 0; i < r.dim; ++i) {
        for (int j = 0; j < r.dim; ++j) {
          const Complex v = r.mats[e](i, j);
          out << (j ? " " : "") << fmt17(v.real()) << ' ' << fmt17(v.imag());
        }
        out << '\n';
      }
  }
}

IrrepSet load_irreps(std::istream& in, const GroupTable& g) {
  std::string word;
  int n = 0, count = 0;
  if (!(in >> word >> n >> count) || word != "irrepset")
    throw Error("irrep file: bad header");
  if (n != g.order()) throw Error("irrep file: order does not match the group");
  if (count < 1) throw Error("irrep file: bad irrep count");
  std::vector<Irrep> irreps;
  for (int k = 0; k < count; ++k) {
    Irrep r;
    if (!(in >> word >> r.label >> r.dim) || word != "irrep" || r.dim < 1)
      throw Error("irrep file: bad irrep header");
    r.mats.assign(n, Matrix(r.dim, r.dim));
    for (int e = 0; e < n; ++e)
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) {
          double re = 0, im = 0;
          if (!(in >> re >> im)) throw Error("irrep file: truncated matrix data");
          r.mats[e](i, j) = Complex(re, im);
        }
    irreps.push_back(std::move(r));
  }
  IrrepSet s(g, std::move(irreps));
  const IrrepValidation v = verify_irrep_set(s);
  if (!v.pass(1e-9))
    throw Error("irrep file: set fails validation (unitarity " +
                fmt17(v.unitarity_defect) + ", homomorphism " +
                fmt17(v.homomorphism_defect) + ", orthogonality " +
                fmt17(v.orthogonality_defect) + ")");
  return s;
}

}  // namespace hsplab
