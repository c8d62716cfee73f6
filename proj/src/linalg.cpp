#include "hsplab/linalg.hpp"

#include <cstdio>

#include "hsplab/error.hpp"

namespace hsplab {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

Matrix inv_sqrt_psd(const Matrix& m, double rel_cutoff, Matrix* kernel_proj) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  // The unit floor keeps an all-noise matrix (lambda_max itself below the
  // working precision) from being inverted as if it carried signal.
  const double cutoff = rel_cutoff * std::max(1.0, vals.maxCoeff());
  Eigen::VectorXd inv(vals.size()), ker(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const bool in_kernel = vals[i] <= cutoff;
    inv[i] = in_kernel ? 1.0 : 1.0 / std::sqrt(vals[i]);
    ker[i] = in_kernel ? 1.0 : 0.0;
  }
  if (kernel_proj)
    *kernel_proj = vecs * ker.asDiagonal() * vecs.adjoint();
  return vecs * inv.asDiagonal() * vecs.adjoint();
}

std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t range) {
  if (range == 0) throw Error("bounded_rand: empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % range;
}

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return {re, im};
}

Matrix random_hermitian(int n, std::mt19937_64& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = gaussian(rng);
  return hermitize(m);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hsplab
