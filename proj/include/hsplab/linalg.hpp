#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace hsplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

double max_abs(const Matrix& m);

// (m + m†)/2; used before eigendecompositions to strip accumulated
// anti-Hermitian rounding noise.
Matrix hermitize(const Matrix& m);

double hermiticity_defect(const Matrix& m);

double min_eigenvalue(const Matrix& m);

// Inverse square root of a PSD matrix. Eigenvalues at or below
// rel_cutoff * max(lambda_max, 1) count as kernel and map to 1, so the result acts
// as the pseudo-inverse square root on the image and as the identity on the
// kernel. kernel_proj, when non-null, receives the kernel projector.
Matrix inv_sqrt_psd(const Matrix& m, double rel_cutoff, Matrix* kernel_proj = nullptr);

// Uniform draw from [0, range) by rejection; unbiased and reproducible for a
// fixed mt19937_64 stream.
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t range);

Complex gaussian(std::mt19937_64& rng);

Matrix random_hermitian(int n, std::mt19937_64& rng);

// Shortest exact decimal form used by every serializer (17 significant
// digits round-trip doubles exactly).
std::string fmt17(double x);

}  // namespace hsplab
