#include "hsplab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hsplab {

namespace {

constexpr int kMaxResponseDim = 1'000'000;

bool is_prime_power(int m) {
  if (m < 2) return false;
  int p = 2;
  while (p * p <= m && m % p != 0) ++p;
  if (p * p > m) return true;  // prime
  while (m % p == 0) m /= p;
  return m == 1;
}

}  // namespace

ResponseSpace::ResponseSpace(std::vector<int> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw Error("response space needs at least one modulus");
  radix_.reserve(moduli_.size());
  for (int m : moduli_) {
    if (!is_prime_power(m))
      throw Error("response space modulus " + std::to_string(m) +
                  " is not a prime power >= 2");
    radix_.push_back(d_);
    if (static_cast<long long>(d_) * m > kMaxResponseDim)
      throw Error("response space dimension exceeds the cap");
    d_ *= m;
  }
  roots_.reserve(moduli_.size());
  for (int m : moduli_) {
    std::vector<Complex> r(m);
    for (int t = 0; t < m; ++t)
      r[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / m);
    roots_.push_back(std::move(r));
  }
}

int ResponseSpace::add(int a, int b) const {
  int out = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j)
    out += ((digit(a, j) + digit(b, j)) % moduli_[j]) * radix_[j];
  return out;
}

int ResponseSpace::subtract(int a, int b) const {
  int out = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j)
    out += ((digit(a, j) - digit(b, j) + moduli_[j]) % moduli_[j]) * radix_[j];
  return out;
}

Complex ResponseSpace::character(int y, int x) const {
  Complex w(1.0, 0.0);
  for (std::size_t j = 0; j < moduli_.size(); ++j)
    w *= roots_[j][(digit(y, j) * digit(x, j)) % moduli_[j]];
  return w;
}

Slate make_slate(const ResponseSpace& x, SlateKind kind) {
  const int d = x.size();
  Vector amp(d);
  switch (kind) {
    case SlateKind::Standard:
      amp.setZero();
      amp[0] = 1.0;
      return {x, std::move(amp), false, "standard"};
    case SlateKind::Character: {
      // Fourier vector at y = (1, 0, ..., 0), which has index 1.
      const double norm = 1.0 / std::sqrt(double(d));
      for (int e = 0; e < d; ++e) amp[e] = norm * x.character(1, e);
      return {x, std::move(amp), false, "character"};
    }
    case SlateKind::Constant: {
      amp.setConstant(1.0 / std::sqrt(double(d)));
      return {x, std::move(amp), false, "constant"};
    }
  }
  throw Error("unknown slate kind");
}

Slate make_slate(const ResponseSpace& x, const Vector& custom, std::string tag) {
  if (custom.size() != x.size())
    throw Error("slate length does not match the response space dimension");
  const double norm = custom.norm();
  const double dev = std::abs(norm - 1.0);
  if (dev > 1e-6)
    throw Error("slate norm deviates from unit by " + fmt17(dev) +
                ", beyond the 1e-6 limit");
  Slate v{x, custom / norm, dev > 1e-9, std::move(tag)};
  return v;
}

Slate random_slate(const ResponseSpace& x, std::mt19937_64& rng) {
  Vector amp(x.size());
  double norm = 0;
  do {
    for (int e = 0; e < x.size(); ++e) amp[e] = gaussian(rng);
    norm = amp.norm();
  } while (norm == 0.0);
  return {x, amp / norm, false, "random"};
}

Betas slate_betas(const Slate& v) {
  const int d = v.space.size();
  Betas b;
  b.values.resize(d);
  const double norm = 1.0 / std::sqrt(double(d));
  for (int y = 0; y < d; ++y) {
    Complex acc(0.0, 0.0);
    for (int x = 0; x < d; ++x)
      acc += std::conj(v.space.character(y, x)) * v.amplitudes[x];
    b.values[y] = norm * acc;
  }
  b.beta0_sq = std::norm(b.values[0]);
  return b;
}

std::int64_t injection_count(int d, int n) {
  if (n > d) return 0;
  std::int64_t c = 1;
  for (int k = 0; k < n; ++k) {
    c *= (d - k);
    if (c > kFullEnumerationCap) return kFullEnumerationCap + 1;
  }
  return c;
}

OracleEnumerator OracleEnumerator::full(int d, int n) {
  if (n < 1 || n > d) throw Error("injection domain larger than codomain");
  const std::int64_t count = injection_count(d, n);
  if (count > kFullEnumerationCap)
    throw FeasibilityError("full oracle enumeration exceeds the cap of " +
                           std::to_string(kFullEnumerationCap) +
                           "; use sample mode");
  OracleEnumerator e;
  e.d_ = d;
  e.n_ = n;
  e.total_ = count;
  return e;
}

OracleEnumerator OracleEnumerator::sample(int d, int n, SampleSpec spec) {
  if (n < 1 || n > d) throw Error("injection domain larger than codomain");
  if (spec.count < 1) throw Error("sample count must be positive");
  OracleEnumerator e;
  e.d_ = d;
  e.n_ = n;
  e.sampling_ = true;
  e.total_ = spec.count;
  e.rng_.seed(spec.seed);
  e.pool_.resize(d);
  return e;
}

bool OracleEnumerator::next(std::vector<int>& gamma) {
  if (emitted_ >= total_) return false;
  if (sampling_) {
    // Partial Fisher-Yates: a uniform injection per draw.
    for (int i = 0; i < d_; ++i) pool_[i] = i;
    gamma.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const int j = i + static_cast<int>(bounded_rand(rng_, d_ - i));
      std::swap(pool_[i], pool_[j]);
      gamma[i] = pool_[i];
    }
    ++emitted_;
    return true;
  }
  if (emitted_ == 0) {
    current_.resize(n_);
    used_.assign(d_, 0);
    for (int i = 0; i < n_; ++i) {
      current_[i] = i;
      used_[i] = 1;
    }
  } else {
    // Lexicographic successor of the current injection.
    int pos = n_ - 1;
    while (pos >= 0) {
      used_[current_[pos]] = 0;
      int next = current_[pos] + 1;
      while (next < d_ && used_[next]) ++next;
      if (next < d_) {
        current_[pos] = next;
        used_[next] = 1;
        int fill = 0;
        for (int i = pos + 1; i < n_; ++i) {
          while (used_[fill]) ++fill;
          current_[i] = fill;
          used_[fill] = 1;
        }
        break;
      }
      --pos;
    }
    if (pos < 0) return false;  // unreachable while emitted_ < total_
  }
  gamma = current_;
  ++emitted_;
  return true;
}

void check_density(const Density& rho, double tol) {
  if (rho.rows() != rho.cols()) throw Error("density matrix must be square");
  const double herm = hermiticity_defect(rho);
  if (herm > tol)
    throw Error("density matrix is not Hermitian (defect " + fmt17(herm) + ")");
  const double min_eig = min_eigenvalue(rho);
  if (min_eig < -tol)
    throw Error("density matrix has a negative eigenvalue (" + fmt17(min_eig) + ")");
  const double tr_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
  if (tr_dev > tol)
    throw Error("density matrix trace deviates from one by " + fmt17(tr_dev));
}

namespace {

// Coset-basis weights w(x) = sum_y |beta_y|^2 omega^{-y.x}; the state entry
// for cosets c, c' is w(gamma_c - gamma_c') / N.
std::vector<Complex> slate_weights(const Slate& v) {
  const Betas b = slate_betas(v);
  const int d = v.space.size();
  std::vector<Complex> w(d, Complex(0.0, 0.0));
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      w[x] += std::norm(b.values[y]) * std::conj(v.space.character(y, x));
  return w;
}

void validate_gamma(const ResponseSpace& x, int n_cosets, std::span<const int> gamma) {
  if (static_cast<int>(gamma.size()) != n_cosets)
    throw Error("oracle function must assign one value per coset");
  std::vector<char> seen(x.size(), 0);
  for (int value : gamma) {
    if (value < 0 || value >= x.size())
      throw Error("oracle value outside the response space");
    if (seen[value]) throw Error("oracle function must be injective on cosets");
    seen[value] = 1;
  }
}

Matrix coset_weight_matrix(const ResponseSpace& x, const CosetList& cosets,
                           std::span<const int> gamma,
                           const std::vector<Complex>& weights) {
  const int n = cosets.index();
  Matrix w(n, n);
  for (int c = 0; c < n; ++c)
    for (int cc = 0; cc < n; ++cc)
      w(c, cc) = weights[x.subtract(gamma[c], gamma[cc])] / double(n);
  return w;
}

Density expand_to_group(const GroupTable& g, const CosetList& cosets, const Matrix& w) {
  const int n = g.order();
  const double scale = 1.0 / cosets.subgroup.order();
  Density rho(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      rho(u, v) = w(cosets.coset_of[u], cosets.coset_of[v]) * scale;
  return rho;
}

}  // namespace

Density query_register_state(const GroupTable& g, const CosetList& cosets,
                             std::span<const int> gamma, const Slate& v) {
  if (&cosets.subgroup.parent() != &g)
    throw Error("coset list does not belong to this group table");
  if (v.space.size() < cosets.index())
    throw Error("response space smaller than the subgroup index");
  validate_gamma(v.space, cosets.index(), gamma);
  const std::vector<Complex> weights = slate_weights(v);
  return expand_to_group(g, cosets, coset_weight_matrix(v.space, cosets, gamma, weights));
}

Density subgroup_state_average(const GroupTable& g, const CosetList& cosets,
                               const Slate& v, std::optional<SampleSpec> sample) {
  if (&cosets.subgroup.parent() != &g)
    throw Error("coset list does not belong to this group table");
  const int n_cosets = cosets.index();
  const int d = v.space.size();
  if (d < n_cosets) throw Error("response space smaller than the subgroup index");
  OracleEnumerator en = sample ? OracleEnumerator::sample(d, n_cosets, *sample)
                               : OracleEnumerator::full(d, n_cosets);
  const std::vector<Complex> weights = slate_weights(v);
  Matrix acc = Matrix::Zero(n_cosets, n_cosets);
  std::vector<int> gamma;
  while (en.next(gamma))
    acc += coset_weight_matrix(v.space, cosets, gamma, weights);
  acc /= double(en.total());
  return expand_to_group(g, cosets, acc);
}

Density subgroup_state_closed(const GroupTable& g, const Subgroup& h, int d,
                              double beta0_sq) {
  if (&h.parent() != &g) throw Error("subgroup does not belong to this group table");
  if (d < 2) throw Error("response dimension must be at least 2");
  if (d < h.index()) throw Error("response dimension smaller than the subgroup index");
  if (beta0_sq < -1e-12 || beta0_sq > 1.0 + 1e-12)
    throw Error("beta0_sq outside [0, 1]");
  beta0_sq = std::clamp(beta0_sq, 0.0, 1.0);
  const int n = g.order();
  const double flat = 1.0 / n;
  const double dd = double(d);
  Vector phi(n);
  for (int e = 0; e < n; ++e) {
    const double kernel =
        flat * (h.contains(e) ? dd / (dd - 1.0) : 0.0) - flat / (dd - 1.0);
    phi[e] = beta0_sq * flat + (1.0 - beta0_sq) * kernel;
  }
  return regular_rep(g, phi);
}

FourierBlocks subgroup_state_blocks(const IrrepSet& s, const Subgroup& h, int d) {
  if (&h.parent() != &s.group())
    throw Error("subgroup does not belong to this irrep set's group");
  const int n_cosets = h.index();
  if (d < 2) throw Error("response dimension must be at least 2");
  if (d < n_cosets) throw Error("response dimension smaller than the subgroup index");
  const double dd = double(d);
  FourierBlocks f;
  f.blocks.reserve(s.irreps().size());
  for (const Irrep& r : s.irreps()) {
    if (r.label == 0) {
      Matrix b(1, 1);
      b(0, 0) = (dd - n_cosets) / ((dd - 1.0) * n_cosets);
      f.blocks.push_back(std::move(b));
    } else {
      f.blocks.push_back(dd / ((dd - 1.0) * n_cosets) *
                         h_invariant_projector(r, h));
    }
  }
  return f;
}

FourierBlocks slate_state_blocks(const IrrepSet& s, const Subgroup& h, int d,
                                 double beta0_sq) {
  if (beta0_sq < -1e-12 || beta0_sq > 1.0 + 1e-12)
    throw Error("beta0_sq outside [0, 1]");
  beta0_sq = std::clamp(beta0_sq, 0.0, 1.0);
  FourierBlocks f = subgroup_state_blocks(s, h, d);
  for (std::size_t l = 0; l < f.blocks.size(); ++l) {
    f.blocks[l] *= (1.0 - beta0_sq);
    if (l == 0) f.blocks[l].array() += beta0_sq;
  }
  return f;
}

}  // namespace hsplab
