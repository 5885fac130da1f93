#pragma once

// Two-leg triangular ladder written as a zigzag chain:
//   H = J1 sum S_j.S_{j+1} + J2 sum S_j.S_{j+2}
//     + (Jr/2) sum [P_{j,j+1,j+3,j+2} + h.c.]
// with open boundaries, plus exact diagonalization in the S^z = 0 sector and
// sign metrics.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "posit/basis.hpp"
#include "posit/mps.hpp"
#include "posit/rng.hpp"
#include "posit/tensor.hpp"

namespace posit {

inline constexpr std::size_t kMaxDeskSites = 20;

struct LadderModel {
  std::size_t n_sites = 8;
  double j1 = 1.0;
  double j2 = 0.0;
  double jr = 0.0;

  void validate() const {
    if (n_sites < 2 || n_sites % 2 != 0) throw std::invalid_argument("ladder needs an even number of sites >= 2");
    if (n_sites > kMaxDeskSites) {
      throw std::invalid_argument("n_sites " + std::to_string(n_sites) + " exceeds the exact-diagonalization cap of " +
                                  std::to_string(kMaxDeskSites));
    }
  }
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct Bond {
  std::size_t i, j;
  double coupling;
};

/// Four sites (a, b, c, d) on which P|s_a,s_b,s_c,s_d> = |s_d,s_a,s_b,s_c>.
struct RingPlaquette {
  std::size_t a, b, c, d;
  double coupling;  // multiplies P + P^dagger
};

/// Cyclic permutation of the plaquette's spins applied to a dense index.
inline std::uint64_t ring_permute(std::uint64_t x, const RingPlaquette& p, std::size_t n, bool inverse = false) {
  const std::size_t pos[4] = {p.a, p.b, p.c, p.d};
  int old[4];
  for (int q = 0; q < 4; ++q) old[q] = site_bit(x, pos[q], n);
  std::uint64_t y = x;
  for (int q = 0; q < 4; ++q) {
    // forward: new value at slot q is the old value at slot q-1 (cyclically)
    const int src = inverse ? (q + 1) % 4 : (q + 3) % 4;
    const std::uint64_t mask = std::uint64_t{1} << (n - 1 - pos[q]);
    y = old[src] ? (y | mask) : (y & ~mask);
  }
  return y;
}

/// Matrix-free real symmetric spin Hamiltonian.
class SpinHamiltonian {
 public:
  SpinHamiltonian(std::size_t n_sites, std::vector<Bond> bonds, std::vector<RingPlaquette> rings)
      : n_(n_sites), bonds_(std::move(bonds)), rings_(std::move(rings)) {}

  std::size_t n_sites() const noexcept { return n_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  const std::vector<RingPlaquette>& rings() const noexcept { return rings_; }

  /// Calls emit(y, <y|H|x>) for every term acting on basis state x.
  template <typename Emit>
  void for_each_connection(std::uint64_t x, Emit&& emit) const {
    double diag = 0.0;
    for (const auto& b : bonds_) {
      const int si = site_bit(x, b.i, n_), sj = site_bit(x, b.j, n_);
      if (si == sj) {
        diag += 0.25 * b.coupling;
      } else {
        diag -= 0.25 * b.coupling;
        const std::uint64_t flip = (std::uint64_t{1} << (n_ - 1 - b.i)) | (std::uint64_t{1} << (n_ - 1 - b.j));
        emit(x ^ flip, 0.5 * b.coupling);
      }
    }
    for (const auto& r : rings_) {
      const double w = 0.5 * r.coupling;
      const std::uint64_t fwd = ring_permute(x, r, n_, false);
      const std::uint64_t bwd = ring_permute(x, r, n_, true);
      if (fwd == x) diag += w; else emit(fwd, w);
      if (bwd == x) diag += w; else emit(bwd, w);
    }
    emit(x, diag);
  }

  template <typename Scalar>
  void apply(std::span<const Scalar> in, std::span<Scalar> out) const {
    const std::uint64_t dim = std::uint64_t{1} << n_;
    if (in.size() != dim || out.size() != dim) throw DimensionError("Hamiltonian apply: vector length != 2^N");
    for (auto& v : out) v = Scalar{};
    for (std::uint64_t x = 0; x < dim; ++x) {
      const Scalar vx = in[x];
      if (vx == Scalar{}) continue;
      for_each_connection(x, [&](std::uint64_t y, double h) { out[y] += h * vx; });
    }
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const {
    Eigen::VectorXcd out(in.size());
    apply<cplx>(std::span<const cplx>(in.data(), static_cast<std::size_t>(in.size())),
                std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
  }

  Eigen::SparseMatrix<double> to_sparse() const {
    const std::uint64_t dim = std::uint64_t{1} << n_;
    std::vector<Eigen::Triplet<double>> trips;
    for (std::uint64_t x = 0; x < dim; ++x) {
      for_each_connection(x, [&](std::uint64_t y, double h) {
        if (h != 0.0) trips.emplace_back(static_cast<int>(y), static_cast<int>(x), h);
      });
    }
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

 private:
  std::size_t n_;
  std::vector<Bond> bonds_;
  std::vector<RingPlaquette> rings_;
};

/// Terms are kept iff all their sites lie in [0, N).
inline SpinHamiltonian build_hamiltonian(const LadderModel& model) {
  model.validate();
  const std::size_t n = model.n_sites;
  std::vector<Bond> bonds;
  std::vector<RingPlaquette> rings;
  if (model.j1 != 0.0)
    for (std::size_t j = 0; j + 1 < n; ++j) bonds.push_back({j, j + 1, model.j1});
  if (model.j2 != 0.0)
    for (std::size_t j = 0; j + 2 < n; ++j) bonds.push_back({j, j + 2, model.j2});
  if (model.jr != 0.0)
    for (std::size_t j = 0; j + 3 < n; ++j) rings.push_back({j, j + 1, j + 3, j + 2, model.jr});
  return SpinHamiltonian(n, std::move(bonds), std::move(rings));
}

struct GroundStateResult {
  double energy = 0.0;
  Eigen::VectorXcd state;  // length 2^N, largest-magnitude amplitude real positive
  double degeneracy_gap = 0.0;  // second minus first Ritz value in the S^z = 0 sector
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Index of the first amplitude of (within 1e-9 relative) maximal magnitude;
/// the reference for global phase fixing.
inline std::uint64_t reference_index(const Eigen::VectorXcd& v) {
  if (v.size() == 0) throw DimensionError("reference index of an empty state");
  const double mx = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= mx * (1.0 - 1e-9)) return static_cast<std::uint64_t>(i);
  return 0;
}

/// Unit phase that makes the reference amplitude real and positive.
inline cplx reference_phase(const Eigen::VectorXcd& v) {
  const cplx a = v(static_cast<Eigen::Index>(reference_index(v)));
  return std::abs(a) == 0.0 ? cplx(1.0) : std::conj(a) / std::abs(a);
}

/// Rotates the global phase so the reference amplitude becomes real positive.
inline void fix_global_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const auto r = static_cast<Eigen::Index>(reference_index(v));
  if (std::abs(v(r)) == 0.0) return;
  v *= std::conj(v(r)) / std::abs(v(r));
  v(r) = std::abs(v(r));
}

struct LanczosOptions {
  std::size_t krylov_dim = 80;
  std::size_t max_restarts = 200;
  double tolerance = 1e-10;
  std::uint64_t seed = 12345;
};

/// Lowest eigenpair via explicitly restarted Lanczos with full
/// reorthogonalization, restricted to total S^z = 0.
inline GroundStateResult ground_state(const LadderModel& model, const LanczosOptions& opts = {}) {
  const SpinHamiltonian h = build_hamiltonian(model);
  const std::size_t n = model.n_sites;
  const std::uint64_t full_dim = std::uint64_t{1} << n;

  std::vector<std::uint64_t> states;
  std::vector<std::int32_t> lookup(full_dim, -1);
  for (std::uint64_t x = 0; x < full_dim; ++x) {
    if (static_cast<std::size_t>(std::popcount(x)) == n / 2) {
      lookup[x] = static_cast<std::int32_t>(states.size());
      states.push_back(x);
    }
  }
  const auto dim = static_cast<Eigen::Index>(states.size());

  auto apply_sector = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out.setZero(dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      const double va = in(a);
      if (va == 0.0) continue;
      h.for_each_connection(states[static_cast<std::size_t>(a)], [&](std::uint64_t y, double c) {
        out(lookup[y]) += c * va;
      });
    }
  };

  SplitMix64 rng(opts.seed);
  Eigen::VectorXd start(dim);
  for (Eigen::Index a = 0; a < dim; ++a) start(a) = rng.uniform(-1.0, 1.0);
  start.normalize();

  const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(opts.krylov_dim), dim);
  Eigen::MatrixXd basis(dim, m);
  Eigen::VectorXd w(dim), ritz(dim), hr(dim);
  double energy = 0.0, gap = 0.0, residual = 0.0;
  std::size_t iterations = 0;

  for (std::size_t restart = 0; restart <= opts.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      apply_sector(basis.col(k), w);
      ++iterations;
      const double a = basis.col(k).dot(w);
      alpha.push_back(a);
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeffs = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * coeffs;
      }
      const double b = w.norm();
      if (k + 1 == m || b < 1e-12) {
        ++k;
        break;
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    energy = es.eigenvalues()(0);
    gap = k > 1 ? es.eigenvalues()(1) - energy : 0.0;
    ritz = basis.leftCols(k) * es.eigenvectors().col(0);
    ritz.normalize();
    apply_sector(ritz, hr);
    energy = ritz.dot(hr);
    residual = (hr - energy * ritz).norm();
    if (residual <= opts.tolerance) break;
    start = ritz;
  }
  if (!(residual <= opts.tolerance)) {
    throw SolverError("Lanczos did not converge (residual " + std::to_string(residual) + ")", residual);
  }

  GroundStateResult out;
  out.energy = energy;
  out.degeneracy_gap = gap;
  out.residual = residual;
  out.iterations = iterations;
  out.state = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(full_dim));
  for (Eigen::Index a = 0; a < dim; ++a) out.state(static_cast<Eigen::Index>(states[static_cast<std::size_t>(a)])) = ritz(a);
  fix_global_phase(out.state);
  return out;
}

inline double hard_sign(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Sum |psi|^2 HardSign(Re psi) / sum |psi|^2, by enumeration.
inline double average_sign(const Eigen::VectorXcd& state) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double p = std::norm(state(i));
    num += p * hard_sign(state(i).real());
    den += p;
  }
  if (den == 0.0) throw NumericError("average sign of a zero state");
  return num / den;
}

/// Estimate from a batch drawn from |psi|^2 (or a weighted full basis).
inline double average_sign(const SampleBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty sample batch");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    num += batch.weight(j) * hard_sign(batch.amplitudes[j].real());
    den += batch.weight(j);
  }
  return num / den;
}

struct SignEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t n_samples = 0;  // 0 when enumerated
  bool enumerated = true;
};

inline constexpr std::size_t kEnumerationMaxSites = 12;

/// Sign of the phase-fixed state: enumerated for N <= 12, otherwise estimated
/// from `n_samples` configurations with its standard error.
inline SignEstimate average_sign(const MatrixProductState& psi, std::size_t n_samples, std::uint64_t seed) {
  SignEstimate est;
  Eigen::VectorXcd dense = to_dense(psi);
  if (psi.n_sites() <= kEnumerationMaxSites) {
    fix_global_phase(dense);
    est.value = average_sign(dense);
    return est;
  }
  const cplx u = reference_phase(dense);
  const SampleBatch batch = perfect_sample(normalize(psi), n_samples, seed);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& a : batch.amplitudes) {
    const double s = hard_sign((a * u).real());
    sum += s;
    sum2 += s * s;
  }
  const double n = static_cast<double>(batch.size());
  est.value = sum / n;
  est.standard_error = n > 1 ? std::sqrt(std::max(0.0, (sum2 / n - est.value * est.value) / (n - 1))) : 0.0;
  est.n_samples = batch.size();
  est.enumerated = false;
  return est;
}

/// A = even sites.
inline std::vector<bool> even_sublattice(std::size_t n_sites) {
  std::vector<bool> a(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) a[k] = (k % 2 == 0);
  return a;
}

/// Multiplies each amplitude by (-1)^(number of down spins on sublattice A).
inline Eigen::VectorXcd marshall_transform(const Eigen::VectorXcd& state, const std::vector<bool>& sublattice) {
  const std::size_t n = sublattice.size();
  if (static_cast<std::uint64_t>(state.size()) != (std::uint64_t{1} << n)) {
    throw DimensionError("sublattice labeling does not match the state size");
  }
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (sublattice[k]) mask |= std::uint64_t{1} << (n - 1 - k);
  Eigen::VectorXcd out = state;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (std::popcount(static_cast<std::uint64_t>(i) & mask) % 2 == 1) out(i) = -out(i);
  return out;
}

}  // namespace posit
