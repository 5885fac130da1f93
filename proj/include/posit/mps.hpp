#pragma once

// Open-boundary matrix product states over qubits: canonical-center moves,
// gate application with SVD truncation, amplitudes, bipartite entropy, exact
// (perfect) sampling and dense compression.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "posit/basis.hpp"
#include "posit/rng.hpp"
#include "posit/tensor.hpp"

namespace posit {

inline constexpr double kDefaultCutoff = 1e-6;
inline constexpr std::size_t kUnboundedRank = static_cast<std::size_t>(-1);

class MatrixProductState {
 public:
  MatrixProductState() = default;

  /// Site tensors are (left bond, physical = 2, right bond).
  explicit MatrixProductState(std::vector<Tensor> sites, std::optional<std::size_t> center = std::nullopt)
      : sites_(std::move(sites)), center_(center) {
    if (sites_.empty()) throw DimensionError("MPS needs at least one site");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      const auto& t = sites_[k];
      if (t.rank() != 3 || t.extent(1) != 2) {
        throw DimensionError("site " + std::to_string(k) + " must have shape [Dl,2,Dr], got " +
                             shape_string(t.shape()));
      }
      if (k > 0 && sites_[k - 1].extent(2) != t.extent(0)) {
        throw DimensionError("bond mismatch between sites " + std::to_string(k - 1) + " and " + std::to_string(k));
      }
    }
    if (sites_.front().extent(0) != 1 || sites_.back().extent(2) != 1) {
      throw DimensionError("boundary bonds must have extent 1");
    }
    if (center_ && *center_ >= sites_.size()) throw DimensionError("orthogonality center out of range");
  }

  std::size_t n_sites() const noexcept { return sites_.size(); }
  const std::vector<Tensor>& sites() const noexcept { return sites_; }
  const Tensor& site(std::size_t k) const { return sites_.at(k); }
  std::optional<std::size_t> center() const noexcept { return center_; }

  /// Extent of the bond between sites b-1 and b, for b in [0, N].
  std::size_t bond_dimension(std::size_t b) const {
    if (b == 0) return 1;
    return sites_.at(b - 1).extent(2);
  }

  std::size_t max_bond() const {
    std::size_t m = 1;
    for (const auto& t : sites_) m = std::max(m, t.extent(2));
    return m;
  }

  // Mutation is reserved for the free functions in this header, which keep the
  // canonical bookkeeping consistent.
  std::vector<Tensor>& mutable_sites() noexcept { return sites_; }
  void set_center(std::optional<std::size_t> c) noexcept { center_ = c; }

  friend bool operator==(const MatrixProductState&, const MatrixProductState&) = default;

 private:
  std::vector<Tensor> sites_;
  std::optional<std::size_t> center_;
};

struct SampleBatch {
  std::size_t n_sites = 0;
  std::vector<std::uint8_t> configurations;  // row-major, size() x n_sites
  std::vector<cplx> amplitudes;
  std::vector<double> weights;  // empty means uniform 1/size()

  std::size_t size() const noexcept { return amplitudes.size(); }
  std::span<const std::uint8_t> configuration(std::size_t j) const {
    return std::span<const std::uint8_t>(configurations).subspan(j * n_sites, n_sites);
  }
  double weight(std::size_t j) const {
    return weights.empty() ? 1.0 / static_cast<double>(size()) : weights[j];
  }
};

namespace detail {

inline Tensor site_from_matrix(const Eigen::MatrixXcd& m, std::size_t dl, std::size_t dr) {
  return Tensor::from_matrix(m).reshape({dl, 2, dr});
}

// Left-orthonormalize site k, pushing the remainder into site k+1.
inline void left_qr_step(std::vector<Tensor>& sites, std::size_t k) {
  const std::size_t dl = sites[k].extent(0);
  const Eigen::MatrixXcd m = sites[k].as_matrix(2);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const Eigen::Index r = std::min(m.rows(), m.cols());
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), r);
  const Eigen::MatrixXcd rr = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  sites[k] = site_from_matrix(q, dl, static_cast<std::size_t>(r));
  const std::size_t dr2 = sites[k + 1].extent(2);
  const Eigen::MatrixXcd next = rr * sites[k + 1].as_matrix(1);
  sites[k + 1] = site_from_matrix(next, static_cast<std::size_t>(r), dr2);
}

// Right-orthonormalize site k, pushing the remainder into site k-1.
inline void right_qr_step(std::vector<Tensor>& sites, std::size_t k) {
  const std::size_t dr = sites[k].extent(2);
  const Eigen::MatrixXcd m = sites[k].as_matrix(1);  // (Dl, 2*Dr)
  const Eigen::MatrixXcd mh = m.adjoint();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(mh);
  const Eigen::Index r = std::min(mh.rows(), mh.cols());
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(mh.rows(), r);
  const Eigen::MatrixXcd rr = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  sites[k] = site_from_matrix(q.adjoint(), static_cast<std::size_t>(r), dr);
  const std::size_t dl_prev = sites[k - 1].extent(0);
  const Eigen::MatrixXcd prev = sites[k - 1].as_matrix(2) * rr.adjoint();
  sites[k - 1] = site_from_matrix(prev, dl_prev, static_cast<std::size_t>(r));
}

}  // namespace detail

/// Product state |bits>.
inline MatrixProductState product_state(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw DimensionError("product state needs at least one site");
  std::vector<Tensor> sites;
  sites.reserve(bits.size());
  for (auto b : bits) {
    Tensor t({1, 2, 1});
    t.at({0, static_cast<std::size_t>(b & 1U), 0}) = 1.0;
    sites.push_back(std::move(t));
  }
  return MatrixProductState(std::move(sites), 0);
}

inline MatrixProductState product_state(std::size_t n_sites) {
  return product_state(Configuration(n_sites, 0));
}

/// Moves the orthogonality center to `c`. A state without a center is fully
/// canonicalized first.
inline MatrixProductState move_center(MatrixProductState psi, std::size_t c) {
  const std::size_t n = psi.n_sites();
  if (c >= n) throw DimensionError("center out of range");
  auto& sites = psi.mutable_sites();
  if (!psi.center()) {
    for (std::size_t k = 0; k < c; ++k) detail::left_qr_step(sites, k);
    for (std::size_t k = n - 1; k > c; --k) detail::right_qr_step(sites, k);
  } else {
    std::size_t cur = *psi.center();
    while (cur < c) detail::left_qr_step(sites, cur++);
    while (cur > c) detail::right_qr_step(sites, cur--);
  }
  psi.set_center(c);
  return psi;
}

inline double norm(const MatrixProductState& psi) {
  // <psi|psi> via the left transfer environment.
  Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& t : psi.sites()) {
    const std::size_t dl = t.extent(0), dr = t.extent(2);
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dr), static_cast<Eigen::Index>(dr));
    const Eigen::MatrixXcd m = t.as_matrix(1);  // (Dl, 2*Dr)
    for (int s = 0; s < 2; ++s) {
      Eigen::MatrixXcd a(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(dr));
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t r = 0; r < dr; ++r) a(l, r) = m(l, s * dr + r);
      next += a.adjoint() * env * a;
    }
    env = std::move(next);
  }
  return std::sqrt(std::max(0.0, env(0, 0).real()));
}

inline MatrixProductState normalize(MatrixProductState psi) {
  if (!psi.center()) psi = move_center(std::move(psi), 0);
  const std::size_t c = *psi.center();
  const double nrm = psi.site(c).norm();
  if (nrm == 0.0 || !std::isfinite(nrm)) throw NumericError("cannot normalize a zero or non-finite MPS");
  psi.mutable_sites()[c] *= 1.0 / nrm;
  return psi;
}

/// Max deviation from the canonical conditions implied by the current center.
inline double canonical_error(const MatrixProductState& psi) {
  if (!psi.center()) return 0.0;
  const std::size_t c = *psi.center();
  double err = 0.0;
  for (std::size_t k = 0; k < psi.n_sites(); ++k) {
    if (k == c) continue;
    const auto& t = psi.site(k);
    if (k < c) {
      const Eigen::MatrixXcd m = t.as_matrix(2);
      err = std::max(err, (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff());
    } else {
      const Eigen::MatrixXcd m = t.as_matrix(1);
      err = std::max(err, (m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

/// <sigma|psi> by a left-to-right transfer-matrix product.
inline cplx amplitude(const MatrixProductState& psi, std::span<const std::uint8_t> sigma) {
  if (sigma.size() != psi.n_sites()) {
    throw DimensionError("configuration length " + std::to_string(sigma.size()) + " != " +
                         std::to_string(psi.n_sites()) + " sites");
  }
  std::vector<cplx> left{1.0}, next;
  for (std::size_t k = 0; k < psi.n_sites(); ++k) {
    const auto& t = psi.site(k);
    const std::size_t dl = t.extent(0), dr = t.extent(2), s = sigma[k] & 1U;
    const auto data = t.data();
    next.assign(dr, 0.0);
    for (std::size_t l = 0; l < dl; ++l) {
      const cplx w = left[l];
      const cplx* row = data.data() + (l * 2 + s) * dr;
      for (std::size_t r = 0; r < dr; ++r) next[r] += w * row[r];
    }
    std::swap(left, next);
  }
  return left[0];
}

/// Full contraction into a dense vector (site 0 most significant).
inline Eigen::VectorXcd to_dense(const MatrixProductState& psi) {
  if (psi.n_sites() > 26) throw DimensionError("state too large for dense conversion");
  // Row-major (prefix index, bond) running matrix.
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& t : psi.sites()) {
    const std::size_t dr = t.extent(2);
    const Eigen::MatrixXcd m = t.as_matrix(1);  // (Dl, 2*Dr)
    const Eigen::MatrixXcd prod = acc * m;      // (P, 2*Dr)
    Eigen::MatrixXcd next(prod.rows() * 2, static_cast<Eigen::Index>(dr));
    for (Eigen::Index p = 0; p < prod.rows(); ++p)
      for (int s = 0; s < 2; ++s)
        for (std::size_t r = 0; r < dr; ++r) next(p * 2 + s, r) = prod(p, s * dr + r);
    acc = std::move(next);
  }
  return acc.col(0);
}

inline void check_unitary(const Eigen::MatrixXcd& g, double tol = 1e-10) {
  const double dev = (g.adjoint() * g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) throw NumericError("gate is not unitary (deviation " + std::to_string(dev) + ")");
}

enum class UnitarityCheck { kOff, kWarn, kStrict };

namespace detail {
inline void enforce_unitary(const Eigen::MatrixXcd& g, UnitarityCheck mode) {
  if (mode == UnitarityCheck::kOff) return;
  try {
    check_unitary(g);
  } catch (const NumericError& e) {
    if (mode == UnitarityCheck::kStrict) throw;
    std::cerr << "warning: " << e.what() << '\n';
  }
}
}  // namespace detail

/// Applies a 2x2 gate to one site. Unitaries preserve the canonical form.
inline MatrixProductState apply_one_qubit_gate(MatrixProductState psi, const Eigen::Matrix2cd& gate, std::size_t site,
                                               UnitarityCheck check = UnitarityCheck::kWarn) {
  if (site >= psi.n_sites()) throw DimensionError("gate site out of range");
  detail::enforce_unitary(gate, check);
  auto& t = psi.mutable_sites()[site];
  const std::size_t dl = t.extent(0), dr = t.extent(2);
  Tensor out({dl, 2, dr});
  for (std::size_t l = 0; l < dl; ++l)
    for (std::size_t o = 0; o < 2; ++o)
      for (std::size_t r = 0; r < dr; ++r)
        out[(l * 2 + o) * dr + r] = gate(o, 0) * t[(l * 2 + 0) * dr + r] + gate(o, 1) * t[(l * 2 + 1) * dr + r];
  t = std::move(out);
  return psi;
}

struct GateApplication {
  MatrixProductState state;
  double truncation_error = 0.0;
};

/// Applies a 4x4 gate (row = out pair, column = in pair, first site most
/// significant) on (site, site+1), restores MPS form with a truncated SVD and
/// renormalizes. The center ends on site+1.
inline GateApplication apply_two_qubit_gate(MatrixProductState psi, const Eigen::Matrix4cd& gate, std::size_t site,
                                            double cutoff = kDefaultCutoff, std::size_t max_rank = kUnboundedRank,
                                            UnitarityCheck check = UnitarityCheck::kWarn) {
  if (site + 1 >= psi.n_sites()) throw DimensionError("two-qubit gate sites out of range");
  detail::enforce_unitary(gate, check);
  psi = move_center(std::move(psi), site);
  auto& sites = psi.mutable_sites();
  const std::size_t dl = sites[site].extent(0), dr = sites[site + 1].extent(2);
  const Tensor theta = contract(sites[site], sites[site + 1], {{2, 0}});  // (Dl,2,2,Dr)

  Tensor evolved({dl, 2, 2, dr});
  for (std::size_t l = 0; l < dl; ++l)
    for (std::size_t o = 0; o < 4; ++o)
      for (std::size_t r = 0; r < dr; ++r) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < 4; ++i) acc += gate(o, i) * theta[(l * 4 + i) * dr + r];
        evolved[(l * 4 + o) * dr + r] = acc;
      }

  SvdResult svd = svd_truncated(evolved, 2, cutoff, max_rank);
  double kept = 0.0;
  for (double s : svd.singular_values) kept += s * s;
  const double scale = 1.0 / std::sqrt(kept);
  const std::size_t r = svd.singular_values.size();
  Tensor right = svd.right_isometry;  // (r, 2, Dr)
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < 2 * dr; ++j) right[k * 2 * dr + j] *= svd.singular_values[k] * scale;
  sites[site] = std::move(svd.left_isometry);
  sites[site + 1] = std::move(right);
  psi.set_center(site + 1);
  return {std::move(psi), svd.truncation_error};
}

/// Schmidt coefficients across the bond between sites bond-1 and bond.
inline std::vector<double> schmidt_values(const MatrixProductState& psi, std::size_t bond) {
  if (bond < 1 || bond >= psi.n_sites()) throw DimensionError("bond must lie in [1, N-1]");
  const MatrixProductState moved = move_center(psi, bond - 1);
  return svd_truncated(moved.site(bond - 1), 2, 0.0).singular_values;
}

inline constexpr double kEntropyClamp = 1e-12;

/// Von Neumann entropy (natural log) from Schmidt values.
inline double entropy_from_schmidt(std::span<const double> lambdas) {
  double total = 0.0;
  for (double l : lambdas) total += l * l;
  double s = 0.0;
  for (double l : lambdas) {
    const double p = l * l / total;
    s -= p * std::log(std::max(p, kEntropyClamp));
  }
  return std::max(0.0, s);
}

inline double entanglement_entropy(const MatrixProductState& psi, std::size_t bond) {
  const auto lambdas = schmidt_values(psi, bond);
  return entropy_from_schmidt(lambdas);
}

/// Draws `n` independent configurations from |psi(sigma)|^2 by sweeping left to
/// right through conditional single-site distributions. Sample j uses its own
/// stream derived from (rng_seed, j).
inline SampleBatch perfect_sample(const MatrixProductState& psi_in, std::size_t n, std::uint64_t rng_seed) {
  const double nrm = norm(psi_in);
  if (std::abs(nrm - 1.0) > 1e-8) throw NumericError("perfect_sample needs a normalized state (norm " + std::to_string(nrm) + ")");
  const MatrixProductState psi = move_center(psi_in, 0);
  const std::size_t N = psi.n_sites();

  SampleBatch batch;
  batch.n_sites = N;
  batch.configurations.resize(n * N);
  batch.amplitudes.resize(n);

  std::vector<cplx> left, v0, v1;
  for (std::size_t j = 0; j < n; ++j) {
    SplitMix64 rng = derive_stream(rng_seed, j);
    left.assign(1, 1.0);
    double scale = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
      const auto& t = psi.site(k);
      const std::size_t dl = t.extent(0), dr = t.extent(2);
      const cplx* data = t.data().data();
      v0.assign(dr, 0.0);
      v1.assign(dr, 0.0);
      for (std::size_t l = 0; l < dl; ++l) {
        const cplx w = left[l];
        const cplx* r0 = data + (l * 2) * dr;
        const cplx* r1 = r0 + dr;
        for (std::size_t r = 0; r < dr; ++r) {
          v0[r] += w * r0[r];
          v1[r] += w * r1[r];
        }
      }
      double p0 = 0.0, p1 = 0.0;
      for (std::size_t r = 0; r < dr; ++r) {
        p0 += std::norm(v0[r]);
        p1 += std::norm(v1[r]);
      }
      const double u = rng.uniform();
      const int s = (u * (p0 + p1) < p0) ? 0 : 1;
      auto& chosen = s == 0 ? v0 : v1;
      const double cn = std::sqrt(s == 0 ? p0 : p1);
      for (auto& x : chosen) x /= cn;
      scale *= cn;
      std::swap(left, chosen);
      batch.configurations[j * N + k] = static_cast<std::uint8_t>(s);
    }
    batch.amplitudes[j] = left[0] * scale;
  }
  return batch;
}

/// Sequential SVD sweep of a dense state into a left-canonical MPS (center on
/// the last site). The input is renormalized.
inline MatrixProductState compress_dense(const Eigen::VectorXcd& state, double cutoff = kDefaultCutoff,
                                         std::size_t max_rank = kUnboundedRank) {
  const auto len = static_cast<std::uint64_t>(state.size());
  if (len < 2 || !std::has_single_bit(len)) throw DimensionError("dense state length must be 2^N with N >= 1");
  const double nrm = state.norm();
  if (nrm == 0.0) throw NumericError("cannot compress the zero vector");
  if (!std::isfinite(nrm)) throw NumericError("dense state has non-finite entries");
  const std::size_t N = static_cast<std::size_t>(std::countr_zero(len));

  std::vector<Tensor> sites;
  Eigen::VectorXcd normalized = state / nrm;
  Tensor rest({1, static_cast<std::size_t>(len)}, std::vector<cplx>(normalized.data(), normalized.data() + len));
  std::size_t dl = 1;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    const std::size_t cols = rest.size() / (dl * 2);
    const Tensor block = rest.reshape({dl, 2, cols});
    SvdResult svd = svd_truncated(block, 2, cutoff, max_rank);
    const std::size_t r = svd.singular_values.size();
    Tensor next = svd.right_isometry.reshape({r, cols});
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = 0; c < cols; ++c) next[i * cols + c] *= svd.singular_values[i];
    sites.push_back(std::move(svd.left_isometry));
    rest = std::move(next);
    dl = r;
  }
  Tensor last = rest.reshape({dl, 2, 1});
  const double ln = last.norm();
  last *= 1.0 / ln;
  sites.push_back(std::move(last));
  return MatrixProductState(std::move(sites), N - 1);
}

/// Random normalized MPS with bond dimension capped at `bond`.
inline MatrixProductState random_mps(std::size_t n_sites, std::size_t bond, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Tensor> sites;
  std::size_t dl = 1;
  for (std::size_t k = 0; k < n_sites; ++k) {
    const std::size_t left_max = std::size_t{1} << std::min<std::size_t>(k + 1, 20);
    const std::size_t right_max = std::size_t{1} << std::min<std::size_t>(n_sites - k - 1, 20);
    const std::size_t dr = (k + 1 == n_sites) ? 1 : std::min({bond, left_max, right_max});
    Tensor t({dl, 2, dr});
    for (auto& v : t.data()) v = cplx(rng.normal(), rng.normal());
    sites.push_back(std::move(t));
    dl = dr;
  }
  return normalize(MatrixProductState(std::move(sites)));
}

// Binary container, little-endian:
//   "POSITMPS" | u32 version | u32 n_sites | i64 center (-1 = none)
//   per site: u64 Dl | u64 d | u64 Dr | Dl*d*Dr x (f64 re, f64 im), row-major
inline constexpr char kMpsMagic[8] = {'P', 'O', 'S', 'I', 'T', 'M', 'P', 'S'};
inline constexpr std::uint32_t kMpsFormatVersion = 1;

namespace detail {
static_assert(std::endian::native == std::endian::little, "MPS container assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated MPS container");
  return v;
}
}  // namespace detail

inline void write_mps(std::ostream& os, const MatrixProductState& psi) {
  os.write(kMpsMagic, sizeof(kMpsMagic));
  detail::write_pod(os, kMpsFormatVersion);
  detail::write_pod(os, static_cast<std::uint32_t>(psi.n_sites()));
  detail::write_pod(os, static_cast<std::int64_t>(psi.center() ? static_cast<std::int64_t>(*psi.center()) : -1));
  for (const auto& t : psi.sites()) {
    for (std::size_t a = 0; a < 3; ++a) detail::write_pod(os, static_cast<std::uint64_t>(t.extent(a)));
    for (const auto& v : t.data()) {
      detail::write_pod(os, v.real());
      detail::write_pod(os, v.imag());
    }
  }
  if (!os) throw std::runtime_error("failed writing MPS container");
}

inline MatrixProductState read_mps(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMpsMagic, sizeof(magic)) != 0) throw std::runtime_error("not an MPS container");
  const auto version = detail::read_pod<std::uint32_t>(is);
  if (version != kMpsFormatVersion) throw std::runtime_error("unsupported MPS container version " + std::to_string(version));
  const auto n = detail::read_pod<std::uint32_t>(is);
  const auto center = detail::read_pod<std::int64_t>(is);
  std::vector<Tensor> sites;
  sites.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    Shape shape(3);
    for (auto& e : shape) e = static_cast<std::size_t>(detail::read_pod<std::uint64_t>(is));
    if (shape_volume(shape) > (std::size_t{1} << 28)) throw std::runtime_error("MPS site tensor too large");
    std::vector<cplx> data(shape_volume(shape));
    for (auto& v : data) {
      const double re = detail::read_pod<double>(is);
      const double im = detail::read_pod<double>(is);
      v = cplx(re, im);
    }
    sites.emplace_back(std::move(shape), std::move(data));
  }
  std::optional<std::size_t> c;
  if (center >= 0) c = static_cast<std::size_t>(center);
  return MatrixProductState(std::move(sites), c);
}

inline void save_mps(const std::string& path, const MatrixProductState& psi) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_mps(os, psi);
}

inline MatrixProductState load_mps(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_mps(is);
}

}  // namespace posit
