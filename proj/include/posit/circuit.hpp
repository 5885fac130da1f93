#pragma once

// Parametrized circuits of z rotations and general two-qubit gates
// U = exp(-i H(theta)), layered with disjoint supports, applied to MPS or to
// dense statevectors.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "posit/mps.hpp"
#include "posit/rng.hpp"
#include "posit/tensor.hpp"

namespace posit {

enum class GateKind { kRz, kGeneralTwoQubit };

inline std::size_t param_count(GateKind kind) { return kind == GateKind::kRz ? 1 : 16; }
inline std::size_t support_size(GateKind kind) { return kind == GateKind::kRz ? 1 : 2; }

inline std::string to_string(GateKind kind) { return kind == GateKind::kRz ? "rz" : "general_two_qubit"; }

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "rz") return GateKind::kRz;
  if (s == "general_two_qubit" || s == "general") return GateKind::kGeneralTwoQubit;
  throw std::invalid_argument("unknown gate kind '" + s + "'");
}

struct GateSpec {
  GateKind kind = GateKind::kRz;
  std::vector<std::size_t> sites;
  std::vector<double> params;

  void validate() const {
    if (params.size() != param_count(kind)) {
      throw std::invalid_argument(to_string(kind) + " gate needs " + std::to_string(param_count(kind)) +
                                  " parameters, got " + std::to_string(params.size()));
    }
    if (sites.size() != support_size(kind)) throw std::invalid_argument(to_string(kind) + " gate has wrong support size");
    if (kind == GateKind::kGeneralTwoQubit && sites[1] != sites[0] + 1) {
      throw std::invalid_argument("two-qubit gates must act on adjacent sites (i, i+1)");
    }
  }

  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

using Layer = std::vector<GateSpec>;

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_sites) : n_sites_(n_sites) {}

  /// Rejects gates outside the chain or overlapping supports.
  void add_layer(Layer layer) {
    std::vector<bool> used(n_sites_, false);
    for (const auto& g : layer) {
      g.validate();
      for (auto s : g.sites) {
        if (s >= n_sites_) throw std::invalid_argument("gate site " + std::to_string(s) + " outside the chain");
        if (used[s]) throw std::invalid_argument("overlapping gate supports in one layer at site " + std::to_string(s));
        used[s] = true;
      }
    }
    layers_.push_back(std::move(layer));
  }

  std::size_t n_sites() const noexcept { return n_sites_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  std::size_t n_params() const {
    std::size_t n = 0;
    for (const auto& l : layers_)
      for (const auto& g : l) n += g.params.size();
    return n;
  }

  /// Flattened as layers -> gates -> gate parameters.
  std::vector<double> params() const {
    std::vector<double> out;
    out.reserve(n_params());
    for (const auto& l : layers_)
      for (const auto& g : l) out.insert(out.end(), g.params.begin(), g.params.end());
    return out;
  }

  void set_params(std::span<const double> p) {
    if (p.size() != n_params()) throw DimensionError("parameter vector length mismatch");
    std::size_t k = 0;
    for (auto& l : layers_)
      for (auto& g : l)
        for (auto& v : g.params) v = p[k++];
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t n_sites_ = 0;
  std::vector<Layer> layers_;
};

inline Eigen::Matrix2cd rz_matrix(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -theta / 2);
  m(1, 1) = std::polar(1.0, theta / 2);
  return m;
}

/// Hermitian generator: params[0..3] the diagonal, then (re, im) of the upper
/// triangle in row order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
inline Eigen::Matrix4cd hermitian_generator(std::span<const double> p) {
  if (p.size() != 16) throw std::invalid_argument("general two-qubit gate needs 16 parameters");
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = p[static_cast<std::size_t>(i)];
  std::size_t k = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      h(i, j) = cplx(p[k], p[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

/// Basis element d H / d params[a].
inline Eigen::Matrix4cd hermitian_basis(std::size_t a) {
  std::array<double, 16> e{};
  e.at(a) = 1.0;
  return hermitian_generator(e);
}

namespace detail {
// (f(a) - f(b)) / (a - b) for f(x) = exp(-i x), stable as a -> b.
inline cplx exp_divided_difference(double a, double b) {
  const double d = 0.5 * (a - b);
  const double sinc = std::abs(d) < 1e-8 ? 1.0 - d * d / 6.0 : std::sin(d) / d;
  return cplx(0.0, -1.0) * std::polar(1.0, -0.5 * (a + b)) * sinc;
}
}  // namespace detail

/// exp(-i H) and, optionally, d exp(-i H(p)) / d p_a for all 16 parameters
/// via the Daleckii-Krein divided-difference formula.
struct GeneralGateJacobian {
  Eigen::Matrix4cd unitary;
  std::array<Eigen::Matrix4cd, 16> derivatives;
};

inline GeneralGateJacobian general_gate_with_jacobian(std::span<const double> p) {
  const Eigen::Matrix4cd h = hermitian_generator(p);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const Eigen::Matrix4cd& v = es.eigenvectors();
  const Eigen::Vector4d& lam = es.eigenvalues();
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -lam(i));
  GeneralGateJacobian out;
  out.unitary = v * phases.asDiagonal() * v.adjoint();
  Eigen::Matrix4cd gamma;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gamma(i, j) = detail::exp_divided_difference(lam(i), lam(j));
  for (std::size_t a = 0; a < 16; ++a) {
    const Eigen::Matrix4cd e = v.adjoint() * hermitian_basis(a) * v;
    out.derivatives[a] = v * gamma.cwiseProduct(e) * v.adjoint();
  }
  return out;
}

inline Eigen::Matrix4cd general_gate(std::span<const double> p) {
  const Eigen::Matrix4cd h = hermitian_generator(p);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Unitary matrix of a gate (2x2 or 4x4).
inline Tensor materialize(const GateSpec& g) {
  g.validate();
  if (g.kind == GateKind::kRz) {
    const Eigen::MatrixXcd m = rz_matrix(g.params[0]);
    return Tensor::from_matrix(m);
  }
  const Eigen::MatrixXcd m = general_gate(g.params);
  return Tensor::from_matrix(m);
}

/// Derivatives of the gate matrix with respect to each of its parameters.
inline std::vector<Eigen::MatrixXcd> materialize_derivatives(const GateSpec& g) {
  g.validate();
  std::vector<Eigen::MatrixXcd> out;
  if (g.kind == GateKind::kRz) {
    const double t = g.params[0];
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    d(0, 0) = cplx(0.0, -0.5) * std::polar(1.0, -t / 2);
    d(1, 1) = cplx(0.0, 0.5) * std::polar(1.0, t / 2);
    out.push_back(d);
    return out;
  }
  const auto jac = general_gate_with_jacobian(g.params);
  for (const auto& d : jac.derivatives) out.push_back(d);
  return out;
}

struct CircuitApplication {
  MatrixProductState state;
  double total_truncation_error = 0.0;
  double max_truncation_error = 0.0;  // largest single-SVD discarded weight
};

/// Layers in order, gates left to right within a layer.
inline CircuitApplication apply_circuit(const Circuit& circuit, const MatrixProductState& psi,
                                        double cutoff = kDefaultCutoff, std::size_t max_rank = kUnboundedRank,
                                        UnitarityCheck check = UnitarityCheck::kWarn) {
  if (circuit.n_sites() != psi.n_sites()) {
    throw DimensionError("circuit acts on " + std::to_string(circuit.n_sites()) + " sites, state has " +
                         std::to_string(psi.n_sites()));
  }
  CircuitApplication out{psi, 0.0, 0.0};
  for (const auto& layer : circuit.layers()) {
    for (const auto& g : layer) {
      if (g.kind == GateKind::kRz) {
        out.state = apply_one_qubit_gate(std::move(out.state), rz_matrix(g.params[0]), g.sites[0], check);
      } else {
        auto r = apply_two_qubit_gate(std::move(out.state), general_gate(g.params), g.sites[0], cutoff, max_rank, check);
        out.state = std::move(r.state);
        out.total_truncation_error += r.truncation_error;
        out.max_truncation_error = std::max(out.max_truncation_error, r.truncation_error);
      }
    }
  }
  return out;
}

/// In-place dense application of a 1- or 2-site gate matrix.
inline void apply_gate_dense(Eigen::VectorXcd& state, const Eigen::MatrixXcd& gate, std::span<const std::size_t> sites,
                             std::size_t n_sites) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (sites.size() == 1) {
    const std::uint64_t bit = std::uint64_t{1} << (n_sites - 1 - sites[0]);
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (x & bit) continue;
      const cplx a0 = state(x), a1 = state(x | bit);
      state(x) = gate(0, 0) * a0 + gate(0, 1) * a1;
      state(x | bit) = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
    return;
  }
  const std::uint64_t hi = std::uint64_t{1} << (n_sites - 1 - sites[0]);
  const std::uint64_t lo = std::uint64_t{1} << (n_sites - 1 - sites[1]);
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & (hi | lo)) continue;
    const std::uint64_t idx[4] = {x, x | lo, x | hi, x | hi | lo};
    cplx in[4];
    for (int i = 0; i < 4; ++i) in[i] = state(idx[i]);
    for (int o = 0; o < 4; ++o) {
      cplx acc = 0.0;
      for (int i = 0; i < 4; ++i) acc += gate(o, i) * in[i];
      state(idx[o]) = acc;
    }
  }
}

inline Eigen::MatrixXcd gate_matrix(const GateSpec& g) {
  if (g.kind == GateKind::kRz) return rz_matrix(g.params[0]);
  return general_gate(g.params);
}

/// Exact statevector evolution.
inline Eigen::VectorXcd apply_circuit_dense(const Circuit& circuit, Eigen::VectorXcd state) {
  if (static_cast<std::uint64_t>(state.size()) != (std::uint64_t{1} << circuit.n_sites())) {
    throw DimensionError("dense state length does not match circuit size");
  }
  for (const auto& layer : circuit.layers())
    for (const auto& g : layer) apply_gate_dense(state, gate_matrix(g), g.sites, circuit.n_sites());
  return state;
}

/// Parameter initialization for brick_wall.
struct InitPolicy {
  double general_scale = 0.01;  // normal(0, scale) Hermitian parameters
  bool random = true;           // false: all parameters zero
  std::uint64_t seed = 0;
};

/// Alternating even (0,1),(2,3),... and odd (1,2),(3,4),... layers, even
/// first. For rz the layers are single-qubit rotations on every site.
inline Circuit brick_wall(std::size_t n_sites, std::size_t depth, GateKind kind, const InitPolicy& init = {}) {
  if (depth < 1) throw std::invalid_argument("brick_wall depth must be >= 1");
  if (n_sites < 1) throw std::invalid_argument("brick_wall needs at least one site");
  SplitMix64 rng = derive_stream(init.seed, 0x1417);
  Circuit c(n_sites);
  for (std::size_t d = 0; d < depth; ++d) {
    Layer layer;
    if (kind == GateKind::kRz) {
      for (std::size_t s = 0; s < n_sites; ++s) {
        const double theta = init.random ? rng.uniform(-std::numbers::pi, std::numbers::pi) : 0.0;
        layer.push_back({kind, {s}, {theta}});
      }
    } else {
      for (std::size_t s = d % 2; s + 1 < n_sites; s += 2) {
        std::vector<double> p(16, 0.0);
        if (init.random)
          for (auto& v : p) v = init.general_scale * rng.normal();
        layer.push_back({kind, {s, s + 1}, std::move(p)});
      }
    }
    c.add_layer(std::move(layer));
  }
  return c;
}

// Circuit file: JSON {"format": "posit.circuit", "version": 1, "n_sites", "layers":
// [[{"kind", "sites", "params"}, ...], ...]}. Doubles are written in shortest
// round-trip form, so reading back is value-exact.
inline constexpr int kCircuitFormatVersion = 1;

inline nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : c.layers()) {
    nlohmann::json jl = nlohmann::json::array();
    for (const auto& g : l) jl.push_back({{"kind", to_string(g.kind)}, {"sites", g.sites}, {"params", g.params}});
    layers.push_back(std::move(jl));
  }
  return {{"format", "posit.circuit"}, {"version", kCircuitFormatVersion}, {"n_sites", c.n_sites()}, {"layers", layers}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "posit.circuit") throw std::runtime_error("not a circuit file");
  if (j.at("version").get<int>() != kCircuitFormatVersion) throw std::runtime_error("unsupported circuit file version");
  Circuit c(j.at("n_sites").get<std::size_t>());
  for (const auto& jl : j.at("layers")) {
    Layer l;
    for (const auto& jg : jl) {
      l.push_back({gate_kind_from_string(jg.at("kind").get<std::string>()), jg.at("sites").get<std::vector<std::size_t>>(),
                   jg.at("params").get<std::vector<double>>()});
    }
    c.add_layer(std::move(l));
  }
  return c;
}

}  // namespace posit
