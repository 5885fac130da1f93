#pragma once

// Positivization cost and its corrected stochastic gradient.
//
// Per configuration:  C(s) = gamma |Im psi(s)| - (1 - gamma) SoftSign_beta(Re psi(s))
// Sampled cost:       mean_j C(s_j) + alpha S_vN(half chain)
// Effective cost:     mean_j [C(s_j) + 2 stop_gradient(C(s_j)) Re log psi(s_j)] + alpha S_vN
//
// Differentiating the effective cost gives the score-function corrected
// estimator of the gradient of sum_s |psi(s)|^2 C(s); differentiating the plain
// sampled cost ("naive") drops the dependence of the distribution on the
// parameters and is biased.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "posit/autodiff.hpp"
#include "posit/basis.hpp"
#include "posit/circuit.hpp"
#include "posit/model.hpp"
#include "posit/mps.hpp"
#include "posit/tensor.hpp"

namespace posit {

/// Global phase convention for the amplitudes entering C. kLargestAmplitude
/// multiplies the output state by the phase that makes its reference amplitude
/// (see reference_index) real positive; the reference is differentiated.
enum class PhaseReference { kNone, kLargestAmplitude };

struct CostParams {
  double gamma = 0.5;
  double alpha = 0.01;
  double beta = 10.0;  // +infinity selects the hard sign
  std::size_t n_samples = 1000;
  double log_clamp = 1e-30;
  PhaseReference phase_reference = PhaseReference::kNone;

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    if (!(log_clamp > 0.0)) throw std::invalid_argument("log_clamp must be positive");
  }
};

struct CostReport {
  double soft_cost = 0.0;
  double hard_avg_sign = 0.0;
  double imag_residual = 0.0;  // mean |Im psi|
  double entropy = 0.0;
  double grad_norm = 0.0;
  std::size_t clamped_amplitudes = 0;
};

/// 2 / (1 + exp(-beta x)) - 1, exactly odd; the hard sign when beta is infinite.
inline double soft_sign(double x, double beta) {
  if (std::isinf(beta)) return hard_sign(x);
  return ad::odd_tanh(0.5 * beta * x);
}

inline ad::Var soft_sign(const ad::Var& x, double beta) {
  if (std::isinf(beta)) return x.tape->unary(x, hard_sign(x.value()), 0.0);
  return ad::tanh_scaled(x, 0.5 * beta);
}

/// Sample-wise cost C for one amplitude.
inline double local_cost(cplx amp, const CostParams& p) {
  return p.gamma * std::abs(amp.imag()) - (1.0 - p.gamma) * soft_sign(amp.real(), p.beta);
}

inline ad::Var local_cost(const ad::Var& re, const ad::Var& im, const CostParams& p) {
  return p.gamma * ad::abs(im) - (1.0 - p.gamma) * soft_sign(re, p.beta);
}

/// Pairwise (tree) summation; the reduction order depends only on the length.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline std::size_t center_bond(std::size_t n_sites) { return n_sites / 2; }

namespace detail {
inline void require_batch(const SampleBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty sample batch");
}
}  // namespace detail

/// Entropy at the center bond, or 0 for a single site.
inline double half_chain_entropy(const MatrixProductState& psi) {
  if (psi.n_sites() < 2) return 0.0;
  return entanglement_entropy(psi, center_bond(psi.n_sites()));
}

/// Weighted mean of C over the batch amplitudes plus alpha S_vN of psi_out.
inline double sample_cost(const MatrixProductState& psi_out, const SampleBatch& batch, const CostParams& p) {
  detail::require_batch(batch);
  std::vector<double> terms(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) terms[j] = batch.weight(j) * local_cost(batch.amplitudes[j], p);
  const double entropy = p.alpha != 0.0 ? half_chain_entropy(psi_out) : 0.0;
  return pairwise_sum(terms) + p.alpha * entropy;
}

inline double effective_sample_term(cplx amp, double frozen_cost, const CostParams& p, std::size_t* clamped = nullptr) {
  const double mod2 = std::norm(amp);
  const double floor = p.log_clamp * p.log_clamp;
  if (mod2 < floor && clamped) ++*clamped;
  return local_cost(amp, p) + frozen_cost * std::log(std::max(mod2, floor));
}

/// Value of the effective cost. Its value equals sample_cost plus the
/// correction term 2 C Re log psi, which only matters through its derivative.
inline double effective_cost(const MatrixProductState& psi_out, const SampleBatch& batch, const CostParams& p) {
  detail::require_batch(batch);
  std::vector<double> terms(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const cplx a = batch.amplitudes[j];
    terms[j] = batch.weight(j) * effective_sample_term(a, local_cost(a, p), p);
  }
  const double entropy = p.alpha != 0.0 ? half_chain_entropy(psi_out) : 0.0;
  return pairwise_sum(terms) + p.alpha * entropy;
}

enum class Estimator {
  kCorrected,  // gradient of the effective cost
  kNaive,      // gradient of the plain sampled cost
};

struct GradientOptions {
  Estimator estimator = Estimator::kCorrected;
  /// Replaces the stop-gradient values C(s_j) in the correction term.
  std::optional<std::vector<double>> stop_gradient_values;
  /// Pins the phase reference configuration instead of taking the argmax.
  std::optional<std::uint64_t> reference_index;
};

struct GradientResult {
  std::vector<double> grad;
  double objective = 0.0;  // effective (or naive) cost on the exact amplitudes
  double sample_cost = 0.0;
  double entropy = 0.0;
  std::size_t clamped_amplitudes = 0;
  std::uint64_t reference_index = 0;  // meaningful with a phase reference
  cplx reference_phase = 1.0;         // multiplies the exact output amplitudes
};

/// Batch containing every basis state, weighted by |psi|^2. Differentiating
/// the effective cost on it gives the exact gradient of the expectation cost.
inline SampleBatch full_basis_batch(const Eigen::VectorXcd& state) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  SampleBatch b;
  b.n_sites = n;
  b.configurations.reserve(dim * n);
  for (std::uint64_t x = 0; x < dim; ++x) {
    const auto bits = basis_bits(x, n);
    b.configurations.insert(b.configurations.end(), bits.begin(), bits.end());
    b.amplitudes.push_back(state(static_cast<Eigen::Index>(x)));
    b.weights.push_back(std::norm(state(static_cast<Eigen::Index>(x))));
  }
  return b;
}

/// Sum_s |psi(s)|^2 C(s) + alpha S_vN for a dense normalized state.
inline double expectation_cost(const Eigen::VectorXcd& state, const CostParams& p,
                               std::optional<std::uint64_t> reference = std::nullopt) {
  cplx u = 1.0;
  if (p.phase_reference == PhaseReference::kLargestAmplitude) {
    const cplx a = state(static_cast<Eigen::Index>(reference ? *reference : reference_index(state)));
    u = std::conj(a) / std::abs(a);
  }
  std::vector<double> terms(static_cast<std::size_t>(state.size()));
  for (Eigen::Index i = 0; i < state.size(); ++i) terms[static_cast<std::size_t>(i)] = std::norm(state(i)) * local_cost(state(i) * u, p);
  double s = pairwise_sum(terms);
  if (p.alpha != 0.0) {
    const std::size_t n = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(state.size())));
    if (n >= 2) {
      const std::size_t rows = std::size_t{1} << center_bond(n);
      const Tensor m({rows, static_cast<std::size_t>(state.size()) / rows}, std::vector<cplx>(state.data(), state.data() + state.size()));
      s += p.alpha * entropy_from_schmidt(svd_truncated(m, 1, 0.0).singular_values);
    }
  }
  return s;
}

namespace detail {

// Entropy −sum p ln max(p, clamp) with p = lambda^2, and its derivative with
// respect to each lambda.
inline double entropy_and_upstream(std::span<const double> lambdas, std::vector<double>& upstream) {
  upstream.resize(lambdas.size());
  double s = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    const double p = l * l;
    if (p < kEntropyClamp) {
      s -= p * std::log(kEntropyClamp);
      upstream[i] = -2.0 * l * std::log(kEntropyClamp);
    } else {
      s -= p * std::log(p);
      upstream[i] = -2.0 * l * (std::log(p) + 1.0);
    }
  }
  return s;
}

// For out = U in on `sites`: accumulates G(o, i) = sum_rest adj(o, rest) conj(in(i, rest)).
inline Eigen::MatrixXcd gate_adjoint(const Eigen::VectorXcd& adj, const Eigen::VectorXcd& in,
                                     std::span<const std::size_t> sites, std::size_t n_sites) {
  const auto dim = static_cast<std::uint64_t>(in.size());
  if (sites.size() == 1) {
    const std::uint64_t bit = std::uint64_t{1} << (n_sites - 1 - sites[0]);
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (x & bit) continue;
      const std::uint64_t idx[2] = {x, x | bit};
      for (int o = 0; o < 2; ++o)
        for (int i = 0; i < 2; ++i) g(o, i) += adj(idx[o]) * std::conj(in(idx[i]));
    }
    return g;
  }
  const std::uint64_t hi = std::uint64_t{1} << (n_sites - 1 - sites[0]);
  const std::uint64_t lo = std::uint64_t{1} << (n_sites - 1 - sites[1]);
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & (hi | lo)) continue;
    const std::uint64_t idx[4] = {x, x | lo, x | hi, x | hi | lo};
    for (int o = 0; o < 4; ++o) {
      const cplx a = adj(idx[o]);
      if (a == cplx{}) continue;
      for (int i = 0; i < 4; ++i) g(o, i) += a * std::conj(in(idx[i]));
    }
  }
  return g;
}

}  // namespace detail

/// Reverse accumulation of the effective cost through the exact (untruncated)
/// circuit contraction. Batch configurations are constants; their amplitudes
/// are recomputed from the exact output state, so `batch.amplitudes` is not
/// read. The entropy term is differentiated through its singular values only.
inline GradientResult gradient(const Circuit& circuit, const Eigen::VectorXcd& psi_in, const SampleBatch& batch,
                               const CostParams& p, const GradientOptions& opts = {}) {
  detail::require_batch(batch);
  const std::size_t n = circuit.n_sites();
  if (static_cast<std::uint64_t>(psi_in.size()) != (std::uint64_t{1} << n)) throw DimensionError("input state size mismatch");
  if (batch.n_sites != n) throw DimensionError("batch configurations do not match the circuit size");
  if (opts.stop_gradient_values && opts.stop_gradient_values->size() != batch.size()) {
    throw DimensionError("stop-gradient override has the wrong length");
  }

  // Forward pass; gate inputs are recovered on the way back by inverting each
  // unitary, so only the output state is kept.
  std::vector<const GateSpec*> gates;
  for (const auto& layer : circuit.layers())
    for (const auto& g : layer) gates.push_back(&g);
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(gates.size());
  Eigen::VectorXcd state = psi_in;
  for (const auto* g : gates) {
    mats.push_back(gate_matrix(*g));
    apply_gate_dense(state, mats.back(), g->sites, n);
  }

  GradientResult out;
  Eigen::VectorXcd adj = Eigen::VectorXcd::Zero(state.size());
  const bool referenced = p.phase_reference == PhaseReference::kLargestAmplitude;
  cplx u = 1.0;
  if (referenced) {
    out.reference_index = opts.reference_index ? *opts.reference_index : reference_index(state);
    if (out.reference_index >= static_cast<std::uint64_t>(state.size())) throw DimensionError("reference index out of range");
    const cplx r = state(static_cast<Eigen::Index>(out.reference_index));
    if (std::abs(r) == 0.0) throw NumericError("phase reference amplitude is zero");
    u = std::conj(r) / std::abs(r);
  }
  out.reference_phase = u;
  double dphase = 0.0;  // d objective / d arg(reference amplitude)

  // Sample-wise objective on the scalar tape.
  std::vector<double> terms(batch.size()), plain(batch.size());
  ad::Tape tape;
  const double floor = p.log_clamp * p.log_clamp;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(basis_index(batch.configuration(j)));
    const cplx a = state(idx) * u;
    tape.clear();
    const ad::Var re = tape.variable(a.real());
    const ad::Var im = tape.variable(a.imag());
    const ad::Var c = local_cost(re, im, p);
    ad::Var objective = c;
    if (opts.estimator == Estimator::kCorrected) {
      const ad::Var frozen =
          opts.stop_gradient_values ? tape.constant((*opts.stop_gradient_values)[j]) : ad::stop_gradient(c);
      // 2 Re log psi = log |psi|^2
      const ad::Var mod2 = ad::square(re) + ad::square(im);
      if (mod2.value() < floor) ++out.clamped_amplitudes;
      objective = c + frozen * ad::log_clamped(mod2, floor);
    }
    const double w = batch.weight(j);
    const auto grads = tape.backward(objective);
    const cplx ga = w * cplx(grads[re.id], grads[im.id]);
    adj(idx) += ga * std::conj(u);
    dphase += (a * std::conj(ga)).imag();
    terms[j] = w * objective.value();
    plain[j] = w * c.value();
  }
  out.objective = pairwise_sum(terms);
  out.sample_cost = pairwise_sum(plain);
  if (referenced) {
    const auto r = static_cast<Eigen::Index>(out.reference_index);
    adj(r) += dphase * cplx(0.0, 1.0) * state(r) / std::norm(state(r));
  }

  if (p.alpha != 0.0 && n >= 2) {
    const std::size_t rows = std::size_t{1} << center_bond(n);
    const std::size_t cols = static_cast<std::size_t>(state.size()) / rows;
    const Tensor m({rows, cols}, std::vector<cplx>(state.data(), state.data() + state.size()));
    const SvdResult svd = svd_truncated(m, 1, 0.0);
    std::vector<double> upstream;
    out.entropy = detail::entropy_and_upstream(svd.singular_values, upstream);
    const Tensor g = singular_value_gradient(svd, upstream);
    for (std::size_t i = 0; i < g.size(); ++i) adj(static_cast<Eigen::Index>(i)) += p.alpha * g[i];
    out.objective += p.alpha * out.entropy;
    out.sample_cost += p.alpha * out.entropy;
  }

  // Backward through the gates.
  out.grad.assign(circuit.n_params(), 0.0);
  std::size_t offset = out.grad.size();
  for (std::size_t k = gates.size(); k-- > 0;) {
    const GateSpec& g = *gates[k];
    const Eigen::MatrixXcd inv = mats[k].adjoint();
    apply_gate_dense(state, inv, g.sites, n);  // state is now the input of gate k
    const Eigen::MatrixXcd gu = detail::gate_adjoint(adj, state, g.sites, n);
    const auto derivs = materialize_derivatives(g);
    offset -= derivs.size();
    for (std::size_t a = 0; a < derivs.size(); ++a) {
      const double v = (gu.conjugate().cwiseProduct(derivs[a])).sum().real();
      if (!std::isfinite(v)) throw NumericError("non-finite gradient for parameter " + std::to_string(offset + a));
      out.grad[offset + a] = v;
    }
    apply_gate_dense(adj, inv, g.sites, n);
  }
  return out;
}

inline GradientResult gradient(const Circuit& circuit, const MatrixProductState& psi_in, const SampleBatch& batch,
                               const CostParams& p, const GradientOptions& opts = {}) {
  return gradient(circuit, to_dense(psi_in), batch, p, opts);
}

inline nlohmann::json to_json(const CostParams& p) {
  nlohmann::json j = {{"gamma", p.gamma},
                      {"alpha", p.alpha},
                      {"n_samples", p.n_samples},
                      {"log_clamp", p.log_clamp},
                      {"phase_reference", p.phase_reference == PhaseReference::kNone ? "none" : "largest_amplitude"}};
  if (std::isinf(p.beta)) j["beta"] = "inf"; else j["beta"] = p.beta;
  return j;
}

inline CostParams cost_params_from_json(const nlohmann::json& j, CostParams p = {}) {
  p.gamma = j.value("gamma", p.gamma);
  p.alpha = j.value("alpha", p.alpha);
  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    p.beta = b.is_string() && b.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity() : b.get<double>();
  }
  p.n_samples = j.value("n_samples", p.n_samples);
  p.log_clamp = j.value("log_clamp", p.log_clamp);
  if (j.contains("phase_reference")) {
    const auto s = j.at("phase_reference").get<std::string>();
    if (s == "none") p.phase_reference = PhaseReference::kNone;
    else if (s == "largest_amplitude") p.phase_reference = PhaseReference::kLargestAmplitude;
    else throw std::invalid_argument("phase_reference must be 'none' or 'largest_amplitude'");
  }
  p.validate();
  return p;
}

inline nlohmann::json to_json(const CostReport& r) {
  return {{"soft_cost", r.soft_cost},       {"hard_avg_sign", r.hard_avg_sign}, {"imag_residual", r.imag_residual},
          {"entropy", r.entropy},           {"grad_norm", r.grad_norm},         {"clamped_amplitudes", r.clamped_amplitudes}};
}

}  // namespace posit
