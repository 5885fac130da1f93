#pragma once

// Reference evolution and cost oracles built on Kronecker-embedded dense
// matrices. Only the gate list of a Circuit is read.

#include <cmath>
#include <optional>
#include <vector>

#include "oracles.hpp"
#include "posit/circuit.hpp"
#include "posit/mps.hpp"

namespace oracle {

/// Hermitian 4x4 from 16 reals: diagonal first, then (re, im) of the upper
/// triangle row by row.
inline Mat generator(const std::vector<double>& p) {
  Mat h = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) h(i, i) = p[static_cast<std::size_t>(i)];
  std::size_t k = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j, k += 2) {
      h(i, j) = cplx(p[k], p[k + 1]);
      h(j, i) = std::conj(h(i, j));
    }
  return h;
}

inline Vec kron_evolve(const posit::Circuit& c, Vec v) {
  const std::size_t n = c.n_sites();
  for (const auto& layer : c.layers())
    for (const auto& g : layer) {
      if (g.kind == posit::GateKind::kRz) {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = std::exp(cplx(0, -g.params[0] / 2));
        m(1, 1) = std::exp(cplx(0, g.params[0] / 2));
        v = embed_one(m, g.sites[0], n) * v;
      } else {
        v = embed_two(expm_minus_i(generator(g.params)), g.sites[0], n) * v;
      }
    }
  return v;
}

inline double half_chain_entropy(const Vec& psi, std::size_t n) { return von_neumann(reduced_density(psi, n / 2, n)); }

inline double local_cost(cplx a, double gamma, double beta) {
  const double s = std::isinf(beta) ? (a.real() > 0 ? 1.0 : (a.real() < 0 ? -1.0 : 0.0))
                                    : 2.0 / (1.0 + std::exp(-beta * a.real())) - 1.0;
  return gamma * std::abs(a.imag()) - (1.0 - gamma) * s;
}

/// Sum_s |psi(s)|^2 C(s) + alpha S for the evolved state.
inline double expectation_cost(const Vec& out, std::size_t n, double gamma, double beta, double alpha,
                               std::optional<std::uint64_t> ref = std::nullopt) {
  cplx u = 1.0;
  if (ref) u = std::conj(out(static_cast<Eigen::Index>(*ref))) / std::abs(out(static_cast<Eigen::Index>(*ref)));
  double s = 0.0;
  for (Eigen::Index x = 0; x < out.size(); ++x) s += std::norm(out(x)) * local_cost(out(x) * u, gamma, beta);
  return s + alpha * half_chain_entropy(out, n);
}

template <class F>
std::vector<double> central_differences(const F& f, std::vector<double> theta, double h) {
  std::vector<double> g(theta.size());
  for (std::size_t a = 0; a < theta.size(); ++a) {
    const double t0 = theta[a];
    theta[a] = t0 + h;
    const double fp = f(theta);
    theta[a] = t0 - h;
    const double fm = f(theta);
    theta[a] = t0;
    g[a] = (fp - fm) / (2 * h);
  }
  return g;
}

/// Effective cost with the stop-gradient values frozen at construction,
/// evaluated on exact amplitudes of the evolved state.
class EffectiveCost {
 public:
  EffectiveCost(const posit::Circuit& c, Vec psi_in, const posit::SampleBatch& batch, double gamma, double beta, double alpha,
                std::optional<std::uint64_t> ref = std::nullopt)
      : circuit_(c), psi_in_(std::move(psi_in)), gamma_(gamma), beta_(beta), alpha_(alpha), ref_(ref) {
    const Vec out = kron_evolve(c, psi_in_);
    const cplx u = phase(out);
    for (std::size_t j = 0; j < batch.size(); ++j) {
      const auto x = posit::basis_index(batch.configuration(j));
      idx_.push_back(x);
      w_.push_back(batch.weight(j));
      frozen_.push_back(local_cost(out(static_cast<Eigen::Index>(x)) * u, gamma_, beta_));
    }
  }

  double operator()(const std::vector<double>& theta) const {
    posit::Circuit c = circuit_;
    c.set_params(theta);
    const Vec out = kron_evolve(c, psi_in_);
    const cplx u = phase(out);
    double s = 0.0;
    for (std::size_t j = 0; j < idx_.size(); ++j) {
      const cplx a = out(static_cast<Eigen::Index>(idx_[j])) * u;
      s += w_[j] * (local_cost(a, gamma_, beta_) + frozen_[j] * std::log(std::norm(a)));
    }
    return s + alpha_ * half_chain_entropy(out, c.n_sites());
  }

 private:
  cplx phase(const Vec& out) const {
    if (!ref_) return 1.0;
    const cplx r = out(static_cast<Eigen::Index>(*ref_));
    return std::conj(r) / std::abs(r);
  }

  posit::Circuit circuit_;
  Vec psi_in_;
  double gamma_, beta_, alpha_;
  std::optional<std::uint64_t> ref_;
  std::vector<std::uint64_t> idx_;
  std::vector<double> w_, frozen_;
};

/// |got - want| <= atol + rtol |want| for every entry.
inline bool all_close(const std::vector<double>& got, const std::vector<double>& want, double rtol, double atol,
                      double* worst = nullptr) {
  if (got.size() != want.size()) return false;
  bool ok = true;
  double w = 0.0;
  for (std::size_t a = 0; a < got.size(); ++a) {
    const double excess = std::abs(got[a] - want[a]) / (atol + rtol * std::abs(want[a]));
    w = std::max(w, excess);
    ok = ok && excess <= 1.0;
  }
  if (worst) *worst = w;
  return ok;
}

}  // namespace oracle
