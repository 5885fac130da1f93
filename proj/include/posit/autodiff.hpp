#pragma once

// Minimal reverse-accumulation tape over real scalars. Each node stores its
// value and the local partials to at most two parents; `backward` sweeps the
// tape once in reverse. `stop_gradient` produces a node with the parent's
// value and no parents, so no derivative flows through it.

#include <cmath>
#include <cstddef>
#include <vector>

namespace posit::ad {

class Tape;

struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;
  double value() const;
};

class Tape {
 public:
  Var variable(double v) { return push(v, kNone, 0.0, kNone, 0.0); }
  Var constant(double v) { return push(v, kNone, 0.0, kNone, 0.0); }

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() noexcept { nodes_.clear(); }
  double value(const Var& v) const { return nodes_[v.id].value; }

  Var unary(const Var& a, double value, double da) { return push(value, a.id, da, kNone, 0.0); }
  Var binary(const Var& a, const Var& b, double value, double da, double db) { return push(value, a.id, da, b.id, db); }

  /// d out / d node for every node on the tape.
  std::vector<double> backward(const Var& out) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[out.id] = 1.0;
    for (std::size_t k = out.id + 1; k-- > 0;) {
      const Node& n = nodes_[k];
      const double g = adj[k];
      if (g == 0.0) continue;
      if (n.lhs != kNone) adj[n.lhs] += g * n.dlhs;
      if (n.rhs != kNone) adj[n.rhs] += g * n.drhs;
    }
    return adj;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Node {
    double value;
    std::size_t lhs;
    double dlhs;
    std::size_t rhs;
    double drhs;
  };

  Var push(double v, std::size_t l, double dl, std::size_t r, double dr) {
    nodes_.push_back({v, l, dl, r, dr});
    return {this, nodes_.size() - 1};
  }

  std::vector<Node> nodes_;
};

inline double Var::value() const { return tape->value(*this); }

inline Var operator+(const Var& a, const Var& b) { return a.tape->binary(a, b, a.value() + b.value(), 1.0, 1.0); }
inline Var operator-(const Var& a, const Var& b) { return a.tape->binary(a, b, a.value() - b.value(), 1.0, -1.0); }
inline Var operator*(const Var& a, const Var& b) {
  return a.tape->binary(a, b, a.value() * b.value(), b.value(), a.value());
}
inline Var operator*(double s, const Var& a) { return a.tape->unary(a, s * a.value(), s); }
inline Var operator+(const Var& a, double s) { return a.tape->unary(a, a.value() + s, 1.0); }

/// |x| with derivative sign(x), zero at the kink.
inline Var abs(const Var& a) {
  const double v = a.value();
  return a.tape->unary(a, std::abs(v), v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
}

inline Var square(const Var& a) { return a.tape->unary(a, a.value() * a.value(), 2.0 * a.value()); }

/// log(max(x, floor)); the derivative is zero on the clamped branch.
inline Var log_clamped(const Var& a, double floor) {
  const double v = a.value();
  if (v < floor) return a.tape->unary(a, std::log(floor), 0.0);
  return a.tape->unary(a, std::log(v), 1.0 / v);
}

/// tanh(k x) evaluated on |x| and re-signed, so it is exactly odd.
inline double odd_tanh(double kx) { return std::copysign(std::tanh(std::abs(kx)), kx); }

inline Var tanh_scaled(const Var& a, double k) {
  const double t = odd_tanh(k * a.value());
  return a.tape->unary(a, t, k * (1.0 - t * t));
}

inline Var stop_gradient(const Var& a) { return a.tape->constant(a.value()); }

}  // namespace posit::ad
