#pragma once

// Training loop: apply circuit -> sample the output MPS -> corrected gradient
// of the effective cost -> Adam update. Iteration t samples with a stream that
// depends only on (seed, t), so traces are reproducible and resumable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "posit/adam.hpp"
#include "posit/circuit.hpp"
#include "posit/cost.hpp"
#include "posit/model.hpp"
#include "posit/mps.hpp"
#include "posit/rng.hpp"

namespace posit {

enum class AlphaSchedule { kConstant, kLinear };

struct CircuitConfig {
  std::size_t depth = 1;
  GateKind kind = GateKind::kRz;
  double init_scale = 0.01;
};

struct TrainConfig {
  AdamConfig adam;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 1;
  CostParams cost;
  CircuitConfig circuit;
  double cutoff = kDefaultCutoff;
  std::size_t max_rank = 0;  // 0 means unbounded
  std::size_t checkpoint_every = 100;
  std::size_t plateau_window = 50;
  double plateau_tol = 1e-6;
  std::size_t snapshot_every = 10;  // 0 disables parameter snapshots
  AlphaSchedule alpha_schedule = AlphaSchedule::kConstant;

  void validate() const {
    if (!(adam.eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(cutoff >= 0.0)) throw std::invalid_argument("cutoff must be non-negative");
    cost.validate();
  }

  std::size_t rank_limit() const { return max_rank == 0 ? kUnboundedRank : max_rank; }
};

struct IterationRecord {
  std::size_t iteration = 0;
  CostReport report;
  double effective_cost = 0.0;
  double alpha = 0.0;
  double truncation_error = 0.0;
  double max_truncation_error = 0.0;
  std::optional<std::vector<double>> params;  // parameters used at this iteration
};

struct TrainTrace {
  std::vector<IterationRecord> records;
};

enum class StopReason { kMaxIters, kPlateau, kNoParameters };

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kPlateau: return "plateau";
    case StopReason::kNoParameters: return "no_parameters";
  }
  return "unknown";
}

struct Checkpoint {
  std::size_t next_iteration = 0;
  Circuit circuit;
  AdamState adam;
  std::uint64_t seed = 0;
  std::vector<double> cost_history;
};

struct TrainOptions {
  std::function<void(const IterationRecord&)> on_iteration;
  std::function<void(const Checkpoint&)> on_checkpoint;
  const Checkpoint* resume = nullptr;
  std::optional<Circuit> initial_circuit;  // overrides the brick-wall construction
};

struct TrainResult {
  Circuit circuit;
  TrainTrace trace;
  StopReason stop_reason = StopReason::kMaxIters;
  AdamState adam;                   // state after the last update
  std::vector<double> cost_history;  // soft cost of every iteration so far
};

inline Circuit initial_circuit(std::size_t n_sites, const TrainConfig& cfg) {
  InitPolicy init;
  init.general_scale = cfg.circuit.init_scale;
  init.seed = cfg.seed;
  return brick_wall(n_sites, cfg.circuit.depth, cfg.circuit.kind, init);
}

inline double alpha_at(const TrainConfig& cfg, std::size_t iteration) {
  if (cfg.alpha_schedule == AlphaSchedule::kConstant || cfg.max_iters <= 1) return cfg.cost.alpha;
  const double frac = static_cast<double>(iteration) / static_cast<double>(cfg.max_iters - 1);
  return cfg.cost.alpha * std::max(0.0, 1.0 - frac);
}

inline std::uint64_t sampling_seed(std::uint64_t seed, std::size_t iteration) {
  return derive_stream(seed, 0x5a4d0000ULL + iteration)();
}

/// Metrics of one output state from one batch. Hard sign and |Im| are taken
/// after multiplying by `phase_fix`; the soft cost uses that phase only when
/// the cost has a phase reference.
inline CostReport batch_report(const SampleBatch& batch, double entropy, const CostParams& p, cplx phase_fix = 1.0) {
  CostReport r;
  const cplx cost_phase = p.phase_reference == PhaseReference::kNone ? cplx(1.0) : phase_fix;
  std::vector<double> soft(batch.size()), imag(batch.size()), sign(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double w = batch.weight(j);
    const cplx fixed = batch.amplitudes[j] * phase_fix;
    soft[j] = w * local_cost(batch.amplitudes[j] * cost_phase, p);
    imag[j] = w * std::abs(fixed.imag());
    sign[j] = w * hard_sign(fixed.real());
  }
  r.soft_cost = pairwise_sum(soft) + p.alpha * entropy;
  r.imag_residual = pairwise_sum(imag);
  r.hard_avg_sign = pairwise_sum(sign);
  r.entropy = entropy;
  return r;
}

inline TrainResult train(const MatrixProductState& psi_in, const TrainConfig& cfg, const TrainOptions& opts = {}) {
  cfg.validate();
  const double nrm = norm(psi_in);
  if (std::abs(nrm - 1.0) > 1e-8) throw NumericError("training input state is not normalized");
  const std::size_t n = psi_in.n_sites();
  const Eigen::VectorXcd dense_in = to_dense(psi_in);

  TrainResult result;
  AdamState adam;
  std::vector<double> history;
  std::size_t start = 0;
  if (opts.resume) {
    result.circuit = opts.resume->circuit;
    adam = opts.resume->adam;
    history = opts.resume->cost_history;
    start = opts.resume->next_iteration;
  } else {
    result.circuit = opts.initial_circuit ? *opts.initial_circuit : initial_circuit(n, cfg);
    adam = AdamState(result.circuit.n_params());
  }
  if (result.circuit.n_sites() != n) throw DimensionError("circuit size does not match the input state");
  std::vector<double> params = result.circuit.params();

  const std::size_t last = result.circuit.n_params() == 0 ? std::min(start + 1, cfg.max_iters) : cfg.max_iters;
  for (std::size_t t = start; t < last; ++t) {
    CostParams p = cfg.cost;
    p.alpha = alpha_at(cfg, t);

    const CircuitApplication out = apply_circuit(result.circuit, psi_in, cfg.cutoff, cfg.rank_limit());
    const MatrixProductState psi_out = normalize(out.state);
    const SampleBatch batch = perfect_sample(psi_out, p.n_samples, sampling_seed(cfg.seed, t));
    const double entropy = half_chain_entropy(psi_out);
    const Eigen::VectorXcd dense_out = to_dense(psi_out);
    const std::uint64_t ref = reference_index(dense_out);
    const cplx phase_fix = reference_phase(dense_out);

    IterationRecord rec;
    rec.iteration = t;
    rec.alpha = p.alpha;
    rec.report = batch_report(batch, entropy, p, phase_fix);
    rec.truncation_error = out.total_truncation_error;
    rec.max_truncation_error = out.max_truncation_error;
    if (cfg.snapshot_every > 0 && t % cfg.snapshot_every == 0) rec.params = params;

    std::vector<double> grad;
    if (result.circuit.n_params() > 0) {
      GradientOptions gopts;
      gopts.reference_index = ref;
      GradientResult g = gradient(result.circuit, dense_in, batch, p, gopts);
      rec.effective_cost = g.objective;
      rec.report.clamped_amplitudes = g.clamped_amplitudes;
      double gn = 0.0;
      for (double v : g.grad) gn += v * v;
      rec.report.grad_norm = std::sqrt(gn);
      grad = std::move(g.grad);
    } else {
      SampleBatch rotated = batch;
      if (p.phase_reference != PhaseReference::kNone)
        for (auto& a : rotated.amplitudes) a *= phase_fix;
      rec.effective_cost = effective_cost(psi_out, rotated, p);
    }
    history.push_back(rec.report.soft_cost);
    result.trace.records.push_back(rec);
    if (opts.on_iteration) opts.on_iteration(rec);

    if (result.circuit.n_params() == 0) {
      result.stop_reason = StopReason::kNoParameters;
      break;
    }

    adam_step(params, grad, adam, cfg.adam);
    result.circuit.set_params(params);

    const bool want_checkpoint = cfg.checkpoint_every > 0 && (t + 1) % cfg.checkpoint_every == 0;
    if (want_checkpoint && opts.on_checkpoint) opts.on_checkpoint({t + 1, result.circuit, adam, cfg.seed, history});

    // plateau: mean soft cost of the last window against the window before it
    const std::size_t w = cfg.plateau_window;
    if (w > 0 && history.size() >= 2 * w) {
      const std::span<const double> h(history);
      const double cur = pairwise_sum(h.last(w)) / static_cast<double>(w);
      const double prev = pairwise_sum(h.last(2 * w).first(w)) / static_cast<double>(w);
      if (std::abs(cur - prev) <= cfg.plateau_tol * std::max(std::abs(prev), 1e-12)) {
        result.stop_reason = StopReason::kPlateau;
        break;
      }
    }
  }
  result.adam = std::move(adam);
  result.cost_history = std::move(history);
  return result;
}

// --- serialization -------------------------------------------------------

inline constexpr const char* kTraceSchema = "posit.trace/1";

inline nlohmann::json to_json(const IterationRecord& r) {
  nlohmann::json j = {{"schema", kTraceSchema},
                      {"iteration", r.iteration},
                      {"soft_cost", r.report.soft_cost},
                      {"effective_cost", r.effective_cost},
                      {"hard_avg_sign", r.report.hard_avg_sign},
                      {"imag_residual", r.report.imag_residual},
                      {"entropy", r.report.entropy},
                      {"grad_norm", r.report.grad_norm},
                      {"clamped_amplitudes", r.report.clamped_amplitudes},
                      {"alpha", r.alpha},
                      {"truncation_error", r.truncation_error},
                      {"max_truncation_error", r.max_truncation_error}};
  if (r.params) j["params"] = *r.params;
  return j;
}

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"eta", c.adam.eta},
          {"adam_beta1", c.adam.beta1},
          {"adam_beta2", c.adam.beta2},
          {"adam_eps", c.adam.eps},
          {"max_iters", c.max_iters},
          {"seed", c.seed},
          {"cost", to_json(c.cost)},
          {"circuit", {{"depth", c.circuit.depth}, {"kind", to_string(c.circuit.kind)}, {"init_scale", c.circuit.init_scale}}},
          {"cutoff", c.cutoff},
          {"max_rank", c.max_rank},
          {"checkpoint_every", c.checkpoint_every},
          {"plateau_window", c.plateau_window},
          {"plateau_tol", c.plateau_tol},
          {"snapshot_every", c.snapshot_every},
          {"alpha_schedule", c.alpha_schedule == AlphaSchedule::kConstant ? "constant" : "linear"}};
}

/// Keys missing from `j` keep the values in `base`; unknown keys are errors.
inline TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c = {}) {
  static const char* known[] = {"eta",         "adam_beta1", "adam_beta2",     "adam_eps",       "max_iters",
                                "seed",        "cost",       "circuit",        "cutoff",         "max_rank",
                                "checkpoint_every", "plateau_window", "plateau_tol", "snapshot_every", "alpha_schedule"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.adam.eta = j.value("eta", c.adam.eta);
  c.adam.beta1 = j.value("adam_beta1", c.adam.beta1);
  c.adam.beta2 = j.value("adam_beta2", c.adam.beta2);
  c.adam.eps = j.value("adam_eps", c.adam.eps);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.seed = j.value("seed", c.seed);
  if (j.contains("cost")) c.cost = cost_params_from_json(j.at("cost"), c.cost);
  if (j.contains("circuit")) {
    const auto& jc = j.at("circuit");
    c.circuit.depth = jc.value("depth", c.circuit.depth);
    if (jc.contains("kind")) c.circuit.kind = gate_kind_from_string(jc.at("kind").get<std::string>());
    c.circuit.init_scale = jc.value("init_scale", c.circuit.init_scale);
  }
  c.cutoff = j.value("cutoff", c.cutoff);
  c.max_rank = j.value("max_rank", c.max_rank);
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  c.plateau_window = j.value("plateau_window", c.plateau_window);
  c.plateau_tol = j.value("plateau_tol", c.plateau_tol);
  c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
  if (j.contains("alpha_schedule")) {
    const auto s = j.at("alpha_schedule").get<std::string>();
    if (s == "constant") c.alpha_schedule = AlphaSchedule::kConstant;
    else if (s == "linear") c.alpha_schedule = AlphaSchedule::kLinear;
    else throw std::invalid_argument("alpha_schedule must be 'constant' or 'linear'");
  }
  c.validate();
  return c;
}

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json to_json(const Checkpoint& c) {
  return {{"format", "posit.checkpoint"},
          {"version", kCheckpointVersion},
          {"next_iteration", c.next_iteration},
          {"circuit", circuit_to_json(c.circuit)},
          {"adam", {{"t", c.adam.t}, {"m", c.adam.m}, {"v", c.adam.v}}},
          {"rng", {{"seed", c.seed}, {"next_iteration", c.next_iteration}}},
          {"cost_history", c.cost_history}};
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "posit.checkpoint") throw std::runtime_error("not a checkpoint file");
  if (j.at("version").get<int>() != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version");
  Checkpoint c;
  c.next_iteration = j.at("next_iteration").get<std::size_t>();
  c.circuit = circuit_from_json(j.at("circuit"));
  c.adam.t = j.at("adam").at("t").get<long long>();
  c.adam.m = j.at("adam").at("m").get<std::vector<double>>();
  c.adam.v = j.at("adam").at("v").get<std::vector<double>>();
  c.seed = j.at("rng").at("seed").get<std::uint64_t>();
  c.cost_history = j.at("cost_history").get<std::vector<double>>();
  if (c.adam.m.size() != c.circuit.n_params() || c.adam.v.size() != c.circuit.n_params()) {
    throw std::runtime_error("checkpoint Adam moments do not match the circuit");
  }
  return c;
}

}  // namespace posit
