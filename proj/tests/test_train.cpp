#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "posit/train.hpp"

using namespace posit;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.max_iters = 40;
  cfg.seed = 7;
  cfg.cost.n_samples = 200;
  cfg.circuit.depth = 1;
  cfg.circuit.kind = GateKind::kRz;
  cfg.checkpoint_every = 10;
  cfg.snapshot_every = 5;
  return cfg;
}

MatrixProductState heisenberg_mps(std::size_t n) { return compress_dense(ground_state({n, 1.0, 0.0, 0.0}).state, 0.0); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void expect_same_records(const IterationRecord& a, const IterationRecord& b) {
  EXPECT_EQ(a.iteration, b.iteration);
  EXPECT_EQ(a.report.soft_cost, b.report.soft_cost);
  EXPECT_EQ(a.report.hard_avg_sign, b.report.hard_avg_sign);
  EXPECT_EQ(a.report.imag_residual, b.report.imag_residual);
  EXPECT_EQ(a.report.grad_norm, b.report.grad_norm);
  EXPECT_EQ(a.effective_cost, b.effective_cost);
  EXPECT_EQ(a.params, b.params);
}

}  // namespace

TEST(Adam, SingleStepFromZeroState) {
  AdamConfig cfg;
  cfg.eta = 0.001;
  std::vector<double> x{0.0};
  std::vector<double> g{1.0};
  AdamState s(1);
  adam_step(x, g, s, cfg);
  // m = 0.1, v = 0.001; bias correction gives mhat = vhat = 1
  EXPECT_NEAR(x[0], -0.001 / (1.0 + 1e-8), 1e-18);
  EXPECT_NEAR(s.m[0], 0.1, 1e-16);
  EXPECT_NEAR(s.v[0], 0.001, 1e-18);
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, ZeroGradientLeavesParamsAndDecaysMoments) {
  AdamConfig cfg;
  std::vector<double> x{0.5, -1.0};
  AdamState s(2);
  s.m = {0.2, -0.4};
  s.v = {0.01, 0.04};
  s.t = 3;
  const std::vector<double> zero(2, 0.0);
  const auto before = x;
  adam_step(x, zero, s, cfg);
  EXPECT_NEAR(s.m[0], 0.18, 1e-15);
  EXPECT_NEAR(s.v[1], 0.04 * 0.999, 1e-15);
  // params only move by the decayed first moment, never from g itself
  AdamState fresh(2);
  auto y = before;
  adam_step(y, zero, fresh, cfg);
  EXPECT_EQ(y, before);
}

TEST(Adam, StepBoundedByLearningRate) {
  AdamConfig cfg;
  cfg.eta = 0.01;
  std::vector<double> x{0.0, 0.0, 0.0};
  const std::vector<double> g{3.0, -1e-4, 250.0};
  AdamState s(3);
  for (int k = 0; k < 2000; ++k) {
    const auto prev = x;
    adam_step(x, g, s, cfg);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(x[i] - prev[i]), cfg.eta * (1 + 1e-8));
  }
}

TEST(Adam, RejectsShapeMismatch) {
  std::vector<double> x(2, 0.0);
  std::vector<double> g(3, 0.0);
  AdamState s(2);
  EXPECT_THROW(adam_step(x, g, s, {}), std::invalid_argument);
}

TEST(Config, ValidationAndJson) {
  TrainConfig c = small_config();
  c.adam.eta = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);

  c = small_config();
  c.circuit.kind = GateKind::kGeneralTwoQubit;
  c.circuit.depth = 3;
  c.alpha_schedule = AlphaSchedule::kLinear;
  c.cost.beta = std::numeric_limits<double>::infinity();
  const nlohmann::json j = to_json(c);
  const TrainConfig back = train_config_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_THROW(train_config_from_json({{"learning_rate", 0.1}}), std::invalid_argument);
  EXPECT_THROW(train_config_from_json({{"alpha_schedule", "cosine"}}), std::invalid_argument);
  EXPECT_THROW(train_config_from_json({{"circuit", {{"kind", "cnot"}}}}), std::invalid_argument);
  // missing keys keep the base values
  EXPECT_EQ(train_config_from_json({{"seed", 99}}, c).circuit.depth, 3u);
}

TEST(Config, AlphaSchedule) {
  TrainConfig c;
  c.max_iters = 11;
  c.cost.alpha = 0.02;
  EXPECT_EQ(alpha_at(c, 5), 0.02);
  c.alpha_schedule = AlphaSchedule::kLinear;
  EXPECT_EQ(alpha_at(c, 0), 0.02);
  EXPECT_NEAR(alpha_at(c, 5), 0.01, 1e-15);
  EXPECT_EQ(alpha_at(c, 10), 0.0);
}

TEST(Train, RejectsUnnormalizedInput) {
  auto psi = heisenberg_mps(4);
  psi.mutable_sites()[0] *= 2.0;
  EXPECT_THROW(train(psi, small_config()), NumericError);
}

TEST(Train, TraceShapeAndMetricBounds) {
  const auto r = train(heisenberg_mps(6), small_config());
  ASSERT_FALSE(r.trace.records.empty());
  EXPECT_LE(r.trace.records.size(), 40u);
  for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
    const auto& rec = r.trace.records[i];
    EXPECT_EQ(rec.iteration, i);
    EXPECT_GE(rec.report.hard_avg_sign, -1.0);
    EXPECT_LE(rec.report.hard_avg_sign, 1.0);
    EXPECT_GE(rec.report.entropy, 0.0);
    EXPECT_GE(rec.report.imag_residual, 0.0);
    EXPECT_EQ(rec.params.has_value(), i % 5 == 0);
  }
  EXPECT_EQ(r.circuit.n_params(), 6u);
}

TEST(Train, BitReproducible) {
  const auto psi = heisenberg_mps(6);
  TrainConfig cfg = small_config();
  cfg.circuit.kind = GateKind::kGeneralTwoQubit;
  cfg.circuit.depth = 2;
  cfg.max_iters = 15;
  const auto a = train(psi, cfg);
  const auto b = train(psi, cfg);
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) expect_same_records(a.trace.records[i], b.trace.records[i]);
  EXPECT_EQ(a.circuit, b.circuit);
  cfg.seed = 8;
  EXPECT_NE(train(psi, cfg).trace.records.back().report.soft_cost, a.trace.records.back().report.soft_cost);
}

TEST(Train, CheckpointResumeReproducesTrace) {
  const auto psi = heisenberg_mps(6);
  const TrainConfig cfg = small_config();
  std::vector<Checkpoint> checkpoints;
  TrainOptions opts;
  opts.on_checkpoint = [&](const Checkpoint& c) { checkpoints.push_back(c); };
  const auto full = train(psi, cfg, opts);
  ASSERT_GE(checkpoints.size(), 2u);
  const Checkpoint& mid = checkpoints[1];
  EXPECT_EQ(mid.next_iteration, 20u);

  const Checkpoint restored = checkpoint_from_json(nlohmann::json::parse(to_json(mid).dump()));
  EXPECT_EQ(restored.circuit, mid.circuit);
  EXPECT_EQ(restored.adam, mid.adam);
  TrainOptions resume;
  resume.resume = &restored;
  const auto tail = train(psi, cfg, resume);
  ASSERT_EQ(tail.trace.records.size(), full.trace.records.size() - 20);
  for (std::size_t i = 0; i < tail.trace.records.size(); ++i) expect_same_records(tail.trace.records[i], full.trace.records[20 + i]);
  EXPECT_EQ(tail.circuit, full.circuit);
}

TEST(Train, CheckpointRejectsInconsistentMoments) {
  Checkpoint c;
  c.circuit = brick_wall(4, 1, GateKind::kRz);
  c.adam = AdamState(3);
  EXPECT_THROW(checkpoint_from_json(to_json(c)), std::runtime_error);
  EXPECT_THROW(checkpoint_from_json({{"format", "posit.circuit"}}), std::runtime_error);
}

TEST(Train, AlreadyPositiveInputDoesNotDegrade) {
  const auto gs = ground_state({8, 1.0, 0.0, 0.0});
  Eigen::VectorXcd t = marshall_transform(gs.state, even_sublattice(8));
  fix_global_phase(t);
  const auto psi = compress_dense(t, 0.0);
  TrainConfig cfg = small_config();
  cfg.max_iters = 60;
  InitPolicy zero;
  zero.random = false;
  TrainOptions opts;
  opts.initial_circuit = brick_wall(8, 1, GateKind::kRz, zero);
  const auto r = train(psi, cfg, opts);
  const double s0 = r.trace.records.front().report.hard_avg_sign;
  EXPECT_EQ(s0, 1.0);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(cfg.cost.n_samples));
  for (const auto& rec : r.trace.records) EXPECT_GE(rec.report.hard_avg_sign, s0 - 3 * sigma);
}

TEST(Train, ZeroParameterCircuitEvaluatesOnce) {
  TrainOptions opts;
  opts.initial_circuit = Circuit(6);
  const auto r = train(heisenberg_mps(6), small_config(), opts);
  EXPECT_EQ(r.stop_reason, StopReason::kNoParameters);
  ASSERT_EQ(r.trace.records.size(), 1u);
  EXPECT_EQ(r.trace.records[0].report.grad_norm, 0.0);
  EXPECT_EQ(r.circuit.n_params(), 0u);
}

TEST(Train, PlateauStopsEarly) {
  TrainConfig cfg = small_config();
  cfg.max_iters = 500;
  cfg.plateau_window = 5;
  cfg.plateau_tol = 0.5;
  const auto r = train(heisenberg_mps(6), cfg);
  EXPECT_EQ(r.stop_reason, StopReason::kPlateau);
  EXPECT_LT(r.trace.records.size(), 500u);
  EXPECT_EQ(to_string(r.stop_reason), "plateau");
}

TEST(Train, SoftCostTrendsDown) {
  TrainConfig cfg = small_config();
  cfg.max_iters = 300;
  cfg.adam.eta = 0.05;
  cfg.cost.gamma = 0.1;
  cfg.cost.phase_reference = PhaseReference::kLargestAmplitude;
  const auto r = train(heisenberg_mps(6), cfg);
  std::vector<double> costs;
  for (const auto& rec : r.trace.records) costs.push_back(rec.report.soft_cost);
  const std::size_t k = std::max<std::size_t>(1, costs.size() / 10);
  const double first = median({costs.begin(), costs.begin() + static_cast<std::ptrdiff_t>(k)});
  const double last = median({costs.end() - static_cast<std::ptrdiff_t>(k), costs.end()});
  EXPECT_LE(last, first);
}

TEST(Train, TraceRecordJson) {
  const auto r = train(heisenberg_mps(4), small_config());
  const auto j = to_json(r.trace.records[0]);
  EXPECT_EQ(j.at("schema"), kTraceSchema);
  for (const char* key : {"iteration", "soft_cost", "hard_avg_sign", "imag_residual", "entropy", "grad_norm"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j.contains("params"));
  EXPECT_FALSE(to_json(r.trace.records[1]).contains("params"));
}
