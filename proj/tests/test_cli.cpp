#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "oracles.hpp"
#include "posit/commands.hpp"

using namespace posit;
namespace cli = posit::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("posit_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(POSIT_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_manifest_consistent(const fs::path& dir) {
  const auto m = cli::read_json_file(dir / "manifest.json");
  EXPECT_EQ(m.at("schema"), cli::kManifestSchema);
  EXPECT_TRUE(m.contains("code_version"));
  EXPECT_TRUE(m.contains("started"));
  EXPECT_TRUE(m.contains("finished"));
  EXPECT_TRUE(m.at("config").is_object());
  ASSERT_FALSE(m.at("outputs").empty());
  for (const auto& o : m.at("outputs")) {
    const fs::path p = dir / o.at("path").get<std::string>();
    ASSERT_TRUE(fs::exists(p)) << p;
    EXPECT_EQ(o.at("sha256").get<std::string>(), cli::sha256_file(p)) << p;
  }
  for (const auto& i : m.at("inputs")) EXPECT_EQ(i.at("sha256").get<std::string>().size(), 64u);
}

cli::RunConfig quick_config(std::size_t iters) {
  cli::RunConfig c;
  c.train.max_iters = iters;
  c.train.cost.n_samples = 200;
  c.train.checkpoint_every = 5;
  c.train.seed = 3;
  return c;
}

fs::path write_groundstate(const fs::path& dir, std::size_t n, double j2 = 0.0, double jr = 0.0) {
  cli::GroundStateArgs a;
  a.model = {n, 1.0, j2, jr};
  a.out_dir = dir;
  return cli::cmd_groundstate(a).state_path;
}

std::vector<nlohmann::json> read_trace(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream is(p);
  for (std::string line; std::getline(is, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST(Sha256, KnownDigest) {
  const fs::path d = scratch_dir("sha");
  std::ofstream(d / "abc") << "abc";
  EXPECT_EQ(cli::sha256_file(d / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(GroundStateCommand, TwoSiteMetadata) {
  const fs::path d = scratch_dir("gs2");
  cli::GroundStateArgs a;
  a.model = {2, 1.0, 0.0, 0.0};
  a.out_dir = d;
  cli::cmd_groundstate(a);
  const auto meta = cli::read_json_file(d / "groundstate.json");
  EXPECT_EQ(meta.at("schema"), cli::kGroundStateSchema);
  EXPECT_NEAR(meta.at("energy").get<double>(), -0.75, 1e-12);
  EXPECT_EQ(load_mps(d / "state.mps").n_sites(), 2u);
  expect_manifest_consistent(d);
}

TEST(GroundStateCommand, MatchesDenseOracle) {
  const fs::path d = scratch_dir("gs8");
  cli::GroundStateArgs a;
  a.model = {8, 1.0, 0.5, 0.0};
  a.out_dir = d;
  cli::cmd_groundstate(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::ladder_hamiltonian(8, 1.0, 0.5, 0.0));
  EXPECT_NEAR(cli::read_json_file(d / "groundstate.json").at("energy").get<double>(), es.eigenvalues()(0), 1e-9);
}

TEST(GroundStateCommand, SizeCapIsUsageError) {
  cli::GroundStateArgs a;
  a.model = {22, 1.0, 0.0, 0.0};
  a.out_dir = scratch_dir("gs22");
  EXPECT_THROW(cli::cmd_groundstate(a), cli::UsageError);
  EXPECT_EQ(run_tool("groundstate --n 22 --out " + a.out_dir.string()), cli::kUsage);
}

TEST(PositivizeCommand, ArtifactsFollowTheirSchemas) {
  const fs::path d = scratch_dir("pos");
  const fs::path state = write_groundstate(d / "gs", 6);
  cli::PositivizeArgs a;
  a.state_path = state;
  a.config = quick_config(12);
  a.out_dir = d / "run";
  const auto out = cli::cmd_positivize(a);

  const auto trace = read_trace(d / "run" / "trace.jsonl");
  ASSERT_EQ(trace.size(), 12u);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_EQ(trace[i].at("schema"), kTraceSchema);
    EXPECT_EQ(trace[i].at("iteration").get<std::size_t>(), i);
    EXPECT_GE(trace[i].at("hard_avg_sign").get<double>(), -1.0);
    EXPECT_LE(trace[i].at("hard_avg_sign").get<double>(), 1.0);
  }
  const auto summary = cli::read_json_file(d / "run" / "summary.json");
  EXPECT_EQ(summary, out.summary);
  EXPECT_EQ(summary.at("schema"), cli::kSummarySchema);
  for (const char* k : {"hard_avg_sign", "imag_residual", "entropy", "truncation_error_total", "truncation_error_max",
                        "iterations", "stop_reason", "enumerated", "initial"})
    EXPECT_TRUE(summary.contains(k)) << k;
  EXPECT_TRUE(summary.at("enumerated").get<bool>());
  EXPECT_EQ(circuit_from_json(cli::read_json_file(d / "run" / "circuit.json")), out.circuit);
  const Checkpoint ck = checkpoint_from_json(cli::read_json_file(d / "run" / "checkpoint.json"));
  EXPECT_EQ(ck.next_iteration, 12u);
  EXPECT_EQ(ck.circuit, out.circuit);
  expect_manifest_consistent(d / "run");
  expect_manifest_consistent(d / "gs");
}

TEST(PositivizeCommand, DepthZeroReportsInputMetrics) {
  const fs::path d = scratch_dir("pos0");
  const fs::path state = write_groundstate(d / "gs", 8);
  cli::PositivizeArgs a;
  a.state_path = state;
  a.config = quick_config(10);
  a.depth = 0;
  a.out_dir = d / "run";
  const auto s = cli::cmd_positivize(a).summary;
  EXPECT_EQ(s.at("depth"), 0);
  EXPECT_EQ(s.at("stop_reason"), "no_parameters");
  for (const char* k : {"hard_avg_sign", "imag_residual", "entropy"}) EXPECT_EQ(s.at(k), s.at("initial").at(k)) << k;
}

TEST(PositivizeCommand, ManifestReplayIsBitExact) {
  const fs::path d = scratch_dir("replay");
  const fs::path state = write_groundstate(d / "gs", 6);
  cli::PositivizeArgs a;
  a.state_path = state;
  a.config = quick_config(15);
  a.kind = GateKind::kGeneralTwoQubit;
  a.depth = 2;
  a.out_dir = d / "a";
  cli::cmd_positivize(a);
  cli::PositivizeArgs b;
  b.state_path = state;
  b.config = cli::run_config_from_json(cli::read_json_file(d / "a" / "manifest.json"));
  b.out_dir = d / "b";
  cli::cmd_positivize(b);
  EXPECT_EQ(slurp(d / "a" / "trace.jsonl"), slurp(d / "b" / "trace.jsonl"));
  EXPECT_EQ(slurp(d / "a" / "summary.json"), slurp(d / "b" / "summary.json"));
  EXPECT_EQ(slurp(d / "a" / "circuit.json"), slurp(d / "b" / "circuit.json"));
}

TEST(PositivizeCommand, ResumeFromFinalCheckpointContinuesTrace) {
  const fs::path d = scratch_dir("resume");
  const fs::path state = write_groundstate(d / "gs", 6);
  cli::PositivizeArgs full;
  full.state_path = state;
  full.config = quick_config(20);
  full.out_dir = d / "full";
  cli::cmd_positivize(full);

  cli::PositivizeArgs first = full;
  first.max_iters = 8;
  first.out_dir = d / "split";
  cli::cmd_positivize(first);
  fs::copy_file(d / "split" / "checkpoint.json", d / "ck8.json");
  cli::PositivizeArgs second = full;
  second.out_dir = d / "split";
  second.resume = d / "ck8.json";
  cli::cmd_positivize(second);
  EXPECT_EQ(slurp(d / "full" / "trace.jsonl"), slurp(d / "split" / "trace.jsonl"));
  EXPECT_EQ(slurp(d / "full" / "circuit.json"), slurp(d / "split" / "circuit.json"));
}

TEST(EvalCommand, IdentityOnPositiveState) {
  const fs::path d = scratch_dir("eval_pos");
  const auto gs = ground_state({8, 1.0, 0.0, 0.0});
  Eigen::VectorXcd t = marshall_transform(gs.state, even_sublattice(8));
  save_mps(d / "pos.mps", compress_dense(t, 0.0));
  cli::EvalArgs a;
  a.state_path = d / "pos.mps";
  a.out = d / "metrics.json";
  const auto j = cli::cmd_eval(a);
  EXPECT_EQ(j.at("schema"), cli::kMetricsSchema);
  EXPECT_GE(j.at("hard_avg_sign").get<double>(), 1.0 - 1e-12);
  EXPECT_TRUE(j.at("enumerated").get<bool>());
  EXPECT_EQ(cli::read_json_file(d / "metrics.json"), j);
  expect_manifest_consistent(d);
}

TEST(EvalCommand, MarshallCircuitOnHeisenberg) {
  const fs::path d = scratch_dir("eval_marshall");
  const fs::path state = write_groundstate(d, 8);
  Circuit c(8);
  Layer l;
  for (std::size_t s = 0; s < 8; ++s) l.push_back({GateKind::kRz, {s}, {s % 2 ? -std::numbers::pi / 2 : std::numbers::pi / 2}});
  c.add_layer(l);
  cli::write_json_file(d / "marshall.json", circuit_to_json(c));
  cli::EvalArgs a;
  a.state_path = state;
  a.circuit_path = d / "marshall.json";
  EXPECT_GE(cli::cmd_eval(a).at("hard_avg_sign").get<double>(), 1.0 - 1e-10);
}

TEST(EvalCommand, SampledAboveEnumerationLimit) {
  const fs::path d = scratch_dir("eval_sampled");
  save_mps(d / "r.mps", random_mps(14, 4, 5));
  InitPolicy init;
  init.general_scale = 0.5;
  cli::write_json_file(d / "c.json", circuit_to_json(brick_wall(14, 2, GateKind::kGeneralTwoQubit, init)));
  cli::EvalArgs a;
  a.state_path = d / "r.mps";
  a.circuit_path = d / "c.json";
  const auto j = cli::cmd_eval(a);
  EXPECT_FALSE(j.at("enumerated").get<bool>());
  EXPECT_EQ(j.at("n_samples"), 1000);
  EXPECT_GT(j.at("sign_standard_error").get<double>(), 0.0);
  EXPECT_GE(j.at("hard_avg_sign").get<double>(), -1.0);
  EXPECT_LE(j.at("hard_avg_sign").get<double>(), 1.0);
}

TEST(EvalCommand, SizeMismatchIsUsageError) {
  const fs::path d = scratch_dir("eval_mismatch");
  save_mps(d / "r.mps", random_mps(6, 2, 1));
  cli::write_json_file(d / "c.json", circuit_to_json(brick_wall(4, 1, GateKind::kRz)));
  cli::EvalArgs a;
  a.state_path = d / "r.mps";
  a.circuit_path = d / "c.json";
  EXPECT_THROW(cli::cmd_eval(a), cli::UsageError);
  EXPECT_EQ(run_tool("eval --state " + (d / "r.mps").string() + " --circuit " + (d / "c.json").string()), cli::kUsage);
}

TEST(SweepCommand, SinglePointMatchesPositivize) {
  const fs::path d = scratch_dir("sweep1");
  cli::SweepArgs s;
  s.jr = {0.5};
  s.depth = {1};
  s.n = {6};
  s.config = quick_config(10);
  s.config.train.circuit.kind = GateKind::kGeneralTwoQubit;
  s.out_dir = d / "sweep";
  const auto rows = cli::cmd_sweep(s);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("status"), "ok");

  const fs::path state = write_groundstate(d / "gs", 6, 0.0, 0.5);
  cli::PositivizeArgs p;
  p.state_path = state;
  p.config = s.config;
  p.depth = 1;
  p.out_dir = d / "pos";
  const auto out = cli::cmd_positivize(p);
  const fs::path run = d / "sweep" / "runs" / cli::run_name(0.5, 1, 6);
  EXPECT_EQ(slurp(run / "trace.jsonl"), slurp(d / "pos" / "trace.jsonl"));
  EXPECT_EQ(rows[0].at("final_sign"), out.summary.at("hard_avg_sign"));

  std::ifstream csv(d / "sweep" / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, cli::kSweepHeader);
  std::getline(csv, line);
  EXPECT_EQ(line, "jr,depth,n,final_sign,final_imag,sign_standard_error,entropy,iterations,status");
  std::getline(csv, line);
  std::vector<std::string> cells;
  std::stringstream ls(line);
  for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 9u);
  EXPECT_EQ(std::stod(cells[0]), 0.5);
  EXPECT_EQ(std::stod(cells[3]), out.summary.at("hard_avg_sign").get<double>());
  EXPECT_EQ(cells[8], "ok");
  expect_manifest_consistent(d / "sweep");
}

TEST(SweepCommand, GridValidation) {
  cli::SweepArgs s;
  s.out_dir = scratch_dir("sweep_bad");
  s.jr = {0.25};
  s.n = {6};
  EXPECT_THROW(cli::cmd_sweep(s), cli::UsageError);
  s.depth = {1, 2, 3};
  s.jr = {0.1, 0.2, 0.3};
  s.max_runs = 8;
  EXPECT_THROW(cli::cmd_sweep(s), cli::UsageError);
  s.max_runs = 64;
  s.n = {24};
  EXPECT_THROW(cli::cmd_sweep(s), cli::UsageError);
  EXPECT_EQ(run_tool("sweep --jr 0.25 --n 6 --out-dir " + s.out_dir.string()), cli::kUsage);
}

TEST(Config, PrintConfigRoundTrips) {
  const fs::path d = scratch_dir("config");
  const std::string cmd = std::string(POSIT_TOOL) + " print-config > " + (d / "c.json").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto j = cli::read_json_file(d / "c.json");
  EXPECT_EQ(j.at("schema"), cli::kConfigSchema);
  EXPECT_EQ(cli::to_json(cli::run_config_from_json(j)), j);
  for (const char* k : {"eta", "adam_beta1", "max_iters", "seed", "cost", "circuit", "cutoff"}) EXPECT_TRUE(j.at("train").contains(k)) << k;
  EXPECT_EQ(j.at("train").at("cost").at("gamma"), 0.5);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(cli::run_config_from_json({{"trian", {}}}), cli::UsageError);
  EXPECT_THROW(cli::run_config_from_json({{"train", {{"etaa", 0.1}}}}), cli::UsageError);
  EXPECT_THROW(cli::run_config_from_json({{"model", {{"nsites", 4}}}}), cli::UsageError);
  const fs::path d = scratch_dir("badcfg");
  std::ofstream(d / "bad.json") << R"({"train": {"cost": {"gamma": 3}}})";
  save_mps(d / "s.mps", random_mps(4, 2, 1));
  EXPECT_EQ(run_tool("positivize --state " + (d / "s.mps").string() + " --config " + (d / "bad.json").string() +
                     " --out-dir " + (d / "o").string()),
            cli::kUsage);
}

TEST(Presets, AllParse) {
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(POSIT_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW(cli::load_run_config(e.path())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 4u);
}

TEST(ExitCodes, SolverAndNumericFailures) {
  const fs::path d = scratch_dir("exit");
  EXPECT_EQ(run_tool("groundstate --n 10 --jr 0.3 --krylov-dim 3 --max-restarts 0 --tolerance 1e-14 --out " + (d / "gs").string()),
            cli::kSolverFailure);
  auto psi = random_mps(4, 2, 1);
  psi.mutable_sites()[0] *= 3.0;
  save_mps(d / "bad.mps", psi);
  EXPECT_EQ(run_tool("positivize --state " + (d / "bad.mps").string() + " --out-dir " + (d / "o").string()), cli::kNumericFailure);
  EXPECT_EQ(run_tool("positivize --state " + (d / "missing.mps").string() + " --out-dir " + (d / "o").string()), cli::kUsage);
  EXPECT_EQ(run_tool("frobnicate"), cli::kUsage);
  EXPECT_EQ(run_tool("--help"), 0);
}
