#pragma once

// Command implementations behind the `posit` executable. Each command writes
// its artifacts plus a manifest.json with SHA-256 checksums of every output.
//
// Exit codes: 0 success, 1 I/O or other runtime failure, 2 usage or config
// error, 3 ground-state solver failure, 4 numeric failure.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "posit/circuit.hpp"
#include "posit/cost.hpp"
#include "posit/model.hpp"
#include "posit/mps.hpp"
#include "posit/train.hpp"

#ifndef POSIT_VERSION
#define POSIT_VERSION "unknown"
#endif

namespace posit::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsage = 2, kSolverFailure = 3, kNumericFailure = 4 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kConfigSchema = "posit.config/1";
inline constexpr const char* kManifestSchema = "posit.manifest/1";
inline constexpr const char* kSummarySchema = "posit.summary/1";
inline constexpr const char* kMetricsSchema = "posit.metrics/1";
inline constexpr const char* kGroundStateSchema = "posit.groundstate/1";
inline constexpr const char* kSweepHeader = "# posit sweep v1";

// --- run configuration ---------------------------------------------------

struct EvalConfig {
  std::size_t n_samples = 1000;  // used above kEnumerationMaxSites
  std::uint64_t seed = 1;
};

/// Everything a run depends on besides the input state.
struct RunConfig {
  LadderModel model;
  double state_cutoff = kDefaultCutoff;  // dense ground state -> MPS compression
  TrainConfig train;
  EvalConfig eval;
};

inline nlohmann::json to_json(const LadderModel& m) {
  return {{"n_sites", m.n_sites}, {"j1", m.j1}, {"j2", m.j2}, {"jr", m.jr}};
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"schema", kConfigSchema},
          {"model", to_json(c.model)},
          {"state_cutoff", c.state_cutoff},
          {"train", posit::to_json(c.train)},
          {"eval", {{"n_samples", c.eval.n_samples}, {"seed", c.eval.seed}}}};
}

namespace detail {
inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw UsageError("unknown key '" + key + "' in " + where);
  }
}
}  // namespace detail

/// Missing keys keep the values in `base`. A manifest is accepted in place of
/// a config and contributes its recorded config.
inline RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c = {}) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  if (j.value("schema", "") == kManifestSchema) return run_config_from_json(j.at("config"), c);
  detail::reject_unknown(j, {"schema", "model", "state_cutoff", "train", "eval"}, "config");
  if (j.contains("schema") && j.at("schema") != kConfigSchema) throw UsageError("unsupported config schema");
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      detail::reject_unknown(m, {"n_sites", "j1", "j2", "jr"}, "model");
      c.model.n_sites = m.value("n_sites", c.model.n_sites);
      c.model.j1 = m.value("j1", c.model.j1);
      c.model.j2 = m.value("j2", c.model.j2);
      c.model.jr = m.value("jr", c.model.jr);
    }
    c.state_cutoff = j.value("state_cutoff", c.state_cutoff);
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"), c.train);
    if (j.contains("eval")) {
      const auto& e = j.at("eval");
      detail::reject_unknown(e, {"n_samples", "seed"}, "eval");
      c.eval.n_samples = e.value("n_samples", c.eval.n_samples);
      c.eval.seed = e.value("seed", c.eval.seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!(c.state_cutoff >= 0.0)) throw UsageError("state_cutoff must be non-negative");
  if (c.eval.n_samples == 0) throw UsageError("eval.n_samples must be positive");
  return c;
}

inline nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

inline RunConfig load_run_config(const std::optional<fs::path>& path) {
  if (!path) return {};
  return run_config_from_json(read_json_file(*path));
}

// --- files and manifest --------------------------------------------------

inline std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string() + " for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-256 initialization failed");
  }
  std::vector<char> buf(1 << 16);
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

class Manifest {
 public:
  Manifest(std::string command, nlohmann::json config) : command_(std::move(command)), config_(std::move(config)), started_(utc_timestamp()) {}

  void set_input(const fs::path& path) { inputs_.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}}); }
  void add_output(const fs::path& path) { outputs_.push_back(path); }
  void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  /// Hashes every output and writes `dir`/manifest.json.
  fs::path write(const fs::path& dir) const {
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& p : outputs_) outs.push_back({{"path", fs::relative(p, dir).string()}, {"sha256", sha256_file(p)}});
    nlohmann::json j = {{"schema", kManifestSchema}, {"command", command_},  {"code_version", POSIT_VERSION},
                        {"config", config_},         {"inputs", inputs_},    {"outputs", outs},
                        {"started", started_},       {"finished", utc_timestamp()}};
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    const fs::path path = dir / "manifest.json";
    write_json_file(path, j);
    return path;
  }

 private:
  std::string command_;
  nlohmann::json config_;
  std::string started_;
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<fs::path> outputs_;
  nlohmann::json extra_ = nlohmann::json::object();
};

// --- metrics -------------------------------------------------------------

struct StateMetrics {
  double hard_avg_sign = 0.0;
  double sign_standard_error = 0.0;
  double imag_residual = 0.0;
  double imag_standard_error = 0.0;
  double entropy = 0.0;
  std::size_t n_samples = 0;
  bool enumerated = false;
};

/// Phase-fixed average sign and mean |Im psi|: enumerated for N <= 12,
/// otherwise estimated from a perfect-sample batch.
inline StateMetrics state_metrics(const MatrixProductState& psi_in, const EvalConfig& eval) {
  const MatrixProductState psi = normalize(psi_in);
  StateMetrics m;
  m.entropy = half_chain_entropy(psi);
  Eigen::VectorXcd dense = to_dense(psi);
  if (psi.n_sites() <= kEnumerationMaxSites) {
    fix_global_phase(dense);
    std::vector<double> sign(static_cast<std::size_t>(dense.size())), imag(sign.size());
    for (Eigen::Index x = 0; x < dense.size(); ++x) {
      const double w = std::norm(dense(x));
      sign[static_cast<std::size_t>(x)] = w * hard_sign(dense(x).real());
      imag[static_cast<std::size_t>(x)] = w * std::abs(dense(x).imag());
    }
    m.hard_avg_sign = pairwise_sum(sign);
    m.imag_residual = pairwise_sum(imag);
    m.enumerated = true;
    return m;
  }
  const cplx u = reference_phase(dense);
  const SampleBatch batch = perfect_sample(psi, eval.n_samples, eval.seed);
  const auto n = static_cast<double>(batch.size());
  double s1 = 0.0, s2 = 0.0, i1 = 0.0, i2 = 0.0;
  for (const cplx& a0 : batch.amplitudes) {
    const cplx a = a0 * u;
    const double s = hard_sign(a.real()), im = std::abs(a.imag());
    s1 += s;
    s2 += s * s;
    i1 += im;
    i2 += im * im;
  }
  m.hard_avg_sign = s1 / n;
  m.imag_residual = i1 / n;
  if (n > 1) {
    m.sign_standard_error = std::sqrt(std::max(0.0, s2 / n - m.hard_avg_sign * m.hard_avg_sign) / (n - 1));
    m.imag_standard_error = std::sqrt(std::max(0.0, i2 / n - m.imag_residual * m.imag_residual) / (n - 1));
  }
  m.n_samples = batch.size();
  return m;
}

inline nlohmann::json to_json(const StateMetrics& m) {
  return {{"hard_avg_sign", m.hard_avg_sign},
          {"sign_standard_error", m.sign_standard_error},
          {"imag_residual", m.imag_residual},
          {"imag_standard_error", m.imag_standard_error},
          {"entropy", m.entropy},
          {"n_samples", m.n_samples},
          {"enumerated", m.enumerated}};
}

// --- groundstate ---------------------------------------------------------

struct GroundStateArgs {
  LadderModel model;
  double cutoff = kDefaultCutoff;
  LanczosOptions lanczos;
  fs::path out_dir;
};

struct GroundStateOutput {
  MatrixProductState state;
  GroundStateResult result;
  fs::path state_path;
};

inline void validate_model(const LadderModel& m) {
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline std::vector<std::size_t> bond_dims(const MatrixProductState& psi) {
  std::vector<std::size_t> d;
  for (std::size_t b = 1; b < psi.n_sites(); ++b) d.push_back(psi.bond_dimension(b));
  return d;
}

/// Writes state.mps, groundstate.json and manifest.json to `out_dir`.
inline GroundStateOutput cmd_groundstate(const GroundStateArgs& a) {
  validate_model(a.model);
  if (!(a.cutoff >= 0.0)) throw UsageError("cutoff must be non-negative");
  GroundStateResult gs = ground_state(a.model, a.lanczos);
  MatrixProductState psi = compress_dense(gs.state, a.cutoff);
  fs::create_directories(a.out_dir);
  const fs::path state_path = a.out_dir / "state.mps";
  save_mps(state_path, psi);
  const nlohmann::json meta = {{"schema", kGroundStateSchema},
                               {"model", to_json(a.model)},
                               {"energy", gs.energy},
                               {"energy_per_site", gs.energy / static_cast<double>(a.model.n_sites)},
                               {"degeneracy_gap", gs.degeneracy_gap},
                               {"residual", gs.residual},
                               {"iterations", gs.iterations},
                               {"cutoff", a.cutoff},
                               {"max_bond", psi.max_bond()},
                               {"bond_dims", bond_dims(psi)},
                               {"half_chain_entropy", half_chain_entropy(psi)},
                               {"state_file", state_path.filename().string()}};
  const fs::path meta_path = a.out_dir / "groundstate.json";
  write_json_file(meta_path, meta);
  Manifest man("groundstate", {{"model", to_json(a.model)},
                               {"cutoff", a.cutoff},
                               {"lanczos",
                                {{"krylov_dim", a.lanczos.krylov_dim},
                                 {"max_restarts", a.lanczos.max_restarts},
                                 {"tolerance", a.lanczos.tolerance},
                                 {"seed", a.lanczos.seed}}}});
  man.add_output(state_path);
  man.add_output(meta_path);
  man.write(a.out_dir);
  return {std::move(psi), std::move(gs), state_path};
}

// --- positivize ----------------------------------------------------------

struct PositivizeArgs {
  fs::path state_path;
  RunConfig config;
  std::optional<std::size_t> depth;
  std::optional<GateKind> kind;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iters;
  std::optional<fs::path> resume;
  fs::path out_dir;
};

struct PositivizeOutput {
  nlohmann::json summary;
  Circuit circuit;
};

inline RunConfig effective_config(const PositivizeArgs& a) {
  RunConfig c = a.config;
  if (a.depth) c.train.circuit.depth = *a.depth;
  if (a.kind) c.train.circuit.kind = *a.kind;
  if (a.seed) c.train.seed = *a.seed;
  if (a.max_iters) c.train.max_iters = *a.max_iters;
  try {
    c.train.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

/// Trains on an in-memory state and writes trace.jsonl, circuit.json,
/// checkpoint.json, summary.json and manifest.json to `out_dir`.
inline PositivizeOutput positivize_state(const MatrixProductState& psi_in, const RunConfig& cfg, const fs::path& out_dir,
                                         const std::optional<fs::path>& input_path = std::nullopt,
                                         const std::optional<fs::path>& resume = std::nullopt) {
  fs::create_directories(out_dir);
  const std::size_t n = psi_in.n_sites();
  const auto start = std::chrono::steady_clock::now();

  std::optional<Checkpoint> ckpt;
  if (resume) ckpt = checkpoint_from_json(read_json_file(*resume));
  if (ckpt && ckpt->circuit.n_sites() != n) throw DimensionError("checkpoint circuit does not match the input state");

  TrainOptions opts;
  if (!ckpt && cfg.train.circuit.depth == 0) opts.initial_circuit = Circuit(n);
  if (ckpt) opts.resume = &*ckpt;

  const fs::path trace_path = out_dir / "trace.jsonl";
  std::ofstream trace(trace_path, resume ? std::ios::app : std::ios::trunc);
  if (!trace) throw std::runtime_error("cannot open " + trace_path.string());
  opts.on_iteration = [&](const IterationRecord& r) { trace << posit::to_json(r).dump() << '\n' << std::flush; };
  const fs::path ckpt_path = out_dir / "checkpoint.json";
  opts.on_checkpoint = [&](const Checkpoint& c) {
    const fs::path tmp = out_dir / "checkpoint.json.tmp";
    write_json_file(tmp, posit::to_json(c));
    fs::rename(tmp, ckpt_path);
  };

  const StateMetrics initial = state_metrics(psi_in, cfg.eval);
  TrainResult r = train(psi_in, cfg.train, opts);
  trace.close();

  const std::size_t next = r.trace.records.empty() ? (ckpt ? ckpt->next_iteration : 0) : r.trace.records.back().iteration + 1;
  opts.on_checkpoint({next, r.circuit, r.adam, cfg.train.seed, r.cost_history});

  const fs::path circuit_path = out_dir / "circuit.json";
  write_json_file(circuit_path, circuit_to_json(r.circuit));

  const CircuitApplication out = apply_circuit(r.circuit, psi_in, cfg.train.cutoff, cfg.train.rank_limit());
  const StateMetrics final_metrics = state_metrics(out.state, cfg.eval);
  const IterationRecord* last = r.trace.records.empty() ? nullptr : &r.trace.records.back();
  nlohmann::json summary = {{"schema", kSummarySchema},
                            {"n_sites", n},
                            {"depth", r.circuit.depth()},
                            {"gate_kind", to_string(cfg.train.circuit.kind)},
                            {"n_params", r.circuit.n_params()},
                            {"iterations", next},
                            {"stop_reason", to_string(r.stop_reason)},
                            {"hard_avg_sign", final_metrics.hard_avg_sign},
                            {"sign_standard_error", final_metrics.sign_standard_error},
                            {"imag_residual", final_metrics.imag_residual},
                            {"entropy", final_metrics.entropy},
                            {"enumerated", final_metrics.enumerated},
                            {"n_samples", final_metrics.n_samples},
                            {"final_soft_cost", last ? last->report.soft_cost : std::numeric_limits<double>::quiet_NaN()},
                            {"truncation_error_total", out.total_truncation_error},
                            {"truncation_error_max", out.max_truncation_error},
                            {"initial", to_json(initial)}};
  const fs::path summary_path = out_dir / "summary.json";
  write_json_file(summary_path, summary);

  Manifest man("positivize", to_json(cfg));
  if (input_path) man.set_input(*input_path);
  if (resume) man.set("resumed_from", resume->string());
  man.set("elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  for (const auto& p : {trace_path, circuit_path, ckpt_path, summary_path}) man.add_output(p);
  man.write(out_dir);
  return {std::move(summary), std::move(r.circuit)};
}

inline PositivizeOutput cmd_positivize(const PositivizeArgs& a) {
  const RunConfig cfg = effective_config(a);
  const MatrixProductState psi = load_mps(a.state_path);
  return positivize_state(psi, cfg, a.out_dir, a.state_path, a.resume);
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  fs::path state_path;
  std::optional<fs::path> circuit_path;
  RunConfig config;
  std::optional<fs::path> out;
};

inline nlohmann::json cmd_eval(const EvalArgs& a) {
  const MatrixProductState psi = load_mps(a.state_path);
  Circuit c(psi.n_sites());
  if (a.circuit_path) c = circuit_from_json(read_json_file(*a.circuit_path));
  if (c.n_sites() != psi.n_sites()) {
    throw UsageError("circuit acts on " + std::to_string(c.n_sites()) + " sites, state has " + std::to_string(psi.n_sites()));
  }
  const CircuitApplication out = apply_circuit(c, psi, a.config.train.cutoff, a.config.train.rank_limit());
  nlohmann::json j = to_json(state_metrics(out.state, a.config.eval));
  j["schema"] = kMetricsSchema;
  j["n_sites"] = psi.n_sites();
  j["depth"] = c.depth();
  j["truncation_error_total"] = out.total_truncation_error;
  j["truncation_error_max"] = out.max_truncation_error;
  if (a.out) {
    fs::create_directories(a.out->parent_path().empty() ? fs::path(".") : a.out->parent_path());
    write_json_file(*a.out, j);
    Manifest man("eval", to_json(a.config));
    man.set_input(a.state_path);
    if (a.circuit_path) man.set_input(*a.circuit_path);
    man.add_output(*a.out);
    const fs::path dir = a.out->parent_path().empty() ? fs::path(".") : a.out->parent_path();
    man.write(dir);
  }
  return j;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::vector<double> jr;
  std::vector<std::size_t> depth;
  std::vector<std::size_t> n;
  RunConfig config;
  std::size_t max_runs = 64;
  fs::path out_dir;
};

inline std::string run_name(double jr, std::size_t depth, std::size_t n) {
  std::ostringstream s;
  s << "n" << n << "_jr" << jr << "_d" << depth;
  return s.str();
}

/// One CSV row per grid point, flushed as soon as the run ends; failed runs
/// are recorded with their status and the sweep continues.
inline std::vector<nlohmann::json> cmd_sweep(const SweepArgs& a) {
  if (a.jr.empty() || a.depth.empty() || a.n.empty()) throw UsageError("sweep grid is empty: give --jr, --depth and --n");
  const std::size_t total = a.jr.size() * a.depth.size() * a.n.size();
  if (total > a.max_runs) {
    throw UsageError("sweep grid has " + std::to_string(total) + " runs, above the cap of " + std::to_string(a.max_runs));
  }
  for (std::size_t n : a.n) {
    LadderModel m = a.config.model;
    m.n_sites = n;
    validate_model(m);
  }
  fs::create_directories(a.out_dir / "runs");
  const fs::path csv_path = a.out_dir / "sweep.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
  csv << kSweepHeader << '\n' << "jr,depth,n,final_sign,final_imag,sign_standard_error,entropy,iterations,status\n" << std::flush;
  csv << std::setprecision(17);

  Manifest man("sweep", to_json(a.config));
  man.set("grid", {{"jr", a.jr}, {"depth", a.depth}, {"n", a.n}});
  std::vector<nlohmann::json> rows;
  std::map<std::pair<std::size_t, double>, MatrixProductState> states;
  for (std::size_t n : a.n) {
    for (double jr : a.jr) {
      for (std::size_t depth : a.depth) {
        nlohmann::json row = {{"jr", jr}, {"depth", depth}, {"n", n}};
        try {
          auto key = std::make_pair(n, jr);
          if (!states.contains(key)) {
            LadderModel m = a.config.model;
            m.n_sites = n;
            m.jr = jr;
            states.emplace(key, compress_dense(ground_state(m).state, a.config.state_cutoff));
          }
          RunConfig cfg = a.config;
          cfg.model.n_sites = n;
          cfg.model.jr = jr;
          cfg.train.circuit.depth = depth;
          const fs::path dir = a.out_dir / "runs" / run_name(jr, depth, n);
          const auto out = positivize_state(states.at(key), cfg, dir);
          row["final_sign"] = out.summary.at("hard_avg_sign");
          row["final_imag"] = out.summary.at("imag_residual");
          row["sign_standard_error"] = out.summary.at("sign_standard_error");
          row["entropy"] = out.summary.at("entropy");
          row["iterations"] = out.summary.at("iterations");
          row["status"] = "ok";
          man.add_output(dir / "summary.json");
        } catch (const SolverError& e) {
          row["status"] = std::string("solver_error: ") + e.what();
        } catch (const NumericError& e) {
          row["status"] = std::string("numeric_error: ") + e.what();
        } catch (const std::exception& e) {
          row["status"] = std::string("error: ") + e.what();
        }
        auto num = [&](const char* k) -> std::string {
          if (!row.contains(k)) return "";
          std::ostringstream s;
          s << std::setprecision(17) << row.at(k).get<double>();
          return s.str();
        };
        std::string status = row.at("status").get<std::string>();
        for (char& ch : status)
          if (ch == ',' || ch == '\n') ch = ' ';
        csv << jr << ',' << depth << ',' << n << ',' << num("final_sign") << ',' << num("final_imag") << ','
            << num("sign_standard_error") << ',' << num("entropy") << ','
            << (row.contains("iterations") ? std::to_string(row.at("iterations").get<std::size_t>()) : "") << ',' << status
            << '\n'
            << std::flush;
        rows.push_back(std::move(row));
      }
    }
  }
  csv.close();
  man.add_output(csv_path);
  man.write(a.out_dir);
  return rows;
}

/// Maps an exception escaping a command to its exit code.
inline int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const UsageError&) {
    return kUsage;
  } catch (const SolverError&) {
    return kSolverFailure;
  } catch (const NumericError&) {
    return kNumericFailure;
  } catch (const DimensionError&) {
    return kUsage;
  } catch (const std::invalid_argument&) {
    return kUsage;
  } catch (...) {
    return kRuntimeFailure;
  }
}

}  // namespace posit::cli
