// posit: ground states, positivization runs, evaluation and sweeps.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "posit/commands.hpp"

namespace cli = posit::cli;
namespace fs = std::filesystem;

namespace {

void print_rows(const std::vector<nlohmann::json>& rows) {
  for (const auto& r : rows) std::cout << r.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn local circuits that remove the sign structure of spin-ladder ground states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", POSIT_VERSION);

  // groundstate
  cli::GroundStateArgs gs;
  std::string gs_out;
  auto* g = app.add_subcommand("groundstate", "Lanczos ground state of the ladder, written as an MPS");
  g->add_option("--n", gs.model.n_sites, "number of spins (even, <= 20)")->capture_default_str();
  g->add_option("--j1", gs.model.j1, "nearest-neighbour coupling")->capture_default_str();
  g->add_option("--j2", gs.model.j2, "next-nearest-neighbour coupling")->capture_default_str();
  g->add_option("--jr", gs.model.jr, "ring-exchange coupling")->capture_default_str();
  g->add_option("--cutoff", gs.cutoff, "discarded-weight cutoff of the MPS compression")->capture_default_str();
  g->add_option("--krylov-dim", gs.lanczos.krylov_dim)->capture_default_str();
  g->add_option("--max-restarts", gs.lanczos.max_restarts)->capture_default_str();
  g->add_option("--tolerance", gs.lanczos.tolerance, "residual tolerance")->capture_default_str();
  g->add_option("--out", gs_out, "output directory")->required();

  // positivize
  cli::PositivizeArgs pos;
  std::string pos_state, pos_out, pos_kind;
  std::optional<std::string> pos_config, pos_resume;
  std::optional<std::size_t> pos_depth, pos_iters;
  std::optional<std::uint64_t> pos_seed;
  auto* p = app.add_subcommand("positivize", "Train a circuit that positivizes the input state");
  p->add_option("--state", pos_state, "input MPS file")->required()->check(CLI::ExistingFile);
  p->add_option("--config", pos_config, "run config (or a manifest.json to replay)")->check(CLI::ExistingFile);
  p->add_option("--depth", pos_depth, "circuit depth (0 = empty circuit)");
  p->add_option("--gate-kind", pos_kind, "rz | general")->check(CLI::IsMember({"rz", "general", "general_two_qubit"}));
  p->add_option("--seed", pos_seed, "training seed");
  p->add_option("--max-iters", pos_iters, "iteration budget");
  p->add_option("--resume", pos_resume, "checkpoint.json to resume from")->check(CLI::ExistingFile);
  p->add_option("--out-dir", pos_out, "output directory")->required();

  // eval
  cli::EvalArgs ev;
  std::string ev_state;
  std::optional<std::string> ev_circuit, ev_config, ev_out;
  auto* e = app.add_subcommand("eval", "Average sign, imaginary part and entropy of circuit(state)");
  e->add_option("--state", ev_state, "input MPS file")->required()->check(CLI::ExistingFile);
  e->add_option("--circuit", ev_circuit, "circuit file (omit for the identity)")->check(CLI::ExistingFile);
  e->add_option("--config", ev_config, "run config for cutoff and sampling")->check(CLI::ExistingFile);
  e->add_option("--out", ev_out, "also write the metrics JSON here");

  // sweep
  cli::SweepArgs sw;
  std::string sw_out;
  std::optional<std::string> sw_config;
  auto* s = app.add_subcommand("sweep", "Positivize over a grid of ring couplings, depths and sizes");
  s->add_option("--jr", sw.jr, "ring couplings")->delimiter(',');
  s->add_option("--depth", sw.depth, "circuit depths")->delimiter(',');
  s->add_option("--n", sw.n, "system sizes")->delimiter(',');
  s->add_option("--config", sw_config, "run config")->check(CLI::ExistingFile);
  s->add_option("--max-runs", sw.max_runs, "cap on the number of grid points")->capture_default_str();
  s->add_option("--out-dir", sw_out, "output directory")->required();

  // print-config
  std::optional<std::string> pc_config;
  auto* pc = app.add_subcommand("print-config", "Print the full run config with every default filled in");
  pc->add_option("--config", pc_config, "merge this config over the defaults")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : cli::kUsage;
  }

  try {
    if (*g) {
      gs.out_dir = gs_out;
      const auto out = cli::cmd_groundstate(gs);
      std::cout << cli::read_json_file(gs.out_dir / "groundstate.json").dump(2) << '\n';
      (void)out;
    } else if (*p) {
      pos.state_path = pos_state;
      pos.out_dir = pos_out;
      pos.config = cli::load_run_config(pos_config ? std::optional<fs::path>(*pos_config) : std::nullopt);
      pos.depth = pos_depth;
      pos.seed = pos_seed;
      pos.max_iters = pos_iters;
      if (!pos_kind.empty()) pos.kind = posit::gate_kind_from_string(pos_kind);
      if (pos_resume) pos.resume = fs::path(*pos_resume);
      const auto out = cli::cmd_positivize(pos);
      std::cout << out.summary.dump(2) << '\n';
    } else if (*e) {
      ev.state_path = ev_state;
      if (ev_circuit) ev.circuit_path = fs::path(*ev_circuit);
      ev.config = cli::load_run_config(ev_config ? std::optional<fs::path>(*ev_config) : std::nullopt);
      if (ev_out) ev.out = fs::path(*ev_out);
      std::cout << cli::cmd_eval(ev).dump(2) << '\n';
    } else if (*s) {
      sw.out_dir = sw_out;
      sw.config = cli::load_run_config(sw_config ? std::optional<fs::path>(*sw_config) : std::nullopt);
      print_rows(cli::cmd_sweep(sw));
    } else if (*pc) {
      std::cout << cli::to_json(cli::load_run_config(pc_config ? std::optional<fs::path>(*pc_config) : std::nullopt)).dump(2)
                << '\n';
    }
  } catch (const std::exception& ex) {
    std::cerr << "posit: " << ex.what() << '\n';
    return cli::exit_code_for(std::current_exception());
  }
  return cli::kOk;
}
