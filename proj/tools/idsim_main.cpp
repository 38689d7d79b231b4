#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idsim/game_analysis.hpp"
#include "idsim/harness.hpp"
#include "idsim/io.hpp"

namespace {

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

const char* action_name(idsim::Action a) {
  return a == idsim::Action::binary ? "binary" : "nonbinary";
}

int run_simulate(const idsim::SimConfig& config, const std::string& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  const idsim::ReplicationSet result = idsim::run_replications(config);
  idsim::write_file(out_dir + "/raw.csv", idsim::raw_csv(result));
  idsim::write_file(out_dir + "/median.csv", idsim::median_csv(result));
  idsim::write_file(out_dir + "/manifest.txt",
                    idsim::manifest_text(config, now_utc()));
  std::cout << "wrote " << out_dir << "/raw.csv, median.csv, manifest.txt ("
            << config.replications << " replications x " << config.periods
            << " periods)\n";
  return 0;
}

int run_analyze_game(double phi, int k_max) {
  using idsim::Action;
  const idsim::StageGame game = idsim::build_game(phi);

  std::cout << "stage game (phi = " << idsim::format_double(phi) << ")\n";
  std::cout << "                     binary            nonbinary\n";
  for (Action row : idsim::kActions) {
    std::cout << "  " << action_name(row)
              << std::string(row == Action::binary ? 8 : 5, ' ');
    for (Action col : idsim::kActions) {
      std::cout << "  (" << idsim::format_double(game.payoff(row, col)) << ", "
                << idsim::format_double(game.payoff(col, row)) << ")       ";
    }
    std::cout << "\n";
  }

  std::cout << "\npure Nash equilibria:\n";
  const auto nash = idsim::pure_nash(game);
  for (const auto& eq : nash)
    std::cout << "  (" << action_name(eq.first) << ", "
              << action_name(eq.second) << ")\n";

  std::cout << "\ntrembling-hand perfection:\n";
  for (const auto& eq : nash) {
    const bool dominance = idsim::is_thpe(game, eq);
    const bool tremble = idsim::thpe_tremble_check(game, eq, k_max);
    std::cout << "  (" << action_name(eq.first) << ", "
              << action_name(eq.second) << "): weak-dominance test "
              << (dominance ? "THPE" : "not THPE") << ", tremble-sequence test (k_max="
              << k_max << ") " << (tremble ? "THPE" : "not THPE") << "\n";
  }

  std::cout << "\nsubgame-perfection spot checks (repeated game, one-stage deviation):\n";
  using P = idsim::Profile;
  const P bb{Action::binary, Action::binary};
  const P nn{Action::nonbinary, Action::nonbinary};
  const P bn{Action::binary, Action::nonbinary};
  const std::vector<std::pair<std::string, std::vector<P>>> checks = {
      {"constant (binary,binary)", {bb, bb, bb, bb}},
      {"alternating coordination", {bb, nn, bb, nn}},
      {"contains (binary,nonbinary)", {bb, bn, nn}},
  };
  for (const auto& [name, seq] : checks) {
    std::cout << "  " << name << ": "
              << (idsim::verify_spe_sequence(seq, phi) ? "SPE" : "not SPE")
              << "\n";
  }
  return 0;
}

int run_phi(double b, long samples, std::uint64_t seed) {
  idsim::Rng rng(seed);
  const double estimate = idsim::compute_phi(b, samples, rng);
  const double stderr_est =
      std::sqrt(std::max(estimate * (1.0 - estimate), 0.0) /
                static_cast<double>(samples));
  std::cout << "phi(b=" << idsim::format_double(b)
            << ") = " << idsim::format_double(estimate) << " +/- "
            << idsim::format_double(stderr_est) << " (" << samples
            << " samples)\n";
  return 0;
}

int run_plot_data(const std::string& input, const std::string& out_dir) {
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << "\n";
    return 1;
  }
  const idsim::CsvTable table = idsim::read_csv(in);
  const std::vector<std::pair<std::string, std::vector<std::string>>> panels = {
      {"panel_identity_shares.csv", {"gen", "prop_zero", "prop_one", "prop_nonbinary"}},
      {"panel_match_prob.csv", {"gen", "match_prob"}},
      {"panel_unmatched.csv", {"gen", "unmatched"}},
  };
  std::vector<std::string> missing;
  for (const auto& [_, cols] : panels)
    for (const auto& c : cols)
      if (table.column_index(c) < 0) missing.push_back(c);
  if (!missing.empty()) {
    std::cerr << "error: input is missing columns:";
    for (const auto& c : missing) std::cerr << " " << c;
    std::cerr << "\nexpected schema: " << idsim::kMedianCsvHeader << "\n";
    return 1;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& [file, cols] : panels) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i)
      out += (i ? "," : "") + cols[i];
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto idx = static_cast<std::size_t>(table.column_index(cols[i]));
        out += (i ? "," : "") + (idx < row.size() ? row[idx] : "");
      }
      out += '\n';
    }
    idsim::write_file(out_dir + "/" + file, out);
  }
  std::cout << "wrote " << panels.size() << " panel files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary identity-formation simulator and stage-game analyzer"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run replicated simulations and write CSV output");
  std::string config_path;
  std::string out_dir = "out";
  sim->add_option("--config", config_path, "key=value config file");
  sim->add_option("--out", out_dir, "output directory");
  std::uint64_t seed_flag = 0;
  int threads_flag = 1, periods_flag = 0, agents_flag = 0, reps_flag = 0, rounds_flag = 0;
  double bin_flag = 0.0, pmut_flag = 0.0, pcross_flag = 0.0, eps_flag = 0.0;
  std::string mode_flag, init_flag;
  auto* seed_opt = sim->add_option("--seed", seed_flag, "master seed");
  auto* threads_opt = sim->add_option("--threads", threads_flag, "worker threads (does not affect results)");
  auto* periods_opt = sim->add_option("--periods", periods_flag, "generations per replication");
  auto* agents_opt = sim->add_option("--agents", agents_flag, "population size (even)");
  auto* reps_opt = sim->add_option("--replications", reps_flag, "replication count");
  auto* bin_opt = sim->add_option("--bin-size", bin_flag, "nonbinary preference bin half-width");
  auto* pmut_opt = sim->add_option("--pmut", pmut_flag, "per-bit mutation probability");
  auto* pcross_opt = sim->add_option("--pcross", pcross_flag, "per-pair crossover probability");
  auto* rounds_opt = sim->add_option("--rounds", rounds_flag, "Monte Carlo matching rounds");
  auto* eps_opt = sim->add_option("--eps-class", eps_flag, "binary classification threshold");
  auto* mode_opt = sim->add_option("--mode", mode_flag, "fitness mode: analytic|montecarlo")
                       ->check(CLI::IsMember({"analytic", "montecarlo"}));
  auto* init_opt = sim->add_option("--init", init_flag, "init policy: binary_origin|uniform_random")
                       ->check(CLI::IsMember({"binary_origin", "uniform_random"}));

  // analyze-game
  auto* game_cmd = app.add_subcommand("analyze-game", "Report equilibria of the 2x2 stage game");
  double phi = 0.5;
  int k_max = 1000;
  game_cmd->add_option("--phi", phi, "nonbinary coordination payoff in [0,1]");
  game_cmd->add_option("--kmax", k_max, "tremble sequence length");

  // phi
  auto* phi_cmd = app.add_subcommand("phi", "Monte Carlo estimate of phi(b)");
  double phi_b = 0.1;
  long phi_samples = 1000000;
  std::uint64_t phi_seed = 0;
  phi_cmd->add_option("--bin-size", phi_b, "preference bin half-width in [0,1]");
  phi_cmd->add_option("--samples", phi_samples, "Monte Carlo samples");
  phi_cmd->add_option("--seed", phi_seed, "rng seed");

  // plot-data
  auto* plot_cmd = app.add_subcommand("plot-data", "Split a median CSV into per-panel series");
  std::string plot_input, plot_out = "panels";
  plot_cmd->add_option("--input", plot_input, "median CSV from simulate")->required();
  plot_cmd->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      // Precedence: built-in defaults, then config file, then flags.
      idsim::SimConfig config;
      if (!config_path.empty()) config = idsim::load_config_file(config_path);
      if (seed_opt->count()) config.master_seed = seed_flag;
      if (threads_opt->count()) config.threads = threads_flag;
      if (periods_opt->count()) config.periods = periods_flag;
      if (agents_opt->count()) config.agents = agents_flag;
      if (reps_opt->count()) config.replications = reps_flag;
      if (bin_opt->count()) config.bin_size = bin_flag;
      if (pmut_opt->count()) config.p_mut = pmut_flag;
      if (pcross_opt->count()) config.p_cross = pcross_flag;
      if (rounds_opt->count()) config.rounds = rounds_flag;
      if (eps_opt->count()) config.eps_class = eps_flag;
      if (mode_opt->count())
        config.fitness_mode = mode_flag == "analytic"
                                  ? idsim::FitnessMode::analytic_binary
                                  : idsim::FitnessMode::monte_carlo;
      if (init_opt->count())
        config.init_policy = init_flag == "binary_origin"
                                 ? idsim::InitPolicy::binary_origin
                                 : idsim::InitPolicy::uniform_random;
      return run_simulate(config, out_dir);
    }
    if (game_cmd->parsed()) return run_analyze_game(phi, k_max);
    if (phi_cmd->parsed()) return run_phi(phi_b, phi_samples, phi_seed);
    if (plot_cmd->parsed()) return run_plot_data(plot_input, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
