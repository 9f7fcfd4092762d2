#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "decoyjam/bounds.hpp"
#include "decoyjam/csv.hpp"
#include "decoyjam/experiments.hpp"
#include "decoyjam/optimizer.hpp"
#include "decoyjam/qlearning.hpp"

using namespace decoyjam;

namespace {

ChannelState symmetric_channels(const ScenarioConfig& cfg) {
  ChannelState ch;
  ch.n_users = cfg.n_users;
  ch.n_channels = cfg.n_channels;
  ch.hc.assign(static_cast<std::size_t>(cfg.n_users) * cfg.n_channels, 1.0);
  ch.hj = ch.hc;
  return ch;
}

void parse_range(const std::string& text, int& lo, int& hi) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    lo = hi = std::stoi(text);
  } else {
    lo = std::stoi(text.substr(0, pos));
    hi = std::stoi(text.substr(pos + 2));
  }
  if (lo > hi) throw CLI::ValidationError("range", "empty range: " + text);
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  ScenarioConfig resolve() const {
    ScenarioConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--set", "expected key=value: " + kv);
      apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"victim-channel deception against reactive jammers: analytic bounds, "
               "optimal allocation and learning simulations"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "flat key=value config file");
  app.add_option("--set", common.overrides, "override a config key (key=value)");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "emit closed-form tables (fig3/fig4/fig5)");
  std::string n_range = "1..5", l_range = "4..14", bounds_out = ".";
  int bounds_seeds = 10, bounds_jobs = 2;
  bool skip_rho = false;
  bounds_cmd->add_option("--n", n_range, "user count or range a..b");
  bounds_cmd->add_option("--l", l_range, "channel count or range a..b");
  bounds_cmd->add_option("--out", bounds_out, "output directory");
  bounds_cmd->add_option("--seeds", bounds_seeds, "draws per point for the decoy-cap sweep");
  bounds_cmd->add_option("--jobs", bounds_jobs, "worker threads");
  bounds_cmd->add_flag("--no-rho-sweep", skip_rho, "skip the Monte Carlo decoy-cap sweep");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "optimal allocation for one channel draw");
  int solve_n = 1, solve_l = 0;
  bool symmetric = false, verify = false;
  std::uint64_t solve_seed = 0;
  bool have_seed = false;
  double verify_step = 0.05;
  std::string solve_out, channels_file;
  solve_cmd->add_option("--n", solve_n, "number of users");
  solve_cmd->add_option("--l", solve_l, "number of channels (default n+1, at least 2)");
  solve_cmd->add_flag("--symmetric", symmetric, "all channel gains equal to one");
  solve_cmd->add_option("--seed", solve_seed, "draw channels from this seed")
      ->each([&](const std::string&) { have_seed = true; });
  solve_cmd->add_option("--channels", channels_file, "load a channel CSV instead of drawing");
  solve_cmd->add_flag("--verify", verify, "compare against the grid-search oracle");
  solve_cmd->add_option("--grid", verify_step, "grid step for --verify");
  solve_cmd->add_option("--out", solve_out, "write solve.csv here");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a named experiment");
  std::string sim_name, sim_out = ".";
  int sim_seeds = 10, sim_jobs = 2;
  bool sim_traces = false;
  sim_cmd->add_option("name", sim_name, "experiment name (see 'list')")->required();
  sim_cmd->add_option("--seeds", sim_seeds, "independent runs");
  sim_cmd->add_option("--jobs", sim_jobs, "worker threads");
  sim_cmd->add_option("--out", sim_out, "output directory");
  sim_cmd->add_flag("--traces", sim_traces, "also write per-slot trace CSVs");

  // list
  auto* list_cmd = app.add_subcommand("list", "list registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list_cmd) {
      for (const auto& spec : experiment_registry())
        std::printf("%-6s %s\n", spec.name.c_str(), spec.description.c_str());
      return 0;
    }

    if (*bounds_cmd) {
      ScenarioConfig cfg = common.resolve();
      int n_lo, n_hi, l_lo, l_hi;
      parse_range(n_range, n_lo, n_hi);
      parse_range(l_range, l_lo, l_hi);
      write_bound_tables(cfg, n_lo, n_hi, l_lo, l_hi, bounds_out);
      if (!skip_rho) write_rho_sweep(cfg, bounds_seeds, bounds_jobs, bounds_out);
      std::printf("wrote fig3.csv fig4.csv%s under %s\n", skip_rho ? "" : " fig5.csv",
                  bounds_out.c_str());
      return 0;
    }

    if (*solve_cmd) {
      ScenarioConfig cfg = common.resolve();
      cfg.n_users = solve_n;
      cfg.n_channels = solve_l > 0 ? solve_l : std::max(2, solve_n + 1);
      if (have_seed) cfg.seed = solve_seed;
      ChannelState ch;
      if (!channels_file.empty()) {
        std::ifstream in(channels_file);
        if (!in) throw std::runtime_error("cannot read " + channels_file);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        ch = channel_state_from_csv(text);
        cfg.n_users = ch.n_users;
        cfg.n_channels = ch.n_channels;
      } else if (symmetric) {
        ch = symmetric_channels(cfg);
      } else {
        RngStream stream(cfg.seed, 0x10000);
        ch = draw_channels(cfg, stream);
      }

      OptimizationResult r = solve_full(ch, cfg);
      std::printf("victim=%d objective=%.9g feasible=%d method=%s\n", r.allocation.victim,
                  r.objective, r.feasible ? 1 : 0, r.method.c_str());
      const auto sensed = sensed_spectrum(r.allocation, ch);
      double comm_max = 0.0;
      for (int c = 0; c < cfg.n_channels; ++c)
        if (c != r.allocation.victim) comm_max = std::max(comm_max, sensed[c]);
      std::printf("decoy sensed power=%.9g, strongest data channel=%.9g, slack=%.3g\n",
                  sensed[r.allocation.victim], comm_max,
                  sensed[r.allocation.victim] - comm_max);
      for (int i = 0; i < cfg.n_users; ++i)
        std::printf("user %d: comm=%d d2=%.9g dprime2=%.9g\n", i, r.allocation.comm[i],
                    r.allocation.deceive_power(i), r.allocation.comm_power(i));
      if (verify) {
        OptimizationResult b = brute_force(ch, cfg, verify_step);
        double max_hc2 = 0.0;
        for (int i = 0; i < cfg.n_users; ++i)
          for (int c = 0; c < cfg.n_channels; ++c)
            max_hc2 = std::max(max_hc2, ch.ap_gain2(i, c));
        const double bound = cfg.n_users * verify_step * max_hc2;
        std::printf("grid oracle: objective=%.9g gap=%.3g allowed=%.3g %s\n", b.objective,
                    r.objective - b.objective, bound,
                    r.objective <= b.objective + bound ? "OK" : "EXCEEDED");
      }
      if (!solve_out.empty()) {
        std::filesystem::create_directories(solve_out);
        std::ofstream out(std::filesystem::path(solve_out) / "solve.csv");
        out << "# config_hash=" << config_hash(cfg) << "\n"
            << optimization_result_csv(r, cfg);
      }
      return r.feasible ? 0 : 1;
    }

    if (*sim_cmd) {
      RunOptions opts;
      opts.base = common.resolve();
      opts.n_seeds = sim_seeds;
      opts.jobs = sim_jobs;
      opts.out_dir = sim_out;
      opts.traces = sim_traces;
      return run_experiment(sim_name, opts);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
