#include "decoyjam/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "decoyjam/bounds.hpp"
#include "decoyjam/csv.hpp"
#include "decoyjam/optimizer.hpp"
#include "decoyjam/qlearning.hpp"
#include "decoyjam/srl.hpp"

namespace decoyjam {

namespace {

constexpr std::uint64_t kChannelStreamBase = 0x10000;
constexpr std::uint64_t kLearnStreamBase = 0x20000;
constexpr std::uint64_t kBaselineStreamBase = 0x30000;

std::string out_path(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

ChannelState seed_channels(const ScenarioConfig& cfg, int run) {
  RngStream stream(cfg.seed, kChannelStreamBase + run);
  return draw_channels(cfg, stream);
}

// Trailing-window first-crossing slot of the realized ratio, -1 if never.
long crossing_slot(const std::vector<TraceRow>& trace, double threshold, int window) {
  if (trace.empty()) return -1;
  double acc = 0.0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    acc += trace[i].trp_ratio;
    if (i - lo + 1 > static_cast<std::size_t>(window)) acc -= trace[lo++].trp_ratio;
    if (i - lo + 1 == static_cast<std::size_t>(window) && acc / window >= threshold)
      return trace[i].slot;
  }
  return -1;
}

}  // namespace

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / (v.size() - 1) / v.size());
}

void parallel_for_index(int jobs, int count, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const std::vector<ExperimentSpec>& experiment_registry() {
  static const std::vector<ExperimentSpec> registry = {
      {"fig3", 3, 0, "minimum decoy-cap fraction per policy over the (users, channels) grid"},
      {"fig4", 4, 0, "expected TRP ratio of both data-channel policies over the grid"},
      {"fig5", 5, 0, "optimal TRP ratio as a function of the decoy cap (Monte Carlo)"},
      {"fig6", 6, 1, "single user, unknown gains: learned vs optimal vs random hopping"},
      {"fig7", 7, 1, "two users, unknown gains: learned vs optimal vs random hopping"},
      {"fig8", 8, 2, "three users, known AP gains: refined learning vs optimal"},
      {"fig9", 9, 2, "convergence speed: successive refinement vs flat tabular learning"},
      {"fig10", 10, 2, "jammer-capture success rate over time for 1..3 users"},
  };
  return registry;
}

void write_bound_tables(const ScenarioConfig& cfg, int n_lo, int n_hi, int l_lo, int l_hi,
                        const std::string& out_dir) {
  const std::string hash = config_hash(cfg);
  CsvWriter fig3(out_path(out_dir, "fig3.csv"), "n,l,approach,min_rho_fraction", hash);
  CsvWriter fig4(out_path(out_dir, "fig4.csv"), "n,l,approach,ratio", hash);
  for (int n = n_lo; n <= n_hi; ++n) {
    for (int l = l_lo; l <= l_hi; ++l) {
      BoundSet b = compute_bounds(n, l, cfg.lambda_rate, cfg.p_bar, 1.0);
      fig3.row(n, l, "APP1", b.min_rho_fraction_app1);
      if (l >= n + 1)
        fig3.row(n, l, "APP1_ALT",
                 expected_power_app1_alt(n, l, cfg.lambda_rate, cfg.p_bar) / cfg.p_bar);
      else
        fig3.row(n, l, "APP1_ALT", std::numeric_limits<double>::quiet_NaN());
      fig3.row(n, l, "APP2", b.min_rho_fraction_app2);
      fig4.row(n, l, "APP1", b.ratio_app1);
      fig4.row(n, l, "APP2", b.ratio_app2);
    }
  }
}

void write_rho_sweep(const ScenarioConfig& cfg, int n_seeds, int jobs,
                     const std::string& out_dir) {
  struct Cell {
    int n, l;
    double rho;
    std::vector<double> ratios;
  };
  std::vector<Cell> cells;
  const std::vector<double> rho_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  for (int n : {1, 2, 3})
    for (double r : rho_grid) cells.push_back({n, 6, r, {}});

  parallel_for_index(jobs, static_cast<int>(cells.size()), [&](int idx) {
    Cell& c = cells[idx];
    ScenarioConfig local = cfg;
    local.n_users = c.n;
    local.n_channels = c.l;
    local.rho = std::min(c.rho, local.p_bar);
    c.ratios.reserve(n_seeds);
    for (int s = 0; s < n_seeds; ++s) {
      ChannelState ch = seed_channels(local, s);
      OptimizationResult r = solve_full(ch, local);
      const double top = upsilon_top(ch, local);
      c.ratios.push_back(r.feasible && top > 0.0 ? -r.objective / top : 0.0);
    }
  });

  CsvWriter fig5(out_path(out_dir, "fig5.csv"), "n,l,rho,mean_ratio,se,draws",
                 config_hash(cfg));
  for (const auto& c : cells)
    fig5.row(c.n, c.l, c.rho, mean_of(c.ratios), standard_error(c.ratios),
             static_cast<long>(c.ratios.size()));
}

namespace {

struct SeriesRow {
  int l;
  int seed;
  std::string series;
  double value;
};

void write_series_outputs(const std::string& name, const ScenarioConfig& cfg,
                          const std::vector<SeriesRow>& rows, const std::string& out_dir) {
  const std::string hash = config_hash(cfg);
  CsvWriter runs(out_path(out_dir, name + "_runs.csv"), "l,seed,series,value", hash);
  for (const auto& r : rows) runs.row(r.l, r.seed, r.series, r.value);
  // aggregate by (l, series)
  CsvWriter agg(out_path(out_dir, name + "_aggregate.csv"),
                "l,series,mean,median,se,n_seeds", hash);
  std::vector<std::pair<int, std::string>> keys;
  for (const auto& r : rows) {
    std::pair<int, std::string> k{r.l, r.series};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  for (const auto& [l, series] : keys) {
    std::vector<double> vals;
    for (const auto& r : rows)
      if (r.l == l && r.series == series) vals.push_back(r.value);
    agg.row(l, series, mean_of(vals), median_of(vals), standard_error(vals),
            static_cast<long>(vals.size()));
  }
}

// Learned-vs-reference experiment used by fig6 (N=1), fig7 (N=2) and fig8
// (N=3 with the refinement algorithm).
void run_policy_comparison(const std::string& name, const RunOptions& opts, int n_users,
                           int l_lo, int l_hi, int chi, bool use_srl) {
  std::vector<SeriesRow> rows;
  std::mutex mu;
  std::vector<std::pair<int, int>> tasks;
  for (int l = l_lo; l <= l_hi; ++l)
    for (int s = 0; s < opts.n_seeds; ++s) tasks.push_back({l, s});

  parallel_for_index(opts.jobs, static_cast<int>(tasks.size()), [&](int t) {
    const auto [l, seed_idx] = tasks[t];
    ScenarioConfig cfg = opts.base;
    cfg.n_users = n_users;
    cfg.n_channels = l;
    ChannelState ch = seed_channels(cfg, seed_idx * 131 + l);
    const double top = upsilon_top(ch, cfg);

    double learned;
    if (use_srl) {
      Algorithm2Options a2;
      a2.trace_stride = 0;
      a2.stream_id = kLearnStreamBase + seed_idx;
      learned = run_algorithm2(ch, cfg, a2).final_ratio;
    } else {
      Algorithm1Options a1;
      a1.scenario = 1;
      a1.chi = chi;
      a1.trace_stride = 0;
      a1.stream_id = kLearnStreamBase + seed_idx;
      learned = run_algorithm1(ch, cfg, a1).greedy_ratio;
    }

    OptimizationResult opt = solve_full(ch, cfg);
    const double optimal = (opt.feasible && top > 0.0) ? -opt.objective / top : 0.0;

    RngStream base_stream(cfg.seed, kBaselineStreamBase + seed_idx);
    const double rnd_free =
        baseline_random_hop(ch, cfg, false, 3000, base_stream).mean_ratio;
    const double rnd_jam =
        baseline_random_hop(ch, cfg, true, 3000, base_stream).mean_ratio;

    std::lock_guard<std::mutex> lock(mu);
    rows.push_back({l, seed_idx, use_srl ? "srl" : "qlearning", learned});
    rows.push_back({l, seed_idx, "optimal", optimal});
    rows.push_back({l, seed_idx, "random_no_jammer", rnd_free});
    rows.push_back({l, seed_idx, "random_with_jammer", rnd_jam});
  });

  std::sort(rows.begin(), rows.end(), [](const SeriesRow& a, const SeriesRow& b) {
    return std::tie(a.l, a.seed, a.series) < std::tie(b.l, b.seed, b.series);
  });
  ScenarioConfig cfg = opts.base;
  cfg.n_users = n_users;
  write_series_outputs(name, cfg, rows, opts.out_dir);
}

void run_convergence_race(const RunOptions& opts) {
  // three users, known AP gains: refinement schedule vs flat table at the
  // matching final resolution (decoy power step 0.1)
  struct Task {
    int l, seed;
  };
  std::vector<Task> tasks;
  for (int l = 5; l <= 8; ++l)
    for (int s = 0; s < opts.n_seeds; ++s) tasks.push_back({l, s});

  struct Row {
    int l, seed;
    std::string method;
    long slots_to_95;
  };
  std::vector<Row> rows;
  std::vector<std::vector<TraceRow>> traces(tasks.size() * 2);
  std::vector<std::string> trace_tags(tasks.size() * 2);
  std::mutex mu;

  parallel_for_index(opts.jobs, static_cast<int>(tasks.size()), [&](int t) {
    const Task task = tasks[t];
    ScenarioConfig cfg = opts.base;
    cfg.n_users = 3;
    cfg.n_channels = task.l;
    ChannelState ch = seed_channels(cfg, task.seed * 131 + task.l);
    OptimizationResult opt = solve_full(ch, cfg);
    const double g_opt = -opt.objective;
    if (!(g_opt > 0.0)) return;

    Algorithm2Options a2;
    a2.trace_stride = 1;
    a2.ratio_reference = g_opt;
    a2.stream_id = kLearnStreamBase + task.seed;
    Algorithm2Result srl = run_algorithm2(ch, cfg, a2);
    const long srl_cross = crossing_slot(srl.trace, 0.95, 500);

    Algorithm1Options a1;
    a1.scenario = 2;
    a1.chi = 50;  // decoy power step 0.1 on [0, rho]
    a1.max_slots = 120000;
    a1.trace_stride = 1;
    a1.ratio_reference = g_opt;
    a1.stream_id = kLearnStreamBase + task.seed;
    Algorithm1Result flat = run_algorithm1(ch, cfg, a1);
    const long flat_cross = crossing_slot(flat.trace, 0.95, 500);

    std::lock_guard<std::mutex> lock(mu);
    rows.push_back({task.l, task.seed, "srl", srl_cross});
    rows.push_back({task.l, task.seed, "flat_q", flat_cross});
    if (opts.traces) {
      traces[2 * t] = std::move(srl.trace);
      trace_tags[2 * t] = "srl";
      traces[2 * t + 1] = std::move(flat.trace);
      trace_tags[2 * t + 1] = "flat_q";
    }
  });

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.l, a.seed, a.method) < std::tie(b.l, b.seed, b.method);
  });
  ScenarioConfig cfg = opts.base;
  cfg.n_users = 3;
  const std::string hash = config_hash(cfg);
  CsvWriter cross(out_path(opts.out_dir, "fig9_crossings.csv"),
                  "l,seed,method,slots_to_95", hash);
  for (const auto& r : rows) cross.row(r.l, r.seed, r.method, r.slots_to_95);

  if (opts.traces) {
    CsvWriter tr(out_path(opts.out_dir, "fig9_traces.csv"),
                 "l,seed,method,slot,epsilon,trp,trp_ratio,zeta,jammed,greedy", hash);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      for (int m = 0; m < 2; ++m) {
        const auto& trace = traces[2 * t + m];
        for (std::size_t i = 0; i < trace.size(); i += 100) {
          const auto& row = trace[i];
          tr.row(tasks[t].l, tasks[t].seed, trace_tags[2 * t + m], row.slot, row.epsilon,
                 row.trp, row.trp_ratio, row.zeta, row.jammed, row.greedy ? 1 : 0);
        }
      }
    }
  }
}

void run_success_rate(const RunOptions& opts) {
  struct Task {
    int n, l;
    int seed;
  };
  std::vector<Task> tasks;
  const std::vector<std::pair<int, int>> pairs = {{1, 6}, {2, 7}, {3, 8}};
  for (const auto& [n, l] : pairs)
    for (int s = 0; s < opts.n_seeds; ++s) tasks.push_back({n, l, s});

  struct Summary {
    int n, l, seed;
    long slots;
    double final_window_rate;
    double replay_rate;
  };
  std::vector<Summary> summaries;
  std::vector<std::vector<TraceRow>> traces(tasks.size());
  std::mutex mu;

  parallel_for_index(opts.jobs, static_cast<int>(tasks.size()), [&](int t) {
    const Task task = tasks[t];
    ScenarioConfig cfg = opts.base;
    cfg.n_users = task.n;
    cfg.n_channels = task.l;
    ChannelState ch = seed_channels(cfg, task.seed * 131 + task.l);

    std::vector<TraceRow> trace;
    Allocation final_alloc;
    long slots = 0;
    if (task.n == 3) {
      Algorithm2Options a2;
      a2.trace_stride = 1;
      a2.stream_id = kLearnStreamBase + task.seed;
      Algorithm2Result r = run_algorithm2(ch, cfg, a2);
      trace = std::move(r.trace);
      final_alloc = r.final_allocation;
      slots = r.total_slots;
    } else {
      Algorithm1Options a1;
      a1.scenario = 1;
      a1.chi = task.n == 1 ? 25 : 3;
      a1.trace_stride = 1;
      a1.stream_id = kLearnStreamBase + task.seed;
      Algorithm1Result r = run_algorithm1(ch, cfg, a1);
      trace = std::move(r.trace);
      final_alloc = r.greedy_allocation;
      slots = r.slots;
    }

    // converged policy replay
    RngStream jam(cfg.seed, 0xab5eULL + task.seed);
    JammerState js;
    std::vector<std::uint8_t> replay;
    replay.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
      auto [outcome, next] = run_slot(final_alloc, ch, js, cfg, jam);
      js = next;
      replay.push_back(outcome.zeta == 0 ? 1 : 0);
    }
    const double replay_rate = success_rate(replay, 1000);

    std::vector<std::uint8_t> in_run;
    in_run.reserve(trace.size());
    for (const auto& row : trace) in_run.push_back(row.zeta == 0 ? 1 : 0);
    const double final_window =
        in_run.size() >= 500 ? success_rate(in_run, 500) : success_rate(in_run, in_run.size());

    std::lock_guard<std::mutex> lock(mu);
    summaries.push_back({task.n, task.l, task.seed, slots, final_window, replay_rate});
    if (opts.traces) traces[t] = std::move(trace);
  });

  std::sort(summaries.begin(), summaries.end(), [](const Summary& a, const Summary& b) {
    return std::tie(a.n, a.l, a.seed) < std::tie(b.n, b.l, b.seed);
  });
  const std::string hash = config_hash(opts.base);
  CsvWriter sum(out_path(opts.out_dir, "fig10_summary.csv"),
                "n,l,seed,slots,final_window_rate,replay_rate", hash);
  for (const auto& s : summaries)
    sum.row(s.n, s.l, s.seed, s.slots, s.final_window_rate, s.replay_rate);

  if (opts.traces) {
    CsvWriter tr(out_path(opts.out_dir, "fig10_traces.csv"),
                 "n,l,seed,slot,window_success_rate", hash);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const auto& trace = traces[t];
      if (trace.empty()) continue;
      std::vector<std::uint8_t> flags;
      flags.reserve(trace.size());
      for (const auto& row : trace) flags.push_back(row.zeta == 0 ? 1 : 0);
      double acc = 0.0;
      std::size_t lo = 0;
      for (std::size_t i = 0; i < flags.size(); ++i) {
        acc += flags[i];
        if (i - lo + 1 > 500) acc -= flags[lo++];
        if (i % 100 == 0)
          tr.row(tasks[t].n, tasks[t].l, tasks[t].seed, trace[i].slot,
                 acc / static_cast<double>(i - lo + 1));
      }
    }
  }
}

}  // namespace

int run_experiment(const std::string& name, const RunOptions& opts) {
  ScenarioConfig cfg = opts.base;
  cfg.validate();
  if (name == "fig3" || name == "fig4") {
    write_bound_tables(cfg, 1, 5, 4, 14, opts.out_dir);
    return 0;
  }
  if (name == "fig5") {
    write_rho_sweep(cfg, opts.n_seeds, opts.jobs, opts.out_dir);
    return 0;
  }
  if (name == "fig6") {
    run_policy_comparison("fig6", opts, 1, 4, 8, 25, false);
    return 0;
  }
  if (name == "fig7") {
    run_policy_comparison("fig7", opts, 2, 5, 9, 3, false);
    return 0;
  }
  if (name == "fig8") {
    run_policy_comparison("fig8", opts, 3, 5, 9, 0, true);
    return 0;
  }
  if (name == "fig9") {
    run_convergence_race(opts);
    return 0;
  }
  if (name == "fig10") {
    run_success_rate(opts);
    return 0;
  }
  throw std::invalid_argument("unknown experiment: " + name);
}

}  // namespace decoyjam
