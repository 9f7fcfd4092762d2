#ifndef DECOYJAM_EXPERIMENTS_HPP
#define DECOYJAM_EXPERIMENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "decoyjam/config.hpp"

namespace decoyjam {

struct ExperimentSpec {
  std::string name;
  int figure = 0;
  int scenario = 0;  // 0: closed-form only, 1: unknown gains, 2: known gains
  std::string description;
};

const std::vector<ExperimentSpec>& experiment_registry();

struct RunOptions {
  ScenarioConfig base;
  int n_seeds = 10;
  int jobs = 2;
  std::string out_dir = ".";
  bool traces = false;  // per-slot trace files for trace-style experiments
};

// Named experiment (fig3..fig10). Returns a process exit code.
int run_experiment(const std::string& name, const RunOptions& opts);

// fig3.csv and fig4.csv over the (n, l) grid.
void write_bound_tables(const ScenarioConfig& cfg, int n_lo, int n_hi, int l_lo, int l_hi,
                        const std::string& out_dir);

// fig5.csv: mean optimal TRP ratio as a function of the decoy cap.
void write_rho_sweep(const ScenarioConfig& cfg, int n_seeds, int jobs,
                     const std::string& out_dir);

// Fan out fn(0..count-1) over a small worker pool; exceptions rethrow.
void parallel_for_index(int jobs, int count, const std::function<void(int)>& fn);

double mean_of(const std::vector<double>& v);
double median_of(std::vector<double> v);
double standard_error(const std::vector<double>& v);

}  // namespace decoyjam

#endif
