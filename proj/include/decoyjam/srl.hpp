#ifndef DECOYJAM_SRL_HPP
#define DECOYJAM_SRL_HPP

#include <vector>

#include "decoyjam/qlearning.hpp"

namespace decoyjam {

// Successive refinement: a coarse tabular learning pass fixes the decoy
// channel and a primary power split, then state-value refinement passes
// explore additive adjustments on shrinking ranges.

struct SrlStageSpec {
  double tau;  // adjustment half-range
  int chi;     // levels - 1 (step = 2 tau / chi); must be even so 0 is a state
};

// Coarse pass on {0..rho} in steps of 1, then adjustments of +-2 at step
// 0.5 and +-0.5 at step 0.1.
std::vector<SrlStageSpec> default_srl_schedule(const ScenarioConfig& cfg);

// Dense state values over the per-user adjustment grid, size (chi+1)^N.
class ValueTable {
 public:
  ValueTable(int n_users, int chi);
  double get(std::size_t s) const { return values_[s]; }
  void set(std::size_t s, double v);
  std::size_t argmax() const { return argmax_; }
  std::size_t size() const { return values_.size(); }
  std::size_t encode(const std::vector<int>& idx) const;
  std::vector<int> decode(std::size_t s) const;

 private:
  int n_users_, chi_;
  std::vector<double> values_;
  std::size_t argmax_ = 0;
};

void td_update(ValueTable& v, std::size_t s, double r, std::size_t s_next,
               const ScenarioConfig& cfg);

// Committed powers after a refinement stage: offsets plus the selected
// adjustment, clamped into [0, rho].
std::vector<double> apply_adjustment(const std::vector<double>& offsets,
                                     const std::vector<int>& idx, const SrlStageSpec& stage,
                                     double rho);

struct SrlStageTrace {
  int stage;            // 0 is the coarse pass
  long slots_elapsed;   // cumulative
  std::vector<double> offsets;
  double tau;
  double omega;
  double trp_ratio;     // of the committed allocation
};

struct Algorithm2Options {
  std::vector<SrlStageSpec> schedule;  // empty: default_srl_schedule
  long td_phi_eps = 1000;
  long td_max_slots = -1;      // per stage; -1: cfg.pi_iteration
  int max_extra_stages = 8;    // continuation cap past the schedule
  int trace_stride = 1;        // 0 disables
  double ratio_reference = 0.0;
  std::uint64_t stream_id = 2;
};

struct Algorithm2Result {
  Allocation final_allocation;
  std::vector<double> final_powers;
  int victim = 0;
  std::vector<SrlStageTrace> stages;
  std::vector<TraceRow> trace;  // realized, across all stages
  long total_slots = 0;
  bool zero_adjustment_stop = false;
  double final_ratio = 0.0;
};

Algorithm2Result run_algorithm2(const ChannelState& ch, const ScenarioConfig& cfg,
                                Algorithm2Options opts = {});

// Explored-space sizes: coarse pass L*(chi_q+1)^N, then (chi+1)^N per
// refinement stage.
std::vector<long> srl_action_counts(const ScenarioConfig& cfg,
                                    const std::vector<SrlStageSpec>& schedule);

}  // namespace decoyjam

#endif
