#ifndef DECOYJAM_QLEARNING_HPP
#define DECOYJAM_QLEARNING_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "decoyjam/allocation.hpp"
#include "decoyjam/channel.hpp"
#include "decoyjam/config.hpp"
#include "decoyjam/jammer.hpp"
#include "decoyjam/rng.hpp"
#include "decoyjam/sim.hpp"

namespace decoyjam {

// Discrete state/action coding.
//
// Without AP channel knowledge (scenario 1) the state is the previous joint
// channel selection (decoy channel plus one data channel per user) and an
// action additionally carries one decoy power index per user:
//   |S| = L^(N+1),  |A| = L^(N+1) * (chi+1)^N.
// With known AP gains (scenario 2) data channels are pinned to each user's
// best channel and the coding reduces to |S| = L, |A| = L * (chi+1)^N.
struct QSpace {
  int n_users = 0;
  int n_channels = 0;
  int chi = 0;
  double rho = 0.0;
  bool known_gains = false;
  std::vector<int> fixed_comm;  // scenario 2 only

  static QSpace scenario1(const ScenarioConfig& cfg, int chi);
  static QSpace scenario2(const ScenarioConfig& cfg, int chi, const ChannelState& ch);

  std::size_t state_count() const;
  std::size_t action_count() const;
  std::size_t local_action_count() const;  // per-user component count

  struct DecodedAction {
    int victim;
    std::vector<int> comm;
    std::vector<int> power_idx;
  };
  DecodedAction decode_action(std::size_t a) const;
  std::size_t encode_action(int victim, const std::vector<int>& comm,
                            const std::vector<int>& power_idx) const;
  std::size_t state_of_action(std::size_t a) const;
  double power_level(int idx) const { return rho * idx / chi; }
  Allocation allocation_of(std::size_t a, const ScenarioConfig& cfg) const;
};

// Dense table of action values. Rows with many actions carry a max-tree so
// row maxima and argmaxima stay cheap; ties resolve to the lowest index.
class QTable {
 public:
  QTable(std::size_t n_states, std::size_t n_actions);

  double get(std::size_t s, std::size_t a) const { return values_[s * n_actions_ + a]; }
  void set(std::size_t s, std::size_t a, double v);
  double row_max(std::size_t s) const;
  std::size_t row_argmax(std::size_t s) const;

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_states_, n_actions_;
  std::vector<double> values_;
  // max tree (only when rows are wide): per state, a binary heap layout of
  // (value, index) pairs over padded leaves
  bool use_tree_ = false;
  std::size_t cap_ = 0;
  std::vector<double> tree_val_;
  std::vector<std::int32_t> tree_idx_;
  void tree_update(std::size_t s, std::size_t a);
};

double epsilon_at(long k, const ScenarioConfig& cfg);

// Exploration draw: the decoy channel comes from the stream owner, each
// user then samples uniformly from its own local components.
std::size_t random_joint_action(const QSpace& space, RngStream& stream);

std::size_t select_action(const QTable& q, std::size_t state, double eps, RngStream& stream,
                          const QSpace& space);

void bellman_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next,
                    const ScenarioConfig& cfg);

struct TraceRow {
  long slot;
  double epsilon;
  double trp;
  double trp_ratio;
  int zeta;
  int jammed;
  bool greedy;
};

struct Algorithm1Options {
  int scenario = 1;
  int chi = -1;             // -1: cfg.chi_q
  long max_slots = -1;      // -1: cfg.pi_iteration
  long phi_eps = -1;        // -1: cfg.phi_eps
  double ratio_reference = 0.0;  // 0: upsilon_top of the draw
  int trace_stride = 1;     // 0 disables the trace
  int n_replicas = 1;       // extra tables driven in lockstep (tests)
  std::uint64_t stream_id = 1;
};

struct Algorithm1Result {
  Allocation greedy_allocation;
  double greedy_trp = 0.0;
  double greedy_ratio = 0.0;
  long slots = 0;
  bool converged = false;  // stopped by the stability counter
  std::size_t greedy_action = 0;
  std::vector<TraceRow> trace;
};

// Step-wise runner so tests can inspect tables slot by slot.
class Algorithm1Runner {
 public:
  Algorithm1Runner(const ChannelState& ch, const ScenarioConfig& cfg, Algorithm1Options opts);
  bool step();  // one slot; false once terminated
  bool converged() const { return converged_; }
  long slot() const { return slot_; }
  const QSpace& space() const { return space_; }
  const QTable& table(int replica = 0) const { return tables_[replica]; }
  std::size_t last_action() const { return last_action_; }
  std::size_t greedy_action() const;
  const std::vector<TraceRow>& trace() const { return trace_; }
  Algorithm1Result finish(const ScenarioConfig& cfg) const;
  const ChannelState& channels() const { return ch_; }

 private:
  ChannelState ch_;
  ScenarioConfig cfg_;
  Algorithm1Options opts_;
  QSpace space_;
  std::vector<QTable> tables_;
  RngStream act_stream_, jam_stream_;
  JammerState jstate_;
  std::size_t state_ = 0;
  long slot_ = 0;
  long stable_count_ = 0;
  bool have_prev_greedy_ = false;
  std::size_t prev_greedy_ = 0;
  std::size_t last_action_ = 0;
  bool terminated_ = false;
  bool converged_ = false;
  double ratio_ref_ = 1.0;
  std::vector<TraceRow> trace_;
};

Algorithm1Result run_algorithm1(const ChannelState& ch, const ScenarioConfig& cfg,
                                Algorithm1Options opts = {});

}  // namespace decoyjam

#endif
