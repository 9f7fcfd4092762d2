#include "decoyjam/qlearning.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace decoyjam {

QSpace QSpace::scenario1(const ScenarioConfig& cfg, int chi) {
  QSpace s;
  s.n_users = cfg.n_users;
  s.n_channels = cfg.n_channels;
  s.chi = chi;
  s.rho = cfg.rho;
  s.known_gains = false;
  return s;
}

QSpace QSpace::scenario2(const ScenarioConfig& cfg, int chi, const ChannelState& ch) {
  QSpace s;
  s.n_users = cfg.n_users;
  s.n_channels = cfg.n_channels;
  s.chi = chi;
  s.rho = cfg.rho;
  s.known_gains = true;
  s.fixed_comm.resize(cfg.n_users);
  for (int i = 0; i < cfg.n_users; ++i) {
    int best = 0;
    for (int c = 1; c < cfg.n_channels; ++c)
      if (ch.ap_gain2(i, c) > ch.ap_gain2(i, best)) best = c;
    s.fixed_comm[i] = best;
  }
  return s;
}

std::size_t QSpace::state_count() const {
  if (known_gains) return n_channels;
  std::size_t c = n_channels;
  for (int i = 0; i < n_users; ++i) c *= n_channels;
  return c;
}

std::size_t QSpace::action_count() const {
  std::size_t c = state_count();
  for (int i = 0; i < n_users; ++i) c *= (chi + 1);
  return c;
}

std::size_t QSpace::local_action_count() const {
  return known_gains ? (chi + 1) : static_cast<std::size_t>(n_channels) * (chi + 1);
}

QSpace::DecodedAction QSpace::decode_action(std::size_t a) const {
  DecodedAction d;
  d.comm.resize(n_users);
  d.power_idx.resize(n_users);
  for (int i = n_users - 1; i >= 0; --i) {
    d.power_idx[i] = static_cast<int>(a % (chi + 1));
    a /= (chi + 1);
  }
  if (known_gains) {
    d.comm = fixed_comm;
    d.victim = static_cast<int>(a);
  } else {
    for (int i = n_users - 1; i >= 0; --i) {
      d.comm[i] = static_cast<int>(a % n_channels);
      a /= n_channels;
    }
    d.victim = static_cast<int>(a);
  }
  return d;
}

std::size_t QSpace::encode_action(int victim, const std::vector<int>& comm,
                                  const std::vector<int>& power_idx) const {
  std::size_t a = victim;
  if (!known_gains)
    for (int i = 0; i < n_users; ++i) a = a * n_channels + comm[i];
  for (int i = 0; i < n_users; ++i) a = a * (chi + 1) + power_idx[i];
  return a;
}

std::size_t QSpace::state_of_action(std::size_t a) const {
  for (int i = 0; i < n_users; ++i) a /= (chi + 1);
  return a;  // remaining mixed-radix prefix is exactly the state coding
}

Allocation QSpace::allocation_of(std::size_t a, const ScenarioConfig& cfg) const {
  DecodedAction d = decode_action(a);
  std::vector<double> p(n_users);
  for (int i = 0; i < n_users; ++i) p[i] = power_level(d.power_idx[i]);
  return Allocation::from_powers(d.victim, d.comm, p, cfg);
}

namespace {
constexpr std::size_t kTreeThreshold = 32768;
}

QTable::QTable(std::size_t n_states, std::size_t n_actions)
    : n_states_(n_states), n_actions_(n_actions),
      values_(n_states * n_actions, 0.0) {
  use_tree_ = n_actions_ >= kTreeThreshold;
  if (use_tree_) {
    cap_ = std::bit_ceil(n_actions_);
    tree_val_.assign(n_states_ * 2 * cap_, 0.0);
    tree_idx_.assign(n_states_ * 2 * cap_, 0);
    for (std::size_t s = 0; s < n_states_; ++s) {
      double* tv = tree_val_.data() + s * 2 * cap_;
      std::int32_t* ti = tree_idx_.data() + s * 2 * cap_;
      for (std::size_t a = 0; a < cap_; ++a)
        ti[cap_ + a] = a < n_actions_ ? static_cast<std::int32_t>(a) : -1;
      for (std::size_t node = cap_ - 1; node >= 1; --node) {
        tv[node] = tv[2 * node];
        ti[node] = ti[2 * node];
        if (ti[node] < 0 || (ti[2 * node + 1] >= 0 && tv[2 * node + 1] > tv[node])) {
          tv[node] = tv[2 * node + 1];
          ti[node] = ti[2 * node + 1];
        }
      }
    }
  }
}

void QTable::tree_update(std::size_t s, std::size_t a) {
  double* tv = tree_val_.data() + s * 2 * cap_;
  std::int32_t* ti = tree_idx_.data() + s * 2 * cap_;
  std::size_t node = cap_ + a;
  tv[node] = values_[s * n_actions_ + a];
  for (node /= 2; node >= 1; node /= 2) {
    const std::size_t lc = 2 * node, rc = 2 * node + 1;
    // prefer the left child on ties so the argmax stays at the lowest index
    if (ti[rc] >= 0 && (ti[lc] < 0 || tv[rc] > tv[lc])) {
      tv[node] = tv[rc];
      ti[node] = ti[rc];
    } else {
      tv[node] = tv[lc];
      ti[node] = ti[lc];
    }
  }
}

void QTable::set(std::size_t s, std::size_t a, double v) {
  values_[s * n_actions_ + a] = v;
  if (use_tree_) tree_update(s, a);
}

double QTable::row_max(std::size_t s) const {
  if (use_tree_) return tree_val_[s * 2 * cap_ + 1];
  const double* row = values_.data() + s * n_actions_;
  double best = row[0];
  for (std::size_t a = 1; a < n_actions_; ++a)
    if (row[a] > best) best = row[a];
  return best;
}

std::size_t QTable::row_argmax(std::size_t s) const {
  if (use_tree_) return static_cast<std::size_t>(tree_idx_[s * 2 * cap_ + 1]);
  const double* row = values_.data() + s * n_actions_;
  std::size_t best = 0;
  for (std::size_t a = 1; a < n_actions_; ++a)
    if (row[a] > row[best]) best = a;
  return best;
}

double epsilon_at(long k, const ScenarioConfig& cfg) {
  return std::max(std::exp(-static_cast<double>(k) / cfg.phi_eps), cfg.eps_thr);
}

std::size_t random_joint_action(const QSpace& space, RngStream& stream) {
  // stream owner draws the decoy channel, then every user draws its own
  // local component; the shared stream keeps replicas in lockstep
  const int victim = stream.uniform_int(space.n_channels);
  std::vector<int> comm(space.n_users);
  std::vector<int> pidx(space.n_users);
  for (int i = 0; i < space.n_users; ++i) {
    const int local = stream.uniform_int(static_cast<int>(space.local_action_count()));
    if (space.known_gains) {
      pidx[i] = local;
    } else {
      comm[i] = local / (space.chi + 1);
      pidx[i] = local % (space.chi + 1);
    }
  }
  if (space.known_gains) comm = space.fixed_comm;
  return space.encode_action(victim, comm, pidx);
}

std::size_t select_action(const QTable& q, std::size_t state, double eps, RngStream& stream,
                          const QSpace& space) {
  const double z = stream.uniform();
  if (z <= eps) return random_joint_action(space, stream);
  return q.row_argmax(state);
}

void bellman_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next,
                    const ScenarioConfig& cfg) {
  const double updated =
      (1.0 - cfg.alpha) * q.get(s, a) + cfg.alpha * (r + cfg.gamma * q.row_max(s_next));
  q.set(s, a, updated);
}

Algorithm1Runner::Algorithm1Runner(const ChannelState& ch, const ScenarioConfig& cfg,
                                   Algorithm1Options opts)
    : ch_(ch), cfg_(cfg), opts_(opts),
      space_(opts.scenario == 2
                 ? QSpace::scenario2(cfg, opts.chi > 0 ? opts.chi : cfg.chi_q, ch)
                 : QSpace::scenario1(cfg, opts.chi > 0 ? opts.chi : cfg.chi_q)),
      act_stream_(cfg.seed, opts.stream_id),
      jam_stream_(cfg.seed, opts.stream_id ^ 0xda3e39cb94b95bdbULL) {
  if (opts_.max_slots < 0) opts_.max_slots = cfg.pi_iteration;
  if (opts_.phi_eps < 0) opts_.phi_eps = cfg.phi_eps;
  tables_.reserve(opts_.n_replicas);
  for (int r = 0; r < opts_.n_replicas; ++r)
    tables_.emplace_back(space_.state_count(), space_.action_count());
  ratio_ref_ = opts_.ratio_reference > 0.0 ? opts_.ratio_reference : upsilon_top(ch_, cfg_);
}

std::size_t Algorithm1Runner::greedy_action() const { return tables_[0].row_argmax(state_); }

bool Algorithm1Runner::step() {
  if (terminated_) return false;
  ScenarioConfig cfg = cfg_;
  cfg.phi_eps = opts_.phi_eps;
  const double eps = epsilon_at(slot_, cfg);
  const double z = act_stream_.uniform();
  const bool greedy_mode = !(z <= eps);
  const std::size_t a = greedy_mode ? tables_[0].row_argmax(state_)
                                    : random_joint_action(space_, act_stream_);
  last_action_ = a;
  const Allocation alloc = space_.allocation_of(a, cfg_);
  auto [outcome, next_jam] = run_slot(alloc, ch_, jstate_, cfg_, jam_stream_);
  jstate_ = next_jam;
  const double r = outcome.reward;
  const std::size_t s_next = space_.state_of_action(a);
  for (auto& t : tables_) bellman_update(t, state_, a, r, s_next, cfg_);
  state_ = s_next;

  if (opts_.trace_stride > 0 && slot_ % opts_.trace_stride == 0) {
    trace_.push_back({slot_, eps, outcome.trp_g,
                      ratio_ref_ > 0.0 ? outcome.trp_g / ratio_ref_ : 0.0, outcome.zeta,
                      outcome.jammed_channel, greedy_mode});
  }

  const std::size_t g = tables_[0].row_argmax(state_);
  if (have_prev_greedy_ && g == prev_greedy_) {
    if (++stable_count_ >= opts_.phi_eps) {
      terminated_ = true;
      converged_ = true;
    }
  } else {
    stable_count_ = 0;
  }
  prev_greedy_ = g;
  have_prev_greedy_ = true;

  ++slot_;
  if (slot_ >= opts_.max_slots) terminated_ = true;
  return !terminated_;
}

Algorithm1Result Algorithm1Runner::finish(const ScenarioConfig& cfg) const {
  Algorithm1Result res;
  res.slots = slot_;
  res.converged = converged_;
  res.greedy_action = tables_[0].row_argmax(state_);
  res.greedy_allocation = space_.allocation_of(res.greedy_action, cfg);
  RngStream jam(cfg.seed, 0xfeedULL);
  auto [outcome, js] = run_slot(res.greedy_allocation, ch_, JammerState{}, cfg, jam);
  (void)js;
  res.greedy_trp = outcome.trp_g;
  res.greedy_ratio = ratio_ref_ > 0.0 ? outcome.trp_g / ratio_ref_ : 0.0;
  res.trace = trace_;
  return res;
}

Algorithm1Result run_algorithm1(const ChannelState& ch, const ScenarioConfig& cfg,
                                Algorithm1Options opts) {
  Algorithm1Runner runner(ch, cfg, opts);
  while (runner.step()) {
  }
  return runner.finish(cfg);
}

}  // namespace decoyjam
