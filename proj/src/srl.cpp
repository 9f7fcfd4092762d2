#include "decoyjam/srl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace decoyjam {

std::vector<SrlStageSpec> default_srl_schedule(const ScenarioConfig& cfg) {
  // first half-range equals the coarse power step claimed by the schedule,
  // the second equals the first stage's own step
  (void)cfg;
  return {{2.0, 8}, {0.5, 10}};
}

ValueTable::ValueTable(int n_users, int chi) : n_users_(n_users), chi_(chi) {
  if (chi < 1) throw std::invalid_argument("ValueTable: chi must be >= 1");
  std::size_t sz = 1;
  for (int i = 0; i < n_users; ++i) sz *= (chi + 1);
  values_.assign(sz, 0.0);
}

void ValueTable::set(std::size_t s, double v) {
  const double old = values_[s];
  values_[s] = v;
  if (s == argmax_ && v < old) {
    // the top state lost value: rescan (tables are small)
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i)
      if (values_[i] > values_[best]) best = i;
    argmax_ = best;
  } else if (v > values_[argmax_] || (v == values_[argmax_] && s < argmax_)) {
    argmax_ = s;
  }
}

std::size_t ValueTable::encode(const std::vector<int>& idx) const {
  std::size_t s = 0;
  for (int i = 0; i < n_users_; ++i) s = s * (chi_ + 1) + idx[i];
  return s;
}

std::vector<int> ValueTable::decode(std::size_t s) const {
  std::vector<int> idx(n_users_);
  for (int i = n_users_ - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(s % (chi_ + 1));
    s /= (chi_ + 1);
  }
  return idx;
}

void td_update(ValueTable& v, std::size_t s, double r, std::size_t s_next,
               const ScenarioConfig& cfg) {
  v.set(s, v.get(s) + cfg.alpha * (r + cfg.gamma * v.get(s_next) - v.get(s)));
}

std::vector<double> apply_adjustment(const std::vector<double>& offsets,
                                     const std::vector<int>& idx, const SrlStageSpec& stage,
                                     double rho) {
  const double omega = 2.0 * stage.tau / stage.chi;
  std::vector<double> out(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double adj =
        idx[i] == stage.chi / 2 ? 0.0 : -stage.tau + idx[i] * omega;
    out[i] = std::clamp(offsets[i] + adj, 0.0, rho);
  }
  return out;
}

std::vector<long> srl_action_counts(const ScenarioConfig& cfg,
                                    const std::vector<SrlStageSpec>& schedule) {
  std::vector<long> counts;
  long stage0 = cfg.n_channels;
  for (int i = 0; i < cfg.n_users; ++i) stage0 *= (cfg.chi_q + 1);
  counts.push_back(stage0);
  for (const auto& st : schedule) {
    long c = 1;
    for (int i = 0; i < cfg.n_users; ++i) c *= (st.chi + 1);
    counts.push_back(c);
  }
  return counts;
}

namespace {

struct TdStageOutcome {
  std::vector<int> best_idx;
  bool zero_adjustment = false;
  long slots = 0;
};

TdStageOutcome run_td_stage(const ChannelState& ch, const ScenarioConfig& cfg,
                            const Algorithm2Options& opts, const SrlStageSpec& stage,
                            int victim, const std::vector<int>& comm,
                            const std::vector<double>& offsets, double ratio_ref,
                            long slot_base, RngStream& act, RngStream& jam,
                            std::vector<TraceRow>* trace) {
  if (stage.chi < 1) throw std::invalid_argument("run_td_stage: chi must be >= 1");
  if (stage.chi % 2 != 0)
    throw std::invalid_argument("run_td_stage: chi must be even so the zero adjustment exists");
  const int n = cfg.n_users;
  const double omega = 2.0 * stage.tau / stage.chi;
  std::vector<double> levels(stage.chi + 1);
  for (int j = 0; j <= stage.chi; ++j) levels[j] = -stage.tau + j * omega;
  levels[stage.chi / 2] = 0.0;

  ValueTable table(n, stage.chi);
  const std::vector<int> zero_idx(n, stage.chi / 2);
  std::size_t s = table.encode(zero_idx);
  JammerState jstate;

  ScenarioConfig eps_cfg = cfg;
  eps_cfg.phi_eps = opts.td_phi_eps;

  const long cap = opts.td_max_slots > 0 ? opts.td_max_slots : cfg.pi_iteration;
  long stable = 0;
  std::size_t prev_best = table.argmax();
  TdStageOutcome out;
  std::vector<int> idx(n);
  std::vector<double> powers(n);
  for (long k = 0; k < cap; ++k) {
    const double eps = epsilon_at(k, eps_cfg);
    const double z = act.uniform();
    std::size_t s_next;
    bool greedy_mode;
    if (z <= eps) {
      for (int i = 0; i < n; ++i) idx[i] = act.uniform_int(stage.chi + 1);
      s_next = table.encode(idx);
      greedy_mode = false;
    } else {
      s_next = table.argmax();
      greedy_mode = true;
    }
    const auto adj = table.decode(s_next);
    for (int i = 0; i < n; ++i)
      powers[i] = std::clamp(offsets[i] + levels[adj[i]], 0.0, cfg.rho);
    const Allocation alloc = Allocation::from_powers(victim, comm, powers, cfg);
    auto [outcome, next_jam] = run_slot(alloc, ch, jstate, cfg, jam);
    jstate = next_jam;
    // decoy channel is already fixed, so the mis-jam penalty is dropped
    const double r = reward_value(outcome.trp_g, 0, alloc.total_deceive_power(), cfg);
    td_update(table, s, r, s_next, cfg);
    s = s_next;

    if (trace && opts.trace_stride > 0 && k % opts.trace_stride == 0)
      trace->push_back({slot_base + k, eps, outcome.trp_g,
                        ratio_ref > 0.0 ? outcome.trp_g / ratio_ref : 0.0, outcome.zeta,
                        outcome.jammed_channel, greedy_mode});

    const std::size_t best = table.argmax();
    if (k > 0 && best == prev_best) {
      if (++stable >= cfg.psi_end) {
        out.slots = k + 1;
        break;
      }
    } else {
      stable = 0;
    }
    prev_best = best;
    out.slots = k + 1;
  }
  out.best_idx = table.decode(table.argmax());
  out.zero_adjustment = out.best_idx == zero_idx;
  return out;
}

}  // namespace

Algorithm2Result run_algorithm2(const ChannelState& ch, const ScenarioConfig& cfg,
                                Algorithm2Options opts) {
  cfg.validate();
  if (opts.schedule.empty()) opts.schedule = default_srl_schedule(cfg);

  Algorithm2Result res;
  const double ratio_ref =
      opts.ratio_reference > 0.0 ? opts.ratio_reference : upsilon_top(ch, cfg);

  // coarse pass: decoy channel plus primary powers on the chi_q grid
  Algorithm1Options a1;
  a1.scenario = 2;
  a1.chi = cfg.chi_q;
  a1.trace_stride = opts.trace_stride;
  a1.ratio_reference = ratio_ref;
  a1.stream_id = opts.stream_id;
  Algorithm1Result coarse = run_algorithm1(ch, cfg, a1);

  const int victim = coarse.greedy_allocation.victim;
  const std::vector<int> comm = coarse.greedy_allocation.comm;
  std::vector<double> offsets(cfg.n_users);
  for (int i = 0; i < cfg.n_users; ++i)
    offsets[i] = coarse.greedy_allocation.deceive_power(i);

  res.trace = coarse.trace;
  res.total_slots = coarse.slots;
  res.victim = victim;
  res.stages.push_back({0, res.total_slots, offsets, cfg.rho, cfg.rho / cfg.chi_q,
                        coarse.greedy_ratio});

  RngStream act(cfg.seed, opts.stream_id ^ 0x8f3a76c1ULL);
  RngStream jam(cfg.seed, opts.stream_id ^ 0x1d4c9aa2ULL);

  auto committed_ratio = [&](const std::vector<double>& p) {
    const Allocation alloc = Allocation::from_powers(victim, comm, p, cfg);
    RngStream tmp(cfg.seed, 0xace5ULL);
    auto [outcome, js] = run_slot(alloc, ch, JammerState{}, cfg, tmp);
    (void)js;
    return ratio_ref > 0.0 ? outcome.trp_g / ratio_ref : 0.0;
  };

  int stage_no = 0;
  int extra = 0;
  std::size_t next_sched = 0;
  SrlStageSpec current{0.0, 0};
  while (true) {
    if (next_sched < opts.schedule.size()) {
      current = opts.schedule[next_sched++];
    } else {
      if (extra >= opts.max_extra_stages) break;
      ++extra;
      current = SrlStageSpec{2.0 * current.tau / current.chi, current.chi};
    }
    ++stage_no;
    TdStageOutcome td = run_td_stage(ch, cfg, opts, current, victim, comm, offsets,
                                     ratio_ref, res.total_slots, act, jam,
                                     opts.trace_stride > 0 ? &res.trace : nullptr);
    const double omega = 2.0 * current.tau / current.chi;
    offsets = apply_adjustment(offsets, td.best_idx, current, cfg.rho);
    res.total_slots += td.slots;
    res.stages.push_back({stage_no, res.total_slots, offsets, current.tau, omega,
                          committed_ratio(offsets)});
    if (next_sched >= opts.schedule.size() && td.zero_adjustment) {
      res.zero_adjustment_stop = true;
      break;
    }
  }

  res.final_powers = offsets;
  res.final_allocation = Allocation::from_powers(victim, comm, offsets, cfg);
  res.final_ratio = committed_ratio(offsets);
  return res;
}

}  // namespace decoyjam
