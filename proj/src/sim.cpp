#include "decoyjam/sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace decoyjam {

std::pair<SlotOutcome, JammerState> run_slot(const Allocation& alloc, const ChannelState& ch,
                                             const JammerState& jstate,
                                             const ScenarioConfig& cfg, RngStream& jam_stream) {
  const auto sensed = sensed_spectrum(alloc, ch);
  const JammerState next =
      react(jstate, sensed, cfg.n_channels, cfg.jammer_random_prob, jam_stream);
  SlotOutcome out;
  out.jammed_channel = next.current_channel;
  out.x = interference_flags(alloc, next.current_channel);
  out.trp_g = trp_at_ap(alloc, ch, out.x);
  out.zeta = (next.current_channel == alloc.victim) ? 0 : 1;
  out.reward = reward_value(out.trp_g, out.zeta, alloc.total_deceive_power(), cfg);
  return {out, next};
}

double upsilon_top(const ChannelState& ch, const ScenarioConfig& cfg) {
  double total = 0.0;
  for (int i = 0; i < ch.n_users; ++i) {
    double best = 0.0;
    for (int c = 0; c < ch.n_channels; ++c) best = std::max(best, ch.ap_gain2(i, c));
    total += cfg.p_bar * best;
  }
  return total;
}

Metrics baseline_random_hop(const ChannelState& ch, const ScenarioConfig& cfg,
                            bool with_jammer, long slots, RngStream& stream) {
  Metrics m;
  m.trp.reserve(slots);
  m.trp_ratio.reserve(slots);
  m.success.reserve(slots);
  const double top = upsilon_top(ch, cfg);
  JammerState js;
  std::vector<int> comm(cfg.n_users);
  const std::vector<double> zeros(cfg.n_users, 0.0);
  for (long t = 0; t < slots; ++t) {
    for (int i = 0; i < cfg.n_users; ++i) comm[i] = stream.uniform_int(cfg.n_channels);
    Allocation alloc = Allocation::from_powers(0, comm, zeros, cfg);
    int jammed = -1;
    if (with_jammer) {
      const auto sensed = sensed_spectrum(alloc, ch);
      js = react(js, sensed, cfg.n_channels, cfg.jammer_random_prob, stream);
      jammed = js.current_channel;
    }
    const auto x = interference_flags(alloc, jammed);
    const double g = trp_at_ap(alloc, ch, x);
    m.trp.push_back(g);
    m.trp_ratio.push_back(top > 0.0 ? g / top : 0.0);
    m.success.push_back(0);
  }
  double st = 0.0, sr = 0.0;
  for (long t = 0; t < slots; ++t) {
    st += m.trp[t];
    sr += m.trp_ratio[t];
  }
  m.mean_trp = slots ? st / slots : 0.0;
  m.mean_ratio = slots ? sr / slots : 0.0;
  return m;
}

double success_rate(const std::vector<std::uint8_t>& series, std::size_t window) {
  if (window == 0 || window > series.size())
    throw std::domain_error("success_rate: window must be in [1, series length]");
  std::size_t hits = 0;
  for (std::size_t i = series.size() - window; i < series.size(); ++i)
    if (series[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(window);
}

}  // namespace decoyjam
