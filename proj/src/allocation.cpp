#include "decoyjam/allocation.hpp"

#include <cmath>
#include <stdexcept>

namespace decoyjam {

double Allocation::total_deceive_power() const {
  double s = 0.0;
  for (double d : deceive_amp) s += d * d;
  return s;
}

Allocation Allocation::from_powers(int victim, std::vector<int> comm,
                                   const std::vector<double>& deceive_power,
                                   const ScenarioConfig& cfg) {
  Allocation a;
  a.victim = victim;
  a.comm = std::move(comm);
  a.deceive_amp.resize(deceive_power.size());
  a.comm_amp.resize(deceive_power.size());
  for (std::size_t i = 0; i < deceive_power.size(); ++i) {
    double p = deceive_power[i];
    if (p < 0.0 && p > -1e-12) p = 0.0;
    if (p < 0.0 || p > cfg.p_bar + 1e-9)
      throw std::invalid_argument("deceive power outside [0, p_bar]");
    a.deceive_amp[i] = std::sqrt(p);
    a.comm_amp[i] = std::sqrt(std::max(cfg.p_bar - p, 0.0));
  }
  return a;
}

void Allocation::validate(const ScenarioConfig& cfg) const {
  const std::size_t n = comm.size();
  if (deceive_amp.size() != n || comm_amp.size() != n)
    throw std::invalid_argument("allocation: inconsistent sizes");
  if (victim < 0 || victim >= cfg.n_channels)
    throw std::invalid_argument("allocation: victim channel out of range");
  for (std::size_t i = 0; i < n; ++i) {
    if (comm[i] < 0 || comm[i] >= cfg.n_channels)
      throw std::invalid_argument("allocation: comm channel out of range");
    if (comm[i] == victim)
      throw std::invalid_argument("allocation: comm channel equals victim channel");
    if (deceive_amp[i] < 0.0 || comm_amp[i] < 0.0)
      throw std::invalid_argument("allocation: negative amplitude");
    const double split = deceive_amp[i] * deceive_amp[i] + comm_amp[i] * comm_amp[i];
    if (std::abs(split - cfg.p_bar) > 1e-12 * cfg.p_bar)
      throw std::invalid_argument("allocation: power split does not equal p_bar");
    if (deceive_amp[i] * deceive_amp[i] > cfg.rho + 1e-9)
      throw std::invalid_argument("allocation: decoy power above rho");
  }
}

double trp_at_ap(const Allocation& alloc, const ChannelState& ch,
                 const std::vector<std::uint8_t>& x) {
  double g = 0.0;
  for (std::size_t i = 0; i < alloc.comm.size(); ++i) {
    if (!x[i]) continue;
    g += alloc.comm_power(static_cast<int>(i)) *
         ch.ap_gain2(static_cast<int>(i), alloc.comm[i]);
  }
  return g;
}

std::vector<double> sensed_spectrum(const Allocation& alloc, const ChannelState& ch) {
  std::vector<double> sensed(ch.n_channels, 0.0);
  double amp = 0.0;
  for (std::size_t i = 0; i < alloc.deceive_amp.size(); ++i)
    amp += alloc.deceive_amp[i] * ch.jam_gain(static_cast<int>(i), alloc.victim);
  sensed[alloc.victim] = amp * amp;
  for (std::size_t i = 0; i < alloc.comm.size(); ++i) {
    const int c = alloc.comm[i];
    sensed[c] += alloc.comm_power(static_cast<int>(i)) *
                 ch.jam_gain2(static_cast<int>(i), c);
  }
  return sensed;
}

std::vector<std::uint8_t> interference_flags(const Allocation& alloc, int jammed_channel) {
  const std::size_t n = alloc.comm.size();
  std::vector<std::uint8_t> x(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (alloc.comm[i] == jammed_channel) x[i] = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i && alloc.comm[k] == alloc.comm[i]) x[i] = 0;
  }
  return x;
}

double reward_value(double g, int zeta, double total_deceive_power,
                    const ScenarioConfig& cfg) {
  return cfg.w1 * g / cfg.p_bar - cfg.w2 * zeta - cfg.w3 * total_deceive_power;
}

}  // namespace decoyjam
