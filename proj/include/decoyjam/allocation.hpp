#ifndef DECOYJAM_ALLOCATION_HPP
#define DECOYJAM_ALLOCATION_HPP

#include <cstdint>
#include <vector>

#include "decoyjam/channel.hpp"
#include "decoyjam/config.hpp"

namespace decoyjam {

// Per-slot transmit plan: one common decoy channel, one communication
// channel per user, and the amplitude split between decoy and data. The
// full budget is always spent: deceive_amp^2 + comm_amp^2 = p_bar.
struct Allocation {
  int victim = 0;
  std::vector<int> comm;
  std::vector<double> deceive_amp;  // d_i
  std::vector<double> comm_amp;     // d'_i

  double deceive_power(int user) const { return deceive_amp[user] * deceive_amp[user]; }
  double comm_power(int user) const { return comm_amp[user] * comm_amp[user]; }
  double total_deceive_power() const;

  // Builds an allocation from decoy powers, assigning the remainder of the
  // budget to the communication amplitude.
  static Allocation from_powers(int victim, std::vector<int> comm,
                                const std::vector<double>& deceive_power,
                                const ScenarioConfig& cfg);

  // Checks the full-power split, the decoy cap and comm != victim.
  // Throws std::invalid_argument on violation.
  void validate(const ScenarioConfig& cfg) const;
};

// Outcome of one time slot.
struct SlotOutcome {
  int jammed_channel = -1;
  std::vector<std::uint8_t> x;  // 1 iff user's channel is neither jammed nor shared
  double trp_g = 0.0;
  int zeta = 1;  // 0 iff the decoy channel was jammed
  double reward = 0.0;
};

// Total received power at the access point: sum over users of
// comm_power * ap_gain^2 * x.
double trp_at_ap(const Allocation& alloc, const ChannelState& ch,
                 const std::vector<std::uint8_t>& x);

// Per-channel power seen by the jammer. The decoy channel carries the
// phase-aligned amplitude sum squared; data transmissions add as powers.
std::vector<double> sensed_spectrum(const Allocation& alloc, const ChannelState& ch);

// Interference flags: x_i = 1 iff user i's channel is not jammed and no
// other user transmits data on it.
std::vector<std::uint8_t> interference_flags(const Allocation& alloc, int jammed_channel);

// w1 * g / p_bar - w2 * zeta - w3 * (total decoy power)
double reward_value(double g, int zeta, double total_deceive_power,
                    const ScenarioConfig& cfg);

}  // namespace decoyjam

#endif
