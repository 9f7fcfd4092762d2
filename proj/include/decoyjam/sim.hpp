#ifndef DECOYJAM_SIM_HPP
#define DECOYJAM_SIM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "decoyjam/allocation.hpp"
#include "decoyjam/channel.hpp"
#include "decoyjam/config.hpp"
#include "decoyjam/jammer.hpp"

namespace decoyjam {

struct Metrics {
  std::vector<double> trp;
  std::vector<double> trp_ratio;       // per slot, against upsilon_top of the draw
  std::vector<std::uint8_t> success;   // jammed == victim
  double mean_trp = 0.0;
  double mean_ratio = 0.0;
};

// One time slot: sense, react, derive interference flags, score.
std::pair<SlotOutcome, JammerState> run_slot(const Allocation& alloc, const ChannelState& ch,
                                             const JammerState& jstate,
                                             const ScenarioConfig& cfg, RngStream& jam_stream);

// Highest possible received power for this draw: full budget on each
// user's best AP channel, no jammer.
double upsilon_top(const ChannelState& ch, const ScenarioConfig& cfg);

// Uniform random channel per user per slot, full power, no decoy channel.
Metrics baseline_random_hop(const ChannelState& ch, const ScenarioConfig& cfg,
                            bool with_jammer, long slots, RngStream& stream);

// Fraction of successes in the trailing window. Throws std::domain_error
// for an empty window or one longer than the series.
double success_rate(const std::vector<std::uint8_t>& series, std::size_t window);

}  // namespace decoyjam

#endif
