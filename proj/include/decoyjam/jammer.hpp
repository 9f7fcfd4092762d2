#ifndef DECOYJAM_JAMMER_HPP
#define DECOYJAM_JAMMER_HPP

#include <vector>

#include "decoyjam/rng.hpp"

namespace decoyjam {

struct JammerState {
  int current_channel = -1;  // -1 before the first sensing
};

// Reactive policy: jam the channel with the highest sensed power (ties go
// to the lowest index). With probability random_prob a uniformly random
// channel is jammed instead. The switch takes effect within the slot.
// Throws std::invalid_argument when sensed.size() != n_channels.
JammerState react(const JammerState& state, const std::vector<double>& sensed,
                  int n_channels, double random_prob, RngStream& stream);

}  // namespace decoyjam

#endif
