#include "decoyjam/jammer.hpp"

#include <stdexcept>

namespace decoyjam {

JammerState react(const JammerState& state, const std::vector<double>& sensed,
                  int n_channels, double random_prob, RngStream& stream) {
  (void)state;
  if (static_cast<int>(sensed.size()) != n_channels)
    throw std::invalid_argument("react: sensed spectrum length does not match channel count");
  if (random_prob > 0.0 && stream.uniform() < random_prob)
    return JammerState{stream.uniform_int(n_channels)};
  int best = 0;
  for (int c = 1; c < n_channels; ++c)
    if (sensed[c] > sensed[best]) best = c;
  return JammerState{best};
}

}  // namespace decoyjam
