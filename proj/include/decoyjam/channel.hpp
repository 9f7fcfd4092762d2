#ifndef DECOYJAM_CHANNEL_HPP
#define DECOYJAM_CHANNEL_HPP

#include <string>
#include <vector>

#include "decoyjam/config.hpp"
#include "decoyjam/rng.hpp"

namespace decoyjam {

// Amplitude gains of every (user, channel) pair toward the access point
// (hc) and toward the jammer (hj). Values are immutable after construction.
struct ChannelState {
  int n_users = 0;
  int n_channels = 0;
  std::vector<double> hc;  // row-major [user * n_channels + channel]
  std::vector<double> hj;

  double ap_gain(int user, int channel) const { return hc[user * n_channels + channel]; }
  double jam_gain(int user, int channel) const { return hj[user * n_channels + channel]; }
  double ap_gain2(int user, int channel) const {
    double g = ap_gain(user, channel);
    return g * g;
  }
  double jam_gain2(int user, int channel) const {
    double g = jam_gain(user, channel);
    return g * g;
  }
};

// Rayleigh fading: squared gains are exponential with rate lambda. With path
// loss enabled, users and the jammer get fixed uniform positions in the unit
// square (access point at its center) and each link is scaled by
// (distance/kappa0)^-beta.
ChannelState draw_channels(const ScenarioConfig& cfg, RngStream& stream);

// CSV with columns user,channel,h_c,h_j at 9 significant digits.
std::string channel_state_csv(const ChannelState& ch);
ChannelState channel_state_from_csv(const std::string& text);

}  // namespace decoyjam

#endif
