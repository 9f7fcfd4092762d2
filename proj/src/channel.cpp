#include "decoyjam/channel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace decoyjam {

ChannelState draw_channels(const ScenarioConfig& cfg, RngStream& stream) {
  cfg.validate();
  const int n = cfg.n_users;
  const int l = cfg.n_channels;
  ChannelState ch;
  ch.n_users = n;
  ch.n_channels = l;
  ch.hc.resize(static_cast<std::size_t>(n) * l);
  ch.hj.resize(static_cast<std::size_t>(n) * l);

  std::vector<double> ap_factor(n, 1.0), jam_factor(n, 1.0);
  if (cfg.pathloss_enabled) {
    const double ap_x = 0.5, ap_y = 0.5;
    double jx = stream.uniform(), jy = stream.uniform();
    for (int i = 0; i < n; ++i) {
      double ux = stream.uniform(), uy = stream.uniform();
      double dc = std::hypot(ux - ap_x, uy - ap_y);
      double dj = std::hypot(ux - jx, uy - jy);
      ap_factor[i] = std::pow(dc / cfg.kappa0, -cfg.beta);
      jam_factor[i] = std::pow(dj / cfg.kappa0, -cfg.beta);
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < l; ++c) {
      ch.hc[i * l + c] = std::sqrt(stream.exponential(cfg.lambda_rate) * ap_factor[i]);
      ch.hj[i * l + c] = std::sqrt(stream.exponential(cfg.lambda_rate) * jam_factor[i]);
    }
  }
  return ch;
}

std::string channel_state_csv(const ChannelState& ch) {
  std::ostringstream out;
  out << "user,channel,h_c,h_j\n";
  char buf[96];
  for (int i = 0; i < ch.n_users; ++i) {
    for (int c = 0; c < ch.n_channels; ++c) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g\n", i, c, ch.ap_gain(i, c),
                    ch.jam_gain(i, c));
      out << buf;
    }
  }
  return out.str();
}

ChannelState channel_state_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("user,channel", 0) != 0)
    throw std::runtime_error("channel CSV: missing header");
  struct Row {
    int user, channel;
    double hc, hj;
  };
  std::vector<Row> rows;
  int max_user = -1, max_chan = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &r.user, &r.channel, &r.hc, &r.hj) != 4)
      throw std::runtime_error("channel CSV: bad row: " + line);
    rows.push_back(r);
    max_user = std::max(max_user, r.user);
    max_chan = std::max(max_chan, r.channel);
  }
  ChannelState ch;
  ch.n_users = max_user + 1;
  ch.n_channels = max_chan + 1;
  ch.hc.assign(static_cast<std::size_t>(ch.n_users) * ch.n_channels, -1.0);
  ch.hj = ch.hc;
  for (const auto& r : rows) {
    ch.hc[r.user * ch.n_channels + r.channel] = r.hc;
    ch.hj[r.user * ch.n_channels + r.channel] = r.hj;
  }
  for (double v : ch.hc)
    if (v < 0.0) throw std::runtime_error("channel CSV: incomplete grid");
  return ch;
}

}  // namespace decoyjam
