#ifndef DECOYJAM_CONFIG_HPP
#define DECOYJAM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

namespace decoyjam {

// All scalar knobs of the scenario: network size, power budgets, fading
// rate, reward weights and learning schedules.
struct ScenarioConfig {
  int n_users = 1;        // N
  int n_channels = 4;     // L
  double p_bar = 10.0;    // per-slot power budget per user
  double rho = 5.0;       // decoy power cap per user
  double lambda_rate = 1.0;  // rate of the exponential channel power gains

  bool pathloss_enabled = false;
  double kappa0 = 1.0;  // reference distance
  double beta = 2.0;    // attenuation exponent

  double w1 = 3.5;  // reward weight on normalized received power
  double w2 = 1.5;  // penalty when the decoy channel is not jammed
  double w3 = 1.5;  // penalty on total decoy power

  double alpha = 0.9;  // learning rate
  double gamma = 0.9;  // discount factor

  long phi_eps = 10000;     // exploration decay constant (slots)
  double eps_thr = 1e-4;    // exploration floor
  int chi_q = 25;           // power levels - 1 for the tabular learner
  int chi_td = 10;          // power levels - 1 per refinement stage
  double tau = 2.0;         // initial refinement half-range
  long pi_iteration = 60000;  // hard slot cap per learning run
  long psi_end = 200;         // refinement termination patience (slots)

  double jammer_random_prob = 0.0;  // epsilon_J
  std::uint64_t seed = 1;

  // Throws std::invalid_argument when a constraint is violated.
  void validate() const;
};

// Flat key=value config file support. Unknown keys are rejected.
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});
void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::map<std::string, std::string> config_entries(const ScenarioConfig& cfg);

// FNV-1a digest of the resolved key set, hex encoded. Stable across runs
// with the same resolved configuration.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace decoyjam

#endif
