#include "decoyjam/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace decoyjam {

void ScenarioConfig::validate() const {
  if (n_users < 1) throw std::invalid_argument("n_users must be >= 1");
  if (n_channels < 2) throw std::invalid_argument("n_channels must be >= 2");
  if (!(rho > 0.0) || rho > p_bar)
    throw std::invalid_argument("rho must satisfy 0 < rho <= p_bar");
  if (!(p_bar > 0.0)) throw std::invalid_argument("p_bar must be positive");
  if (!(lambda_rate > 0.0)) throw std::invalid_argument("lambda_rate must be positive");
  if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0)
    throw std::invalid_argument("reward weights must be nonnegative");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must be in (0,1]");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("gamma must be in (0,1]");
  if (phi_eps <= 0) throw std::invalid_argument("phi_eps must be positive");
  if (eps_thr < 0.0 || eps_thr > 1.0)
    throw std::invalid_argument("eps_thr must be in [0,1]");
  if (chi_q < 1) throw std::invalid_argument("chi_q must be >= 1");
  if (chi_td < 1) throw std::invalid_argument("chi_td must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (pi_iteration <= 0) throw std::invalid_argument("pi_iteration must be positive");
  if (psi_end <= 0) throw std::invalid_argument("psi_end must be positive");
  if (jammer_random_prob < 0.0 || jammer_random_prob > 1.0)
    throw std::invalid_argument("jammer_random_prob must be in [0,1]");
  if (!(kappa0 > 0.0)) throw std::invalid_argument("kappa0 must be positive");
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> config_entries(const ScenarioConfig& c) {
  return {
      {"n_users", std::to_string(c.n_users)},
      {"n_channels", std::to_string(c.n_channels)},
      {"p_bar", format_double(c.p_bar)},
      {"rho", format_double(c.rho)},
      {"lambda_rate", format_double(c.lambda_rate)},
      {"pathloss_enabled", c.pathloss_enabled ? "1" : "0"},
      {"kappa0", format_double(c.kappa0)},
      {"beta", format_double(c.beta)},
      {"w1", format_double(c.w1)},
      {"w2", format_double(c.w2)},
      {"w3", format_double(c.w3)},
      {"alpha", format_double(c.alpha)},
      {"gamma", format_double(c.gamma)},
      {"phi_eps", std::to_string(c.phi_eps)},
      {"eps_thr", format_double(c.eps_thr)},
      {"chi_q", std::to_string(c.chi_q)},
      {"chi_td", std::to_string(c.chi_td)},
      {"tau", format_double(c.tau)},
      {"pi_iteration", std::to_string(c.pi_iteration)},
      {"psi_end", std::to_string(c.psi_end)},
      {"jammer_random_prob", format_double(c.jammer_random_prob)},
      {"seed", std::to_string(c.seed)},
  };
}

void apply_config_entry(ScenarioConfig& c, const std::string& key, const std::string& value) {
  auto as_d = [&] { return std::stod(value); };
  auto as_i = [&] { return std::stoi(value); };
  auto as_l = [&] { return std::stol(value); };
  if (key == "n_users") c.n_users = as_i();
  else if (key == "n_channels") c.n_channels = as_i();
  else if (key == "p_bar") c.p_bar = as_d();
  else if (key == "rho") c.rho = as_d();
  else if (key == "lambda_rate") c.lambda_rate = as_d();
  else if (key == "pathloss_enabled") c.pathloss_enabled = (value != "0" && value != "false");
  else if (key == "kappa0") c.kappa0 = as_d();
  else if (key == "beta") c.beta = as_d();
  else if (key == "w1") c.w1 = as_d();
  else if (key == "w2") c.w2 = as_d();
  else if (key == "w3") c.w3 = as_d();
  else if (key == "alpha") c.alpha = as_d();
  else if (key == "gamma") c.gamma = as_d();
  else if (key == "phi_eps") c.phi_eps = as_l();
  else if (key == "eps_thr") c.eps_thr = as_d();
  else if (key == "chi_q") c.chi_q = as_i();
  else if (key == "chi_td") c.chi_td = as_i();
  else if (key == "tau") c.tau = as_d();
  else if (key == "pi_iteration") c.pi_iteration = as_l();
  else if (key == "psi_end") c.psi_end = as_l();
  else if (key == "jammer_random_prob") c.jammer_random_prob = as_d();
  else if (key == "seed") c.seed = std::stoull(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : config_entries(cfg)) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace decoyjam
