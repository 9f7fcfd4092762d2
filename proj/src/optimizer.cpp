#include "decoyjam/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "decoyjam/jammer.hpp"

namespace decoyjam {

namespace {

constexpr double kDominanceSlack = 1e-9;  // power units, keeps the argmax off ties
constexpr double kObjTol = 1e-9;
constexpr int kCaseBudget = 512;

struct InnerInstance {
  // fixed assignment, grouped into active (unique data channel, counted in
  // the objective) and parked users (interfered or transmitting data on the
  // decoy channel; they contribute amplitude only, so their decoy power is
  // pinned at the cap).
  std::vector<int> active;          // user indices
  std::vector<int> parked;
  std::vector<double> hjv;          // per user, amplitude gain on decoy channel
  std::vector<double> hp2;          // per active user, squared gain on own data channel
  std::vector<double> hc2;          // per active user, squared AP gain on data channel
  double park_amp = 0.0;            // amplitude contributed by parked users at the cap
  double park_req2 = 0.0;           // sensed-power floor imposed by parked groups
  double park_victim_extra = 0.0;   // parked data power radiated into the decoy channel
  double p_bar = 0.0, rho = 0.0;
};

InnerInstance make_inner(const ChannelState& ch, const ScenarioConfig& cfg, int victim,
                         const std::vector<int>& comm) {
  const int n = cfg.n_users;
  InnerInstance in;
  in.p_bar = cfg.p_bar;
  in.rho = cfg.rho;
  in.hjv.resize(n);
  std::vector<int> count(cfg.n_channels, 0);
  for (int i = 0; i < n; ++i) ++count[comm[i]];
  std::vector<double> shared_power(cfg.n_channels, 0.0);
  for (int i = 0; i < n; ++i) {
    in.hjv[i] = ch.jam_gain(i, victim);
    const bool interfered = count[comm[i]] > 1 || comm[i] == victim;
    if (interfered) {
      in.parked.push_back(i);
      in.park_amp += in.hjv[i] * std::sqrt(cfg.rho);
      const double radiated = (cfg.p_bar - cfg.rho) * ch.jam_gain2(i, comm[i]);
      if (comm[i] == victim)
        in.park_victim_extra += radiated;
      else
        shared_power[comm[i]] += radiated;
    } else {
      in.active.push_back(i);
      in.hp2.push_back(ch.jam_gain2(i, comm[i]));
      in.hc2.push_back(ch.ap_gain2(i, comm[i]));
    }
  }
  for (int c = 0; c < cfg.n_channels; ++c)
    in.park_req2 = std::max(in.park_req2, shared_power[c]);
  return in;
}

// Victim sensed power when the active amplitude sum is F.
inline double victim_power(const InnerInstance& in, double f) {
  return f * f + in.park_victim_extra;
}

// Largest admissible sensed data power for a given active amplitude sum.
inline double dominance_budget(const InnerInstance& in, double f) {
  return victim_power(in, f) - kDominanceSlack;
}

// Water-filling step: minimize sum(hc2 d^2) over lo <= d <= sqrt(rho) with
// sum(hjv d) >= target. Returns false when infeasible.
bool waterfill(const InnerInstance& in, const std::vector<double>& lo, double target,
               std::vector<double>& d) {
  const std::size_t m = in.active.size();
  const double hi = std::sqrt(in.rho);
  d.resize(m);
  double amp_hi = 0.0, amp_lo = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double g = in.hjv[in.active[k]];
    amp_hi += g * hi;
    amp_lo += g * lo[k];
  }
  if (amp_hi < target - 1e-13) return false;
  if (amp_lo >= target) {
    d = lo;
    return true;
  }
  auto fill = [&](double nu) {
    double amp = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double g = in.hjv[in.active[k]];
      double v = (in.hc2[k] > 1e-300) ? nu * g / (2.0 * in.hc2[k])
                                      : (g > 0.0 ? hi : lo[k]);
      v = std::clamp(v, lo[k], hi);
      d[k] = v;
      amp += g * v;
    }
    return amp;
  };
  double nlo = 0.0, nhi = 1.0;
  while (fill(nhi) < target) {
    nhi *= 2.0;
    if (nhi > 1e30) return false;
  }
  for (int it = 0; it < 120; ++it) {
    const double nm = 0.5 * (nlo + nhi);
    if (fill(nm) < target)
      nlo = nm;
    else
      nhi = nm;
  }
  fill(nhi);
  return true;
}

struct InnerSolution {
  bool ok = false;
  double cost = std::numeric_limits<double>::infinity();  // sum hc2 * d^2 over actives
  std::vector<double> d;                                  // active amplitudes
};

// Smallest F for which every per-user and per-group requirement can be met.
double min_amplitude(const InnerInstance& in) {
  double req2 = in.park_req2;
  for (std::size_t k = 0; k < in.active.size(); ++k)
    req2 = std::max(req2, (in.p_bar - in.rho) * in.hp2[k]);
  const double need = req2 + kDominanceSlack - in.park_victim_extra;
  return need > 0.0 ? std::sqrt(need) : 0.0;
}

double max_amplitude(const InnerInstance& in) {
  double amp = in.park_amp;
  const double hi = std::sqrt(in.rho);
  for (int u : in.active) amp += in.hjv[u] * hi;
  return amp;
}

// Cost of the cheapest feasible point with active amplitude sum F.
InnerSolution cost_at(const InnerInstance& in, double f_total) {
  InnerSolution s;
  const double budget = dominance_budget(in, f_total);
  if (budget < in.park_req2 - 1e-15) return s;
  std::vector<double> lo(in.active.size());
  for (std::size_t k = 0; k < in.active.size(); ++k) {
    double need = in.p_bar - (in.hp2[k] > 1e-300
                                  ? budget / in.hp2[k]
                                  : -std::numeric_limits<double>::infinity());
    if (need > in.rho + 1e-12) return s;
    lo[k] = std::sqrt(std::clamp(need, 0.0, in.rho));
  }
  if (!waterfill(in, lo, f_total - in.park_amp, s.d)) return s;
  s.cost = 0.0;
  for (std::size_t k = 0; k < in.active.size(); ++k) s.cost += in.hc2[k] * s.d[k] * s.d[k];
  s.ok = true;
  return s;
}

InnerSolution sweep_solve(const InnerInstance& in) {
  InnerSolution best;
  const double f_min = min_amplitude(in);
  const double f_max = max_amplitude(in);
  if (f_max < f_min) return best;
  const int kPoints = 256;
  double best_f = f_min;
  for (int i = 0; i <= kPoints; ++i) {
    const double f = f_min + (f_max - f_min) * i / kPoints;
    InnerSolution s = cost_at(in, f);
    if (s.ok && s.cost < best.cost) {
      best = std::move(s);
      best_f = f;
    }
  }
  if (!best.ok) return best;
  const double step = (f_max - f_min) / kPoints;
  double a = std::max(f_min, best_f - step), b = std::min(f_max, best_f + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  auto val = [&](double f) {
    InnerSolution s = cost_at(in, f);
    return s.ok ? s.cost : std::numeric_limits<double>::infinity();
  };
  double fc = val(c), fd = val(d);
  for (int it = 0; it < 140; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = val(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = val(d);
    }
  }
  InnerSolution refined = cost_at(in, 0.5 * (a + b));
  if (refined.ok && refined.cost < best.cost) best = std::move(refined);
  return best;
}

// Active-set enumeration: each active user is pinned at zero, pinned at the
// cap, or sits on its own dominance equality. Every pattern reduces to one
// monotone equation in the amplitude sum F.
InnerSolution case_enumeration(const InnerInstance& in) {
  InnerSolution best;
  const std::size_t m = in.active.size();
  const double hi = std::sqrt(in.rho);
  std::size_t patterns = 1;
  for (std::size_t k = 0; k < m; ++k) patterns *= 3;
  std::vector<int> pat(m);
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t rem = code;
    for (std::size_t k = 0; k < m; ++k) {
      pat[k] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    double base = in.park_amp;
    bool valid = true;
    std::vector<std::size_t> eq;
    for (std::size_t k = 0; k < m; ++k) {
      if (pat[k] == 2) base += in.hjv[in.active[k]] * hi;
      if (pat[k] == 0) {
        if (in.hp2[k] <= 1e-300) {
          valid = false;  // no equality exists for an invisible data channel
          break;
        }
        eq.push_back(k);
      }
    }
    if (!valid) continue;

    double f;
    if (eq.empty()) {
      f = base;
    } else {
      // g(F) = base + sum_eq hjv * sqrt(p_bar - (victim_power(F)-slack)/hp2) - F
      auto g = [&](double F) {
        double acc = base;
        for (std::size_t k : eq) {
          const double inner = in.p_bar - dominance_budget(in, F) / in.hp2[k];
          if (inner < 0.0) return -std::numeric_limits<double>::infinity();
          acc += in.hjv[in.active[k]] * std::sqrt(inner);
        }
        return acc - F;
      };
      double f_cap = std::numeric_limits<double>::infinity();
      for (std::size_t k : eq) {
        const double cap2 = in.p_bar * in.hp2[k] + kDominanceSlack - in.park_victim_extra;
        f_cap = std::min(f_cap, cap2 > 0.0 ? std::sqrt(cap2) : 0.0);
      }
      if (g(f_cap) > 0.0) continue;  // equality would need negative decoy power
      double lo_f = 0.0, hi_f = f_cap;
      if (g(lo_f) < 0.0) continue;
      for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo_f + hi_f);
        if (g(mid) > 0.0)
          lo_f = mid;
        else
          hi_f = mid;
      }
      f = 0.5 * (lo_f + hi_f);
    }

    const double budget = dominance_budget(in, f);
    if (budget < in.park_req2 - 1e-12) continue;
    std::vector<double> d(m);
    double cost = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < m; ++k) {
      double d2;
      if (pat[k] == 0) {
        d2 = in.p_bar - budget / in.hp2[k];
        if (d2 < -1e-10 || d2 > in.rho + 1e-10) {
          ok = false;
          break;
        }
        d2 = std::clamp(d2, 0.0, in.rho);
      } else if (pat[k] == 1) {
        d2 = 0.0;
      } else {
        d2 = in.rho;
      }
      if ((in.p_bar - d2) * in.hp2[k] > budget + 1e-12) {
        ok = false;  // a pinned user would out-shine the decoy channel
        break;
      }
      d[k] = std::sqrt(d2);
      cost += in.hc2[k] * d2;
    }
    if (!ok) continue;
    if (cost < best.cost) {
      best.ok = true;
      best.cost = cost;
      best.d = std::move(d);
    }
  }
  return best;
}

OptimizationResult package_result(const InnerInstance& in, const ChannelState& ch,
                                  const ScenarioConfig& cfg, int victim,
                                  const std::vector<int>& comm, const InnerSolution& sol,
                                  const std::string& method) {
  const int n = cfg.n_users;
  std::vector<double> d2(n, 0.0);
  for (int u : in.parked) d2[u] = cfg.rho;
  double f = in.park_amp;
  for (std::size_t k = 0; k < in.active.size(); ++k) {
    d2[in.active[k]] = sol.d[k] * sol.d[k];
    f += in.hjv[in.active[k]] * sol.d[k];
  }
  OptimizationResult r;
  r.allocation = Allocation::from_powers(victim, comm, d2, cfg);
  double g = 0.0;
  for (std::size_t k = 0; k < in.active.size(); ++k)
    g += (cfg.p_bar - d2[in.active[k]]) * in.hc2[k];
  r.objective = -g;
  r.feasible = true;
  r.method = method;
  const double budget = dominance_budget(in, f);
  r.active_constraints.assign(n, ActiveConstraint::interior);
  for (int u : in.parked) r.active_constraints[u] = ActiveConstraint::at_cap;
  for (std::size_t k = 0; k < in.active.size(); ++k) {
    const int u = in.active[k];
    const double p = d2[u];
    if (std::abs((cfg.p_bar - p) * in.hp2[k] - budget) < 1e-6 * std::max(1.0, budget))
      r.active_constraints[u] = ActiveConstraint::deception_equality;
    else if (p < 1e-9)
      r.active_constraints[u] = ActiveConstraint::at_zero;
    else if (p > cfg.rho - 1e-9)
      r.active_constraints[u] = ActiveConstraint::at_cap;
  }
  (void)ch;
  return r;
}

Allocation best_effort_allocation(const ChannelState& ch, const ScenarioConfig& cfg) {
  // Max decoy power everywhere, decoy channel with the largest amplitude
  // sum, data channels claimed greedily by AP gain.
  const int n = cfg.n_users, l = cfg.n_channels;
  int victim = 0;
  double best = -1.0;
  for (int c = 0; c < l; ++c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += ch.jam_gain(i, c);
    if (s > best) {
      best = s;
      victim = c;
    }
  }
  std::vector<int> comm(n);
  std::vector<bool> used(l, false);
  used[victim] = true;
  for (int i = 0; i < n; ++i) {
    int pick = -1;
    for (int c = 0; c < l; ++c) {
      if (used[c]) continue;
      if (pick < 0 || ch.ap_gain2(i, c) > ch.ap_gain2(i, pick)) pick = c;
    }
    if (pick < 0) pick = (victim + 1) % l;  // more users than channels
    else used[pick] = true;
    comm[i] = pick;
  }
  return Allocation::from_powers(victim, comm, std::vector<double>(n, cfg.rho), cfg);
}

OptimizationResult infeasible_result(const ChannelState& ch, const ScenarioConfig& cfg) {
  OptimizationResult r;
  r.allocation = best_effort_allocation(ch, cfg);
  auto sensed = sensed_spectrum(r.allocation, ch);
  RngStream dummy(0, 0);
  auto js = react(JammerState{}, sensed, cfg.n_channels, 0.0, dummy);
  auto x = interference_flags(r.allocation, js.current_channel);
  r.objective = -trp_at_ap(r.allocation, ch, x);
  r.feasible = false;
  r.method = "best-effort";
  r.active_constraints.assign(cfg.n_users, ActiveConstraint::at_cap);
  return r;
}

void enumerate_assignments(int n, int l, int victim,
                           const std::function<void(const std::vector<int>&)>& visit) {
  // distinct data channels whenever possible; duplicates only when forced
  std::vector<int> channels;
  for (int c = 0; c < l; ++c)
    if (c != victim) channels.push_back(c);
  std::vector<int> comm(n);
  if (n <= static_cast<int>(channels.size())) {
    std::vector<int> idx(channels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> pick(n);
    std::function<void(int, unsigned)> rec = [&](int depth, unsigned used_mask) {
      if (depth == n) {
        visit(comm);
        return;
      }
      for (std::size_t j = 0; j < channels.size(); ++j) {
        if (used_mask & (1u << j)) continue;
        comm[depth] = channels[j];
        rec(depth + 1, used_mask | (1u << j));
      }
    };
    rec(0, 0);
  } else {
    std::function<void(int)> rec = [&](int depth) {
      if (depth == n) {
        visit(comm);
        return;
      }
      for (int c : channels) {
        comm[depth] = c;
        rec(depth + 1);
      }
    };
    rec(0);
  }
}

}  // namespace

OptimizationResult solve_full_fixed(const ChannelState& ch, const ScenarioConfig& cfg,
                                    int victim, const std::vector<int>& comm) {
  cfg.validate();
  if (static_cast<int>(comm.size()) != cfg.n_users)
    throw std::invalid_argument("solve_full_fixed: comm size mismatch");
  InnerInstance in = make_inner(ch, cfg, victim, comm);

  std::size_t patterns = 1;
  for (std::size_t k = 0; k < in.active.size(); ++k) patterns *= 3;
  InnerSolution enum_sol;
  if (patterns <= kCaseBudget) enum_sol = case_enumeration(in);
  InnerSolution sweep_sol = sweep_solve(in);

  const InnerSolution* pick = nullptr;
  std::string method;
  if (enum_sol.ok && enum_sol.cost <= sweep_sol.cost + kObjTol) {
    pick = &enum_sol;
    method = "kkt";
  } else if (sweep_sol.ok) {
    pick = &sweep_sol;
    method = "iterative";
  } else if (enum_sol.ok) {
    pick = &enum_sol;
    method = "kkt";
  }
  if (!pick) return infeasible_result(ch, cfg);
  return package_result(in, ch, cfg, victim, comm, *pick, method);
}

OptimizationResult solve_full(const ChannelState& ch, const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.n_users > 4)
    throw std::invalid_argument("solve_full: exhaustive assignment search limited to 4 users");
  OptimizationResult best;
  bool have = false;
  for (int v = 0; v < cfg.n_channels; ++v) {
    enumerate_assignments(cfg.n_users, cfg.n_channels, v, [&](const std::vector<int>& comm) {
      OptimizationResult r = solve_full_fixed(ch, cfg, v, comm);
      if (!r.feasible) return;
      if (!have || r.objective < best.objective) {
        best = std::move(r);
        have = true;
      }
    });
  }
  if (!have) return infeasible_result(ch, cfg);
  return best;
}

ModifiedSolution solve_modified(const ChannelState& ch, const ScenarioConfig& cfg,
                                int victim, const std::vector<int>& comm) {
  const int n = cfg.n_users;
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double hp2 = ch.jam_gain2(i, comm[i]);
    if (hp2 <= 0.0) throw std::domain_error("solve_modified: zero data-channel gain");
    for (int k = 0; k < n; ++k) m(i, k) = ch.jam_gain2(k, victim);
    m(i, i) += hp2;
    rhs(i) = cfg.p_bar * hp2;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd p = lu.solve(rhs);
  p += lu.solve(rhs - m * p);  // one refinement step
  ModifiedSolution s;
  s.p.assign(p.data(), p.data() + n);
  for (double v : s.p) {
    if (v > cfg.rho) s.within_cap = false;
    if (v < 0.0) s.nonnegative = false;
  }
  return s;
}

std::vector<double> solve_modified_capped(const ChannelState& ch, const ScenarioConfig& cfg,
                                          int victim, const std::vector<int>& comm) {
  const int n = cfg.n_users;
  std::vector<double> p(n, 0.0);
  std::vector<bool> fixed(n, false);
  for (int round = 0; round < n + 1; ++round) {
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
      if (!fixed[i]) free.push_back(i);
    if (free.empty()) break;
    const int m = static_cast<int>(free.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) {
      const int i = free[r];
      const double hp2 = ch.jam_gain2(i, comm[i]);
      if (hp2 <= 0.0) throw std::domain_error("solve_modified_capped: zero data-channel gain");
      double moved = 0.0;
      for (int k = 0; k < n; ++k)
        if (fixed[k]) moved += ch.jam_gain2(k, victim) * p[k];
      for (int c = 0; c < m; ++c) a(r, c) = ch.jam_gain2(free[c], victim);
      a(r, r) += hp2;
      rhs(r) = cfg.p_bar * hp2 - moved;
    }
    Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
    bool clean = true;
    for (int r = 0; r < m; ++r) {
      p[free[r]] = sol(r);
      if (sol(r) > cfg.rho) {
        p[free[r]] = cfg.rho;
        fixed[free[r]] = true;
        clean = false;
      }
    }
    if (clean) break;
  }
  return p;
}

double sherman_morrison_check(const ChannelState& ch, const ScenarioConfig& cfg,
                              int victim, const std::vector<int>& comm) {
  const int n = cfg.n_users;
  ModifiedSolution s = solve_modified(ch, cfg, victim, comm);
  double sum_ratio = 0.0, sum_hv2 = 0.0;
  for (int i = 0; i < n; ++i) {
    sum_hv2 += ch.jam_gain2(i, victim);
    sum_ratio += ch.jam_gain2(i, victim) / ch.jam_gain2(i, comm[i]);
  }
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double closed =
        cfg.p_bar - cfg.p_bar * (sum_hv2 / ch.jam_gain2(k, comm[k])) / (1.0 + sum_ratio);
    worst = std::max(worst, std::abs(closed - s.p[k]));
  }
  return worst;
}

OptimizationResult brute_force(const ChannelState& ch, const ScenarioConfig& cfg,
                               double grid_step) {
  cfg.validate();
  if (cfg.n_users > 3 || cfg.n_channels > 8)
    throw std::invalid_argument("brute_force: limited to 3 users and 8 channels");
  if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force: grid_step must be positive");

  std::vector<double> grid;
  for (double v = 0.0; v < cfg.rho + 1e-9; v += grid_step) grid.push_back(std::min(v, cfg.rho));
  if (grid.back() < cfg.rho - 1e-9) grid.push_back(cfg.rho);
  const int gn = static_cast<int>(grid.size());
  const int n = cfg.n_users, l = cfg.n_channels;

  double best_g = -1.0;
  int best_v = -1;
  std::vector<int> best_comm;
  std::vector<double> best_d2;

  std::vector<int> comm(n);
  std::vector<int> combo(n, 0);
  for (int v = 0; v < l; ++v) {
    std::vector<double> hjv(n);
    for (int i = 0; i < n; ++i) hjv[i] = ch.jam_gain(i, v);
    // all data-channel assignments, duplicates and the decoy channel included
    const long total = static_cast<long>(std::pow(l, n));
    for (long code = 0; code < total; ++code) {
      long rem = code;
      for (int i = 0; i < n; ++i) {
        comm[i] = static_cast<int>(rem % l);
        rem /= l;
      }
      std::vector<int> count(l, 0);
      for (int i = 0; i < n; ++i) ++count[comm[i]];
      std::vector<int> active, parked;
      for (int i = 0; i < n; ++i) {
        if (comm[i] == v || count[comm[i]] > 1)
          parked.push_back(i);
        else
          active.push_back(i);
      }
      double park_amp = 0.0, park_victim_extra = 0.0;
      std::vector<double> park_power(l, 0.0);
      for (int i : parked) {
        park_amp += hjv[i] * std::sqrt(cfg.rho);
        const double radiated = (cfg.p_bar - cfg.rho) * ch.jam_gain2(i, comm[i]);
        if (comm[i] == v)
          park_victim_extra += radiated;
        else
          park_power[comm[i]] += radiated;
      }

      auto jams_victim = [&](const std::vector<double>& d2a) {
        double amp = park_amp;
        for (std::size_t k = 0; k < active.size(); ++k)
          amp += hjv[active[k]] * std::sqrt(d2a[k]);
        const double vp = amp * amp + park_victim_extra;
        for (int c = 0; c < l; ++c) {
          if (c == v) continue;
          double s = park_power[c];
          for (std::size_t k = 0; k < active.size(); ++k)
            if (comm[active[k]] == c) s += (cfg.p_bar - d2a[k]) * ch.jam_gain2(active[k], c);
          if (c < v ? s >= vp : s > vp) return false;
        }
        return true;
      };

      if (active.empty()) {
        std::vector<double> none;
        if (jams_victim(none) && best_g < 0.0) {
          best_g = 0.0;
          best_v = v;
          best_comm = comm;
          best_d2.assign(n, cfg.rho);
        }
        continue;
      }

      // grid over all but the first active user; the first one is binary
      // searched (feasibility is monotone in its decoy power, received
      // power is monotone the other way)
      const int na = static_cast<int>(active.size());
      std::vector<double> d2a(na, 0.0);
      std::fill(combo.begin(), combo.begin() + na, 0);
      const long inner = static_cast<long>(std::pow(gn, na - 1));
      for (long icode = 0; icode < inner; ++icode) {
        long rem = icode;
        for (int k = 1; k < na; ++k) {
          d2a[k] = grid[rem % gn];
          rem /= gn;
        }
        // upper bound with zero decoy on the first user; prune if hopeless
        double g_upper = (cfg.p_bar - 0.0) * ch.ap_gain2(active[0], comm[active[0]]);
        for (int k = 1; k < na; ++k)
          g_upper += (cfg.p_bar - d2a[k]) * ch.ap_gain2(active[k], comm[active[k]]);
        if (g_upper <= best_g) continue;
        // binary search the smallest feasible grid level for user 0
        int lo = 0, hi = gn - 1;
        d2a[0] = grid[hi];
        if (!jams_victim(d2a)) continue;
        while (lo < hi) {
          const int mid = (lo + hi) / 2;
          d2a[0] = grid[mid];
          if (jams_victim(d2a))
            hi = mid;
          else
            lo = mid + 1;
        }
        d2a[0] = grid[lo];
        double g = 0.0;
        for (int k = 0; k < na; ++k)
          g += (cfg.p_bar - d2a[k]) * ch.ap_gain2(active[k], comm[active[k]]);
        if (g > best_g) {
          best_g = g;
          best_v = v;
          best_comm = comm;
          best_d2.assign(n, cfg.rho);
          for (int k = 0; k < na; ++k) best_d2[active[k]] = d2a[k];
        }
      }
    }
  }

  if (best_v < 0) return infeasible_result(ch, cfg);
  OptimizationResult r;
  r.allocation = Allocation::from_powers(best_v, best_comm, best_d2, cfg);
  r.objective = -best_g;
  r.feasible = true;
  r.method = "grid";
  r.active_constraints.assign(n, ActiveConstraint::interior);
  for (int i = 0; i < n; ++i) {
    if (best_d2[i] < 1e-12)
      r.active_constraints[i] = ActiveConstraint::at_zero;
    else if (best_d2[i] > cfg.rho - 1e-12)
      r.active_constraints[i] = ActiveConstraint::at_cap;
  }
  return r;
}

std::string optimization_result_csv(const OptimizationResult& r, const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "user,comm_channel,victim_channel,d2,dprime2,objective,feasible,method\n";
  char buf[160];
  for (std::size_t i = 0; i < r.allocation.comm.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%.9g,%.9g,%.9g,%d,%s\n", i,
                  r.allocation.comm[i], r.allocation.victim,
                  r.allocation.deceive_power(static_cast<int>(i)),
                  r.allocation.comm_power(static_cast<int>(i)), r.objective,
                  r.feasible ? 1 : 0, r.method.c_str());
    out << buf;
  }
  (void)cfg;
  return out.str();
}

}  // namespace decoyjam
