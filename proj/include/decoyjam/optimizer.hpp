#ifndef DECOYJAM_OPTIMIZER_HPP
#define DECOYJAM_OPTIMIZER_HPP

#include <string>
#include <vector>

#include "decoyjam/allocation.hpp"
#include "decoyjam/channel.hpp"
#include "decoyjam/config.hpp"

namespace decoyjam {

enum class ActiveConstraint { interior, at_zero, at_cap, deception_equality };

struct OptimizationResult {
  Allocation allocation;
  double objective = 0.0;  // minus the received power at the AP
  std::vector<ActiveConstraint> active_constraints;
  bool feasible = false;
  std::string method;  // "kkt", "iterative" or "grid"
};

// Full continuous decoy-power problem for a fixed channel assignment:
// maximize the AP power subject to the decoy channel dominating every
// sensed data channel (strict, with a small power slack), the per-user
// decoy cap and the full-power split. Critical points come from an
// active-set enumeration; a one-dimensional feasible-direction search over
// the decoy amplitude sum acts as fallback and cross-check.
OptimizationResult solve_full_fixed(const ChannelState& ch, const ScenarioConfig& cfg,
                                    int victim, const std::vector<int>& comm);

// Searches channel assignments too (decoy channel and per-user data
// channels). Requires n_users <= 4.
OptimizationResult solve_full(const ChannelState& ch, const ScenarioConfig& cfg);

struct ModifiedSolution {
  std::vector<double> p;    // decoy power per user
  bool within_cap = true;   // all p_i <= rho
  bool nonnegative = true;  // all p_i >= 0
};

// Linearized problem: drops the amplitude cross terms of the decoy sum,
// giving a linear system in the decoy powers (solved by LU with one
// refinement step, no explicit inverse). Throws std::domain_error when a
// data-channel gain is exactly zero.
ModifiedSolution solve_modified(const ChannelState& ch, const ScenarioConfig& cfg,
                                int victim, const std::vector<int>& comm);

// Boundary handling: users whose solution exceeds rho are clamped there,
// removed from the system, and the rest is re-solved until clean.
std::vector<double> solve_modified_capped(const ChannelState& ch, const ScenarioConfig& cfg,
                                          int victim, const std::vector<int>& comm);

// Rank-one update identity for the linearized system; returns the maximum
// absolute deviation between the closed form and solve_modified.
double sherman_morrison_check(const ChannelState& ch, const ScenarioConfig& cfg,
                              int victim, const std::vector<int>& comm);

// Exhaustive oracle: every assignment (decoy channel and data channels,
// duplicates included) and every decoy power on the grid {0, step, ..., rho};
// feasibility is judged by replaying the sensed spectrum through the
// reactive policy. Requires n_users <= 3 and n_channels <= 8.
OptimizationResult brute_force(const ChannelState& ch, const ScenarioConfig& cfg,
                               double grid_step);

std::string optimization_result_csv(const OptimizationResult& r, const ScenarioConfig& cfg);

}  // namespace decoyjam

#endif
