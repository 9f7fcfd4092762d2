#ifndef DECOYJAM_BOUNDS_HPP
#define DECOYJAM_BOUNDS_HPP

#include <utility>

#include "decoyjam/rng.hpp"

namespace decoyjam {

// Analytic quantities behind the closed-form performance floors: order
// statistics of exponential power gains, expected decoy spend per user and
// the resulting expected-TRP ratios for the two data-channel policies
// (APP1: hide from the jammer, APP2: chase AP gain).

// Expected maximum over l channels of the sum of n unit-rate exponential
// gains, by adaptive quadrature of its density (relative tolerance 1e-6,
// tail truncated below 1e-10). Throws std::runtime_error when the
// quadrature fails to converge.
double gamma_expectation(int n, int l, double lambda);

// Normalized expected claimed AP gain factor. Exact alternating-sum
// evaluation in rational arithmetic for l1 <= 14 (cancellation cap);
// larger sizes fall back to Monte Carlo (use v_factor_mc directly for a
// standard error). Requires 1 <= n <= l1.
double v_factor(int l1, int n);
std::pair<double, double> v_factor_mc(int l1, int n, long samples, RngStream& stream);

// Expected decoy power per user. APP1 requires l >= n + 1.
double expected_power_app1(int n, int l, double lambda, double p_bar);
double expected_power_app1_alt(int n, int l, double lambda, double p_bar);  // k1 from 1
double expected_power_app2(int n, int l, double lambda, double p_bar);

// Expected TRP under each policy and the no-jammer ceiling. pathloss_mean
// is E(kappa^2); it scales these three but cancels in the ratios.
double etrp_app1(int n, int l, double lambda, double p_bar, double pathloss_mean);
double etrp_app2(int n, int l, double lambda, double p_bar, double pathloss_mean);
double etrp_top(int n, int l, double lambda, double p_bar, double pathloss_mean);

// Ratio of each policy's expected TRP to the ceiling; computed without the
// path-loss factor so the cancellation is exact.
double ratio_app1(int n, int l, double lambda);
double ratio_app2(int n, int l, double lambda);

struct BoundSet {
  double gamma = 0.0;
  double v_factor = 0.0;  // at (l, n)
  double ep_app1 = 0.0;   // NaN when APP1 is out of domain
  double ep_app2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_top = 0.0;
  double ratio_app1 = 0.0;
  double ratio_app2 = 0.0;
  double min_rho_fraction_app1 = 0.0;
  double min_rho_fraction_app2 = 0.0;
};

BoundSet compute_bounds(int n, int l, double lambda, double p_bar, double pathloss_mean);

double harmonic(int m);

}  // namespace decoyjam

#endif
