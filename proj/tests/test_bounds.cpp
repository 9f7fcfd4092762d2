#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decoyjam/bounds.hpp"

using namespace decoyjam;

TEST_CASE("gamma expectation: exact small cases") {
  CHECK(gamma_expectation(1, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(gamma_expectation(1, 3, 1.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-7));
  CHECK(gamma_expectation(2, 1, 1.0) == doctest::Approx(2.0).epsilon(1e-7));
  // scale: rate lambda divides the mean
  CHECK(gamma_expectation(1, 3, 2.0) == doctest::Approx(11.0 / 12.0).epsilon(1e-7));
}

TEST_CASE("gamma matches harmonic numbers for one user") {
  for (int l = 1; l <= 14; ++l)
    CHECK(std::abs(gamma_expectation(1, l, 1.0) - harmonic(l)) < 1e-6 * harmonic(l));
}

TEST_CASE("gamma grows in both the user and channel count") {
  double prev_l = 0.0;
  for (int l = 2; l <= 10; ++l) {
    const double g = gamma_expectation(2, l, 1.0);
    CHECK(g > prev_l);
    prev_l = g;
  }
  double prev_n = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double g = gamma_expectation(n, 5, 1.0);
    CHECK(g > prev_n);
    prev_n = g;
  }
}

TEST_CASE("v_factor: harmonic identities and exact small cases") {
  CHECK(v_factor(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v_factor(3, 1) == doctest::Approx(11.0 / 6.0).epsilon(1e-12));
  for (int l = 1; l <= 14; ++l)
    CHECK(std::abs(v_factor(l, 1) - harmonic(l)) < 1e-6 * harmonic(l));
  CHECK_THROWS_AS(v_factor(2, 3), std::domain_error);
}

TEST_CASE("v_factor equals the literal nested alternating sums (two users)") {
  // literal double sum for n = 2: sum over (k1, k2) != (0,0) of
  // C(l1,k1) C(l1,k2) (-1)^(1+k1+k2) / (k1+k2), plus the single-user tail
  auto choose = [](int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - i + 1) / i;
    return c;
  };
  for (int l1 = 2; l1 <= 6; ++l1) {
    double first = 0.0;
    for (int k1 = 0; k1 <= l1; ++k1)
      for (int k2 = 0; k2 <= l1; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        first += choose(l1, k1) * choose(l1, k2) *
                 (((1 + k1 + k2) % 2 == 0) ? 1.0 : -1.0) / (k1 + k2);
      }
    double second = 0.0;
    for (int k1 = 1; k1 <= l1 - 1; ++k1)
      second += choose(l1 - 1, k1) * ((k1 % 2 == 1) ? 1.0 : -1.0) / k1;
    const double literal = 0.5 * (first + second);
    CHECK(v_factor(l1, 2) == doctest::Approx(literal).epsilon(1e-10));
  }
}

TEST_CASE("v_factor agrees with its Monte Carlo sampler") {
  RngStream s(99, 0);
  auto [mc, se] = v_factor_mc(2, 2, 400000, s);
  CHECK(std::abs(mc - v_factor(2, 2)) < 3.0 * se);
  RngStream s2(99, 1);
  auto [mc3, se3] = v_factor_mc(5, 3, 200000, s2);
  CHECK(std::abs(mc3 - v_factor(5, 3)) < 3.0 * se3);
}

TEST_CASE("expected decoy power, first policy") {
  // n=1, l=4: sum term 1/3, gamma H4 = 25/12 -> 10 * (4/29)
  CHECK(expected_power_app1(1, 4, 1.0, 10.0) ==
        doctest::Approx(10.0 * 4.0 / 29.0).epsilon(1e-6));
  CHECK_THROWS_AS(expected_power_app1(3, 3, 1.0, 10.0), std::domain_error);
  // more channels -> less decoy power needed
  CHECK(expected_power_app1(1, 14, 1.0, 10.0) < expected_power_app1(1, 4, 1.0, 10.0));
}

TEST_CASE("expected decoy power, second policy") {
  CHECK(expected_power_app2(1, 3, 1.0, 10.0) == doctest::Approx(60.0 / 17.0).epsilon(1e-6));
  double prev = 10.0;
  for (int l = 3; l <= 12; ++l) {
    const double e = expected_power_app2(1, l, 1.0, 10.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("summation-start adjudication: claimed-minimum Monte Carlo") {
  // users claim distinct channels in index order, each taking the smallest
  // jammer-side gain among the remaining ones; the implemented k1=0 sum is
  // the closer variant, and at one user the k1=1 variant degenerates to 0
  const int n = 2, l = 6;
  RngStream s(1234, 0);
  const int draws = 200000;
  double acc = 0.0;
  for (int d = 0; d < draws; ++d) {
    std::vector<bool> used(l - 1, false);  // decoy channel already removed
    double per_user = 0.0;
    for (int u = 0; u < n; ++u) {
      // gains are independent across users, so fresh draws per channel
      double best = 1e300;
      int pick = -1;
      for (int c = 0; c < l - 1; ++c) {
        if (used[c]) continue;
        const double g = s.exponential(1.0);
        if (g < best) {
          best = g;
          pick = c;
        }
      }
      used[pick] = true;
      per_user += best;
    }
    acc += per_user / n;
  }
  const double mc = acc / draws;
  const double s_k0 = 1.0 / (2.0 * 2.0 * (l - 1)) + 1.0 / (2.0 * 1.0 * (l - 2));
  const double s_k1 = 1.0 / (2.0 * 1.0 * (l - 2));
  CHECK(std::abs(s_k0 - mc) < std::abs(s_k1 - mc));
  // single user: k1=0 gives 1/(l-1) = the true claimed minimum; k1=1 gives 0
  CHECK(expected_power_app1(1, 4, 1.0, 10.0) > 0.0);
  CHECK(expected_power_app1_alt(1, 4, 1.0, 10.0) == doctest::Approx(0.0));
}

TEST_CASE("ratio floors") {
  CHECK(ratio_app2(1, 3, 1.0) == doctest::Approx(0.5294117647).epsilon(1e-6));
  CHECK(ratio_app2(1, 3, 1.0) > 0.5);
}

TEST_CASE("second policy dominates the first on the whole grid") {
  for (int n = 1; n <= 5; ++n)
    for (int l = std::max(4, n + 1); l <= 14; ++l)
      CHECK(ratio_app2(n, l, 1.0) >= ratio_app1(n, l, 1.0));
}

TEST_CASE("ratios live in (0,1) and the ceiling dominates both policies") {
  for (int n = 1; n <= 4; ++n) {
    for (int l = n + 1; l <= 10; l += 2) {
      BoundSet b = compute_bounds(n, l, 1.0, 10.0, 1.0);
      CHECK(b.ratio_app1 > 0.0);
      CHECK(b.ratio_app1 < 1.0);
      CHECK(b.ratio_app2 > 0.0);
      CHECK(b.ratio_app2 < 1.0);
      CHECK(b.c_top >= b.c1 - 1e-12);
      CHECK(b.c_top >= b.c2 - 1e-12);
      CHECK(b.gamma > 0.0);
    }
  }
}

TEST_CASE("path-loss factor cancels bit-for-bit in the ratios") {
  for (double scale : {0.1, 1.0, 10.0}) {
    BoundSet b = compute_bounds(2, 6, 1.0, 10.0, scale);
    BoundSet ref = compute_bounds(2, 6, 1.0, 10.0, 1.0);
    CHECK(b.ratio_app1 == ref.ratio_app1);  // bitwise
    CHECK(b.ratio_app2 == ref.ratio_app2);
    // while the ETRPs themselves scale linearly
    CHECK(b.c_top == doctest::Approx(scale * ref.c_top).epsilon(1e-12));
  }
}
