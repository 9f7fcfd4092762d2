#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decoyjam/optimizer.hpp"
#include "decoyjam/sim.hpp"

using namespace decoyjam;

namespace {

ScenarioConfig base_cfg(int n, int l) {
  ScenarioConfig cfg;
  cfg.n_users = n;
  cfg.n_channels = l;
  return cfg;
}

ChannelState uniform_gains(int n, int l, double value = 1.0) {
  ChannelState ch;
  ch.n_users = n;
  ch.n_channels = l;
  ch.hc.assign(static_cast<std::size_t>(n) * l, value);
  ch.hj = ch.hc;
  return ch;
}

double max_ap_gain2(const ChannelState& ch) {
  double m = 0.0;
  for (int i = 0; i < ch.n_users; ++i)
    for (int c = 0; c < ch.n_channels; ++c) m = std::max(m, ch.ap_gain2(i, c));
  return m;
}

}  // namespace

TEST_CASE("single user closed form: d^2 = p_bar h'^2 / (h^2 + h'^2)") {
  ScenarioConfig cfg = base_cfg(1, 2);
  ChannelState ch = uniform_gains(1, 2);
  ch.hc = {0.3, 0.9};  // arbitrary AP gains
  OptimizationResult r = solve_full_fixed(ch, cfg, 0, {1});
  REQUIRE(r.feasible);
  CHECK(r.allocation.deceive_power(0) == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(r.allocation.comm_power(0) == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(r.method == "kkt");
}

TEST_CASE("symmetric gains: two users need p_bar/5 each, three need p_bar/10") {
  SUBCASE("two users") {
    ScenarioConfig cfg = base_cfg(2, 3);
    OptimizationResult r = solve_full(uniform_gains(2, 3), cfg);
    REQUIRE(r.feasible);
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(r.allocation.deceive_power(i) - 2.0) < 1e-9);
  }
  SUBCASE("three users") {
    ScenarioConfig cfg = base_cfg(3, 4);
    OptimizationResult r = solve_full(uniform_gains(3, 4), cfg);
    REQUIRE(r.feasible);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(r.allocation.deceive_power(i) - 1.0) < 1e-9);
  }
}

TEST_CASE("solve_modified reproduces the hand-solved systems") {
  SUBCASE("one user") {
    ScenarioConfig cfg = base_cfg(1, 2);
    ModifiedSolution s = solve_modified(uniform_gains(1, 2), cfg, 0, {1});
    CHECK(s.p[0] == doctest::Approx(5.0).epsilon(1e-12));
    // equals the full solution: no cross terms exist at one user
    OptimizationResult r = solve_full_fixed(uniform_gains(1, 2), cfg, 0, {1});
    CHECK(std::abs(s.p[0] - r.allocation.deceive_power(0)) < 1e-7);
  }
  SUBCASE("two users, all gains one") {
    ScenarioConfig cfg = base_cfg(2, 3);
    ModifiedSolution s = solve_modified(uniform_gains(2, 3), cfg, 0, {1, 2});
    CHECK(s.p[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
    CHECK(s.p[1] == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
    CHECK(s.within_cap);
    CHECK(s.nonnegative);
  }
  SUBCASE("zero data-channel gain is degenerate") {
    ScenarioConfig cfg = base_cfg(2, 3);
    ChannelState ch = uniform_gains(2, 3);
    ch.hj[0 * 3 + 1] = 0.0;  // user 0 invisible on its data channel
    CHECK_THROWS_AS(solve_modified(ch, cfg, 0, {1, 2}), std::domain_error);
  }
  SUBCASE("no decoy leverage pushes powers to p_bar and the cap flag") {
    ScenarioConfig cfg = base_cfg(2, 3);
    ChannelState ch = uniform_gains(2, 3);
    ch.hj[0 * 3 + 0] = 0.0;  // decoy-channel gains all zero
    ch.hj[1 * 3 + 0] = 0.0;
    ModifiedSolution s = solve_modified(ch, cfg, 0, {1, 2});
    CHECK(s.p[0] == doctest::Approx(cfg.p_bar).epsilon(1e-9));
    CHECK(s.p[1] == doctest::Approx(cfg.p_bar).epsilon(1e-9));
    CHECK_FALSE(s.within_cap);
  }
}

TEST_CASE("solve_modified_capped clamps and re-solves") {
  ScenarioConfig cfg = base_cfg(2, 3);
  ChannelState ch = uniform_gains(2, 3);
  ch.hj[0 * 3 + 0] = 0.05;  // weak decoy leverage forces both users high
  ch.hj[1 * 3 + 0] = 0.05;
  auto p = solve_modified_capped(ch, cfg, 0, {1, 2});
  for (double v : p) CHECK(v <= cfg.rho + 1e-9);
}

TEST_CASE("rank-one identity matches the linear solve") {
  SUBCASE("two users all gains one") {
    ScenarioConfig cfg = base_cfg(2, 3);
    CHECK(sherman_morrison_check(uniform_gains(2, 3), cfg, 0, {1, 2}) < 1e-12);
  }
  SUBCASE("one user identity") {
    ScenarioConfig cfg = base_cfg(1, 2);
    CHECK(sherman_morrison_check(uniform_gains(1, 2), cfg, 0, {1}) < 1e-12);
  }
  SUBCASE("random draws, four users") {
    ScenarioConfig cfg = base_cfg(4, 6);
    RngStream s(77, 0);
    for (int trial = 0; trial < 100; ++trial) {
      ChannelState ch = draw_channels(cfg, s);
      CHECK(sherman_morrison_check(ch, cfg, 0, {1, 2, 3, 4}) < 1e-9);
    }
  }
}

TEST_CASE("grid oracle agrees with the continuous solver") {
  SUBCASE("single user symmetric, step 0.05") {
    ScenarioConfig cfg = base_cfg(1, 2);
    ChannelState ch = uniform_gains(1, 2);
    OptimizationResult full = solve_full(ch, cfg);
    OptimizationResult grid = brute_force(ch, cfg, 0.05);
    CHECK(full.objective <= grid.objective + 1e-9);
    CHECK(grid.objective - full.objective <= 0.05 * max_ap_gain2(ch) + 1e-9);
  }
  SUBCASE("two users all gains one, step 0.1 lands exactly on p_bar/5") {
    ScenarioConfig cfg = base_cfg(2, 3);
    OptimizationResult grid = brute_force(uniform_gains(2, 3), cfg, 0.1);
    REQUIRE(grid.feasible);
    CHECK(grid.allocation.deceive_power(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(grid.allocation.deceive_power(1) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("vanishing decoy cap is infeasible when data channels are visible") {
    ScenarioConfig cfg = base_cfg(1, 2);
    cfg.rho = 1e-12;
    OptimizationResult grid = brute_force(uniform_gains(1, 2), cfg, 1e-12);
    CHECK_FALSE(grid.feasible);
  }
}

TEST_CASE("random draws: solver at least as good as the grid oracle") {
  RngStream s(123, 0);
  for (int n : {1, 2}) {
    ScenarioConfig cfg = base_cfg(n, 4);
    for (int trial = 0; trial < 20; ++trial) {
      ChannelState ch = draw_channels(cfg, s);
      OptimizationResult full = solve_full(ch, cfg);
      OptimizationResult grid = brute_force(ch, cfg, 0.05);
      if (!full.feasible) {
        CHECK_FALSE(grid.feasible);
        continue;
      }
      CHECK(full.objective <= grid.objective + 1e-7);
      CHECK(full.objective >= grid.objective - n * 0.05 * max_ap_gain2(ch) - 1e-9);
    }
  }
}

TEST_CASE("feasible solutions always capture the jammer on replay") {
  RngStream s(321, 0);
  for (int n : {1, 2, 3}) {
    ScenarioConfig cfg = base_cfg(n, 5);
    for (int trial = 0; trial < 15; ++trial) {
      ChannelState ch = draw_channels(cfg, s);
      OptimizationResult r = solve_full(ch, cfg);
      if (!r.feasible) continue;
      r.allocation.validate(cfg);
      RngStream jam(0, 0);
      auto [out, js] = run_slot(r.allocation, ch, JammerState{}, cfg, jam);
      (void)js;
      CHECK(out.zeta == 0);
    }
  }
}

TEST_CASE("linearized allocation never beats the full optimum on valid draws") {
  // dropping the amplitude cross terms shrinks the feasible set, so on any
  // draw where that solution is usable it spends at least as much and the
  // received power cannot exceed the full optimum
  RngStream s(555, 0);
  int checked = 0;
  while (checked < 100) {
    for (int n : {2, 3}) {
      ScenarioConfig cfg = base_cfg(n, n + 2);
      ChannelState ch = draw_channels(cfg, s);
      std::vector<int> comm(n);
      for (int i = 0; i < n; ++i) comm[i] = i + 1;
      ModifiedSolution mod = solve_modified(ch, cfg, 0, comm);
      if (!mod.within_cap || !mod.nonnegative) continue;
      OptimizationResult full = solve_full_fixed(ch, cfg, 0, comm);
      if (!full.feasible) continue;
      double g_mod = 0.0;
      for (int i = 0; i < n; ++i)
        g_mod += (cfg.p_bar - mod.p[i]) * ch.ap_gain2(i, comm[i]);
      CHECK(-full.objective >= g_mod - 1e-9);
      ++checked;
    }
  }
}

TEST_CASE("infeasible instances report best effort") {
  ScenarioConfig cfg = base_cfg(1, 2);
  ChannelState ch = uniform_gains(1, 2);
  ch.hj[0] = 0.0;  // no decoy leverage at all
  OptimizationResult r = solve_full(ch, cfg);
  CHECK_FALSE(r.feasible);
  CHECK(r.allocation.deceive_power(0) == doctest::Approx(cfg.rho));
  CHECK(r.method == "best-effort");
}

TEST_CASE("preconditions") {
  ScenarioConfig cfg = base_cfg(4, 9);
  CHECK_THROWS_AS(brute_force(uniform_gains(4, 9), cfg, 0.1), std::invalid_argument);
  ScenarioConfig cfg5 = base_cfg(5, 6);
  CHECK_THROWS_AS(solve_full(uniform_gains(5, 6), cfg5), std::invalid_argument);
}
