#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "decoyjam/jammer.hpp"

using namespace decoyjam;

TEST_CASE("reactive policy jams the strongest channel") {
  RngStream s(1, 1);
  JammerState j;
  CHECK(react(j, {0.5, 3.2, 1.1}, 3, 0.0, s).current_channel == 1);
}

TEST_CASE("ties break to the lowest index") {
  RngStream s(1, 1);
  CHECK(react(JammerState{}, {2.0, 2.0, 1.0}, 3, 0.0, s).current_channel == 0);
  CHECK(react(JammerState{}, {0.0, 0.0, 0.0}, 3, 0.0, s).current_channel == 0);
}

TEST_CASE("deterministic and idempotent without randomness") {
  RngStream s(7, 7);
  const std::vector<double> sensed = {1.0, 0.2, 5.0, 4.9};
  JammerState j;
  for (int i = 0; i < 10; ++i) {
    j = react(j, sensed, 4, 0.0, s);
    CHECK(j.current_channel == 2);
  }
}

TEST_CASE("a strictly dominant decoy channel is always jammed") {
  RngStream s(3, 3);
  for (int v = 0; v < 5; ++v) {
    std::vector<double> sensed(5, 1.0);
    sensed[v] = 1.0 + 1e-9;
    CHECK(react(JammerState{}, sensed, 5, 0.0, s).current_channel == v);
  }
}

TEST_CASE("sensed length must match the channel count") {
  RngStream s(1, 1);
  CHECK_THROWS_AS(react(JammerState{}, {1.0, 2.0}, 3, 0.0, s), std::invalid_argument);
}

TEST_CASE("random override hits every channel eventually") {
  RngStream s(5, 5);
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 4000; ++i)
    ++hits[react(JammerState{}, {9.0, 0.0, 0.0, 0.0}, 4, 1.0, s).current_channel];
  for (int c = 0; c < 4; ++c) CHECK(hits[c] > 800);  // uniform would give ~1000
}
