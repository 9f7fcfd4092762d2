#ifndef DECOYJAM_RNG_HPP
#define DECOYJAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace decoyjam {

// Seeded substream generator. Substreams are derived from (seed, stream_id)
// so that independent trials never share a generator. Exponential draws use
// the inverse CDF so every draw consumes exactly one 64-bit word; the
// shared-stream learning mode relies on that fixed consumption.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : gen_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream_id)) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % un);
  }

  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace decoyjam

#endif
