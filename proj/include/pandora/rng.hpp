#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pandora {

// Deterministic counter-free PRNG (splitmix64). Streams are derived from
// (master seed, stream id), so worker pools can draw independently without
// sharing state and a run is reproducible for any parallelism degree.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : state_(mix(master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform double in [0, 1).
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Index drawn from an explicit probability vector (need not be normalized
  // exactly; the last index absorbs rounding slack).
  int pick(std::span<const double> probs) {
    double u = next_unit();
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      if (u < probs[i]) return static_cast<int>(i);
      u -= probs[i];
    }
    return static_cast<int>(probs.size()) - 1;
  }

  RngStream substream(std::uint64_t id) const {
    return RngStream(state_, id ^ 0xA5A5A5A5DEADBEEFULL);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace pandora
