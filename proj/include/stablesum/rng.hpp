#pragma once

// Deterministic, replica-keyed random streams.
//
// Every Monte Carlo replica owns an independent SplitMix64-style generator
// whose state and increment are both derived from (seed, replica) by a strong
// 64-bit mixer.  A replica's draw sequence therefore depends only on the pair
// (seed, replica) -- never on thread count, scheduling, or the order replicas
// are processed -- which is what makes ensemble runs bit-reproducible.

#include <cmath>
#include <cstdint>

namespace stablesum {

namespace detail {

/// Finalizing 64-bit mixer (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: state advances by a per-stream odd increment and
/// each output is the mixed state.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}

  RandomStream(std::uint64_t seed, std::uint64_t replica) {
    const std::uint64_t a = detail::mix64(seed ^ 0x8f462907f470ae31ULL);
    const std::uint64_t b = detail::mix64(replica ^ 0xd1b54a32d192ed03ULL);
    state_ = detail::mix64(a ^ (b * 0xe7037ed1a0b428dbULL));
    gamma_ = detail::mix64(b ^ (a * 0xa0761d6478bd642fULL)) | 1ULL;  // odd increment
  }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1): rejects exact zeros (probability 2^-53 per draw).
  double next_open() {
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    return u;
  }

  /// Standard normal via Box-Muller; the paired value is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t gamma_ = 1;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace stablesum
