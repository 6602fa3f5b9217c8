#ifndef PARSMD_RANDOM_HPP
#define PARSMD_RANDOM_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace parsmd {

// Philox4x32-10 block function (Salmon et al., SC'11). A pure function of
// (counter, key); used as the only source of randomness in the library.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// Identifies one SMD replicate. Distinct (trial, replicate) pairs under the
// same master seed address disjoint regions of the Philox counter space.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t trial = 0;
  std::uint32_t replicate = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

// Counter-based stream for a single (replicate, iteration) cell. Construction
// is O(1), so a fresh stream is opened for every SMD iteration and the draws
// of iteration k never depend on how many draws iteration k-1 consumed.
//
// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(const StreamKey& key, std::uint32_t iteration)
      : key_{static_cast<std::uint32_t>(key.master_seed),
             static_cast<std::uint32_t>(key.master_seed >> 32)},
        trial_(key.trial),
        replicate_(key.replicate),
        iteration_(iteration) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint32_t next_u32() {
    if (used_ == 4) {
      buffer_ = Philox4x32::block({trial_, replicate_, iteration_, block_++}, key_);
      used_ = 0;
    }
    return buffer_[used_++];
  }

  Philox4x32::Key key_;
  std::uint32_t trial_;
  std::uint32_t replicate_;
  std::uint32_t iteration_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace parsmd

#endif  // PARSMD_RANDOM_HPP
