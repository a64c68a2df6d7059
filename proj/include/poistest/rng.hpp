#ifndef POISTEST_RNG_HPP
#define POISTEST_RNG_HPP

#include <cstdint>
#include <string_view>

namespace poistest {

// Stafford mix13 finalizer, also the output function of splitmix64.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Splitmix64 substream. One instance per Monte Carlo replication; streams
// are derived from (master seed, scenario key, replication index) so that
// the draw sequence is independent of execution order and thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  static RngStream substream(std::uint64_t master_seed, std::uint64_t key,
                             std::uint64_t index) {
    std::uint64_t s = mix64(master_seed ^ 0x8CB92BA72F3D8DD7ULL);
    s = mix64(s ^ key);
    s = mix64(s ^ index);
    return RngStream(s);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace poistest

#endif
