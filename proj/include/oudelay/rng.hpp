#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace oud {

/// SplitMix64 step; used to derive independent stream seeds from key tuples.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(mix_key(a, b) ^ (0xc2b2ae3d27d4eb4fULL + c));
}

/// Standard normal stream with a platform-independent Box-Muller transform.
/// Streams are keyed, never shared, so results do not depend on the order
/// in which parallel workers consume them.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : eng_(key) {}
  NormalStream(std::uint64_t a, std::uint64_t b, std::uint64_t c)
      : eng_(mix_key(a, b, c)) {}

  /// Uniform in (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace oud
