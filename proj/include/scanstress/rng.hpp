#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace scanstress {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele/Lea/Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Seed for one (frame, module) slot. Keyed by frame index, not arrival
// order, so the result is independent of worker scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t global_seed,
                                    std::uint64_t frame_index,
                                    std::uint64_t module_ordinal) {
  std::uint64_t h = mix64(global_seed + kGolden64);
  h = mix64(h ^ (frame_index + kGolden64));
  h = mix64(h ^ (module_ordinal + 0xD1B54A32D192ED03ull));
  return h;
}

// Counter-based splitmix64 stream. Streams with distinct (seed, key) are
// statistically independent, which is what lets per-point keys make every
// kernel schedule-invariant: point i always sees the same draws no matter
// how the loop is split across threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t key = 0)
      : state_(mix64(seed ^ mix64(key + kGolden64))) {}

  std::uint64_t next_u64() {
    state_ += kGolden64;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_unit_open() { return 1.0 - next_unit(); }

 private:
  std::uint64_t state_;
};

// Gaussian sampling is fixed to the trigonometric Box-Muller transform so
// a given seed reproduces the same stream on every run of this build.
// Consumes exactly two uniforms, yields two independent N(0,1) values.
struct NormalPair {
  double z0;
  double z1;
};

inline NormalPair next_normal_pair(RandomStream& stream) {
  const double u1 = stream.next_unit_open();
  const double u2 = stream.next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Three i.i.d. N(0,1) components; consumes four uniforms (one value of the
// second pair is discarded so the per-point draw count stays fixed).
inline Eigen::Vector3d next_normal3(RandomStream& stream) {
  const NormalPair a = next_normal_pair(stream);
  const NormalPair b = next_normal_pair(stream);
  return {a.z0, a.z1, b.z0};
}

}  // namespace scanstress
