#pragma once

#include <cstdint>

namespace recsim {

// Splittable counter-based stream keyed by a 64-bit state. Draws are pure
// functions of (key, slot), so any draw can be addressed in O(1) without
// generating its predecessors; fold_in(n) derives the per-index substream
// used for arrival n. Uniform draws are bit-exact integer arithmetic.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t base_seed) : key_(mix(base_seed ^ kDomain)) {}

  SeedStream fold_in(std::uint64_t n) const {
    return SeedStream(FromKey{}, mix(key_ ^ mix(n + kFoldTag)));
  }

  // Raw 64-bit word of draw slot i.
  std::uint64_t word(std::uint64_t slot) const {
    return mix(key_ + (slot + 1) * kGamma);
  }

  // Uniform on the open interval (0, 1): ((w >> 11) + 0.5) * 2^-53.
  double uniform_at(std::uint64_t slot) const {
    return (static_cast<double>(word(slot) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard exponential from slot i.
  double exponential_at(std::uint64_t slot) const;

  // Sequential interface over the slot counter.
  double next_uniform() { return uniform_at(ctr_++); }
  double next_exponential() { return exponential_at(ctr_++); }

  std::uint64_t key() const { return key_; }

 private:
  struct FromKey {};
  SeedStream(FromKey, std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kDomain = 0x72656373696D3164ULL;
  static constexpr std::uint64_t kFoldTag = 0xA24BAED4963EE407ULL;
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

// Parses a decimal or 0x-prefixed hexadecimal 64-bit seed.
std::uint64_t parse_seed(const char* text);

}  // namespace recsim
