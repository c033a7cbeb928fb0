#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace surveq {

// Small counter-based generator (SplitMix64). Cheap to create, so every
// task can own an independent stream.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);
  // Uniform double in [0, 1).
  double Uniform01();

 private:
  std::uint64_t state_;
};

// Hands out streams keyed by task ids. The same seed and keys always give
// the same stream, whichever thread asks and in whatever order.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng Stream(std::initializer_list<std::uint64_t> keys) const;
  // A source whose streams are all distinct from this one's.
  RandomSource Derive(std::initializer_list<std::uint64_t> keys) const;

 private:
  std::uint64_t seed_;
};

// Stable 64-bit hash of a string (FNV-1a), used to key per-item streams by
// item id.
std::uint64_t HashString(std::string_view text);

// Stream domains, so different consumers never share a stream.
namespace stream_tag {
inline constexpr std::uint64_t kSubsets = 0x5B5E7;
inline constexpr std::uint64_t kCombineTie = 0x71E;
inline constexpr std::uint64_t kReferenceTie = 0x4EF;
inline constexpr std::uint64_t kReferenceSubsets = 0x4EF5;
inline constexpr std::uint64_t kBootstrap = 0xB007;
inline constexpr std::uint64_t kGenerate = 0x6E4;
inline constexpr std::uint64_t kPointSample = 0xFFFFFFFFFFFFFFFFull;
}  // namespace stream_tag

}  // namespace surveq
