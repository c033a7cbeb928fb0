#include "surveq/random.h"

namespace surveq {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t Combine(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = Mix(seed + 0x9E3779B97F4A7C15ull);
  for (std::uint64_t k : keys) h = Mix(h ^ Mix(k + 0x9E3779B97F4A7C15ull));
  return h;
}

}  // namespace

Rng::result_type Rng::operator()() {
  state_ += 0x9E3779B97F4A7C15ull;
  return Mix(state_);
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  // Lemire's multiply-shift with rejection; exact and portable.
  std::uint64_t x = (*this)();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::Uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

Rng RandomSource::Stream(std::initializer_list<std::uint64_t> keys) const {
  return Rng(Combine(seed_, keys));
}

RandomSource RandomSource::Derive(std::initializer_list<std::uint64_t> keys) const {
  return RandomSource(Combine(seed_ ^ 0xD1B54A32D192ED03ull, keys));
}

std::uint64_t HashString(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace surveq
