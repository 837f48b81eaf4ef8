#pragma once

// Stateless counter-based uniforms: the n-th draw under a key is a pure
// function of (key, n), so parallel samplers never share generator state.

#include <cstdint>

namespace dioph {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(splitmix64(key) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform on [0, 1) with 53 random bits.
inline constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(counter_bits(key, counter) >> 11) * 0x1.0p-53;
}

}  // namespace dioph
