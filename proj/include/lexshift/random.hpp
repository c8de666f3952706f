#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lexshift {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace detail

/// Derives an independent substream seed from a root seed, a label naming the
/// consumer, and an index (sample number, chain number, replicate, ...).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                                                  std::uint64_t index = 0) {
  std::uint64_t h = detail::splitmix64(root ^ detail::fnv1a(label));
  return detail::splitmix64(h + detail::splitmix64(index));
}

[[nodiscard]] inline Rng make_rng(std::uint64_t root, std::string_view label,
                                  std::uint64_t index = 0) {
  return Rng{derive_seed(root, label, index)};
}

}  // namespace lexshift
