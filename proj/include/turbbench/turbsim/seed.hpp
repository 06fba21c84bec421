#pragma once

#include <cstdint>
#include <string_view>

namespace turbbench {

// Seed derivation. Every random draw in the simulator comes from a seed built
// with these functions, so output never depends on scheduling.
//
//   splitmix64(z):  z += 0x9E3779B97F4A7C15
//                   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                   return z ^ (z >> 31)
//   mix_seed(h, v): splitmix64(h ^ splitmix64(v))
//   hash_text(s):   64-bit FNV-1a over the UTF-8 bytes
//
// Changing any of these changes every generated dataset; bump
// kDatasetVersion when doing so.
inline constexpr int kDatasetVersion = 1;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v));
}

constexpr std::uint64_t hash_text(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Seed of one (scene, L, a, b) sequence; L enters by its IEEE-754 bit pattern.
std::uint64_t sequence_seed(std::uint64_t master_seed, std::string_view scene_id, double L_km,
                            int a, int b);

// Per-frame streams: 0 drives the warp field, 1 drives the additive noise.
enum class FrameStream : std::uint64_t { Warp = 0, Noise = 1 };
std::uint64_t frame_seed(std::uint64_t sequence_seed, int frame_index, FrameStream stream);

}  // namespace turbbench
