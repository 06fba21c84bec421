#include "turbbench/turbsim/seed.hpp"

#include <bit>

namespace turbbench {

std::uint64_t sequence_seed(std::uint64_t master_seed, std::string_view scene_id, double L_km,
                            int a, int b) {
  std::uint64_t h = mix_seed(master_seed, hash_text(scene_id));
  h = mix_seed(h, std::bit_cast<std::uint64_t>(L_km));
  h = mix_seed(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(a)));
  return mix_seed(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(b)));
}

std::uint64_t frame_seed(std::uint64_t sequence_seed, int frame_index, FrameStream stream) {
  const std::uint64_t h =
      mix_seed(sequence_seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(frame_index)));
  return mix_seed(h, static_cast<std::uint64_t>(stream));
}

}  // namespace turbbench
