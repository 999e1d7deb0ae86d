#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mmlqg {

// Counter-based random numbers (Philox4x32-10). Every normal variate is a
// pure function of (seed, stream, path, player, index), so results do not
// depend on thread scheduling or worker count.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Distinguishes independent uses of the same (path, player) coordinates.
enum RngStream : std::uint32_t {
  kStreamInitialState = 1,
  kStreamIncrements = 2,
};

// Uniform double strictly inside (0,1) from two 32-bit words: a 52-bit
// integer scaled into [2^-53, 1 - 2^-53]. Both endpoints are exactly
// representable, so the value can never round to 0 or 1.
inline double uniform_from(std::uint32_t lo, std::uint32_t hi) {
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi) << 32) | static_cast<std::uint64_t>(lo);
  return static_cast<double>(bits >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

// Box-Muller pair from one Philox block.
struct NormalPair {
  double z0, z1;
};

NormalPair normal_pair(std::uint64_t seed, std::uint32_t stream,
                       std::uint32_t path, std::uint32_t player,
                       std::uint32_t index);

// One standard normal indexed by `k`; consecutive k share a Philox block
// (k/2) and take the two Box-Muller components in turn.
double normal_at(std::uint64_t seed, std::uint32_t stream, std::uint32_t path,
                 std::uint32_t player, std::uint32_t k);

// Documented sub-run seed derivation: FNV-1a over the tag, then a splitmix64
// finalizer folded with the two numeric discriminators. Used as
// derive_seed(master, subcommand, N, deviation_id).
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace mmlqg
