#include "mmlqg/rng.hpp"

#include <cmath>
#include <numbers>

namespace mmlqg {

NormalPair normal_pair(std::uint64_t seed, std::uint32_t stream,
                       std::uint32_t path, std::uint32_t player,
                       std::uint32_t index) {
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {index, player, path, stream};
  const auto w = Philox4x32::block(ctr, key);
  const double u1 = uniform_from(w[0], w[1]);
  const double u2 = uniform_from(w[2], w[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return NormalPair{r * std::cos(a), r * std::sin(a)};
}

double normal_at(std::uint64_t seed, std::uint32_t stream, std::uint32_t path,
                 std::uint32_t player, std::uint32_t k) {
  const NormalPair pair = normal_pair(seed, stream, path, player, k >> 1);
  return (k & 1u) ? pair.z1 : pair.z0;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = mix64(master ^ fnv1a64(tag));
  s = mix64(s ^ a);
  return mix64(s ^ b);
}

}  // namespace mmlqg
