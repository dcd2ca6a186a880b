#pragma once

#include <array>
#include <cstdint>

namespace mablab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A block is a pure function of (counter, key), which is what lets every
/// table cell and every seed-stream slot be addressed directly instead of
/// being drawn in sequence.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  static constexpr Key key_from(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Key domains. Cells, seed-stream slots and derived seeds never share a
/// counter, so perturbing one cannot move another.
enum class KeyDomain : std::uint32_t {
  kTableCell = 1,
  kSeedStream = 2,
  kSeedDerivation = 3,
  kSweep = 4,
};

/// Uniform in the open interval (0,1) built from the first 53 bits of the
/// block for (domain, a, b, c) under `seed`.
inline double keyed_uniform(std::uint64_t seed, KeyDomain domain, std::uint32_t a,
                            std::uint32_t b, std::uint32_t c) noexcept {
  const auto out = Philox4x32::block({static_cast<std::uint32_t>(domain), a, b, c},
                                     Philox4x32::key_from(seed));
  const std::uint64_t bits = ((std::uint64_t{out[0]} << 32) | out[1]) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

/// 64-bit child seed, e.g. the seed of repetition `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                 std::uint32_t stream = 0) noexcept {
  const auto out = Philox4x32::block(
      {static_cast<std::uint32_t>(KeyDomain::kSeedDerivation), static_cast<std::uint32_t>(index),
       static_cast<std::uint32_t>(index >> 32), stream},
      Philox4x32::key_from(seed));
  return (std::uint64_t{out[0]} << 32) | out[1];
}

}  // namespace mablab
