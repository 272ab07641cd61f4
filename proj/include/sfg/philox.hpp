#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace sfg {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: the output is a pure function of (key, counter), so any
/// trajectory/step pair can be generated independently of scheduling.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key) : key_(key) {}
  explicit constexpr Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr Counter operator()(Counter ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      ctr = single_round(ctr, k);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Four independent standard normals for one (trajectory, step) pair.
///
/// The counter packs the step index in the low words and the trajectory
/// index in the high words; two Box-Muller pairs turn the four 32-bit
/// outputs into normals.
inline std::array<double, 4> gaussian_quad(const Philox4x32& gen, std::uint64_t trajectory, std::uint64_t step) {
  const auto r = gen({static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                      static_cast<std::uint32_t>(trajectory), static_cast<std::uint32_t>(trajectory >> 32)});
  // Uniforms on the open interval (0, 1).
  constexpr double scale = 1.0 / 4294967296.0;
  const auto u = [&](int i) { return (static_cast<double>(r[i]) + 0.5) * scale; };
  const double rad0 = std::sqrt(-2.0 * std::log(u(0)));
  const double rad1 = std::sqrt(-2.0 * std::log(u(2)));
  const double ang0 = 2.0 * std::numbers::pi * u(1);
  const double ang1 = 2.0 * std::numbers::pi * u(3);
  return {rad0 * std::cos(ang0), rad0 * std::sin(ang0), rad1 * std::cos(ang1), rad1 * std::sin(ang1)};
}

}  // namespace sfg
