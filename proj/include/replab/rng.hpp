#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace replab {

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every draw is a pure function of (seed, stream, step, slot), so ensemble
// members can be generated in any order, on any number of threads, and still
// reproduce bit-identically for a fixed seed.
class CounterRng {
 public:
  // One Philox block: 128-bit counter, 64-bit key, 10 rounds, 4x32-bit out.
  static std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                            std::uint64_t stream,
                                            std::uint64_t step,
                                            std::uint32_t slot) {
    std::uint32_t c0 = static_cast<std::uint32_t>(step);
    std::uint32_t c1 = static_cast<std::uint32_t>(step >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream);
    std::uint32_t c3 = slot + static_cast<std::uint32_t>(stream >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
  }

  // Uniform double in (0, 1] built from two 32-bit words (53 random bits).
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t w = (std::uint64_t{hi} << 32) | lo;
    return static_cast<double>((w >> 11) + 1) * (1.0 / 9007199254740992.0);
  }

  // Two standard normals per block via Box-Muller.
  static std::array<double, 2> normal_pair(std::uint64_t seed,
                                           std::uint64_t stream,
                                           std::uint64_t step,
                                           std::uint32_t slot) {
    const auto w = block(seed, stream, step, slot);
    const double u1 = to_unit(w[0], w[1]);
    const double u2 = to_unit(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  // Fills `out` with standard normals; component i is keyed by
  // (seed, stream, step, i) through the block/lane split.
  static void fill_normals(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t step, Eigen::Ref<Eigen::VectorXd> out) {
    const Eigen::Index n = out.size();
    for (Eigen::Index i = 0; i < n; i += 2) {
      const auto z =
          normal_pair(seed, stream, step, static_cast<std::uint32_t>(i / 2));
      out[i] = z[0];
      if (i + 1 < n) out[i + 1] = z[1];
    }
  }
};

}  // namespace replab
