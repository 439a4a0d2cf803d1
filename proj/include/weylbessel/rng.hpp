#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

/**
 * \file
 * \brief Counter-based random streams (Philox4x32-10) with per-path independence.
 *
 * A stream is identified by (master seed, stream id). Block j of stream s is
 * Philox(key = seed, counter = (j, s)), so every path's draws depend only on
 * its own index and never on scheduling.
 */

namespace weylbessel {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Block single_round(const Block& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Standard normal draws from one Philox stream (Box-Muller, two normals per block).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream_id) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    if (cursor_ >= 2) refill();
    return uniforms_[cursor_++];
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  void refill() {
    const Philox4x32::Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = Philox4x32::generate(ctr, key_);
    ++block_;
    for (int i = 0; i < 2; ++i) {
      const std::uint64_t bits = (static_cast<std::uint64_t>(out[2 * i]) << 32) | out[2 * i + 1];
      uniforms_[i] = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }
    cursor_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> uniforms_{};
  int cursor_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace weylbessel
