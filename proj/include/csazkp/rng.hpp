#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace csazkp {

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of the concatenation of `parts`.
Digest sha256(std::span<const std::string_view> parts);
Digest sha256(std::string_view data);
std::string to_hex(std::span<const std::uint8_t> bytes);
std::optional<Digest> digest_from_hex(std::string_view hex);

/// Deterministic generator: SHA-256 in counter mode over a 32-byte key.
/// Satisfies UniformRandomBitGenerator. Every randomized routine takes one of
/// these explicitly; there is no global random state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Digest& key);
  explicit Rng(std::uint64_t seed);

  /// Seeded from CSAZKP_SEED when set, otherwise from std::random_device.
  static Rng from_environment();
  static Rng from_entropy();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on the closed interval [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  int bit() { return static_cast<int>(next_u64() & 1U); }
  void fill(std::span<std::uint8_t> out);

  /// Independent child stream; the parent advances by one block.
  Rng fork();

 private:
  void refill();

  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = 32;
};

}  // namespace csazkp
