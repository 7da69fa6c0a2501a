#include "csazkp/rng.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>

#include "csazkp/errors.hpp"

namespace csazkp {

Digest sha256(std::span<const std::string_view> parts) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest initialisation failed");
  }
  for (auto part : parts) {
    if (EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1) throw Error("sha256: update failed");
  }
  Digest out{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw Error("sha256: finalisation failed");
  }
  return out;
}

Digest sha256(std::string_view data) {
  const std::string_view parts[] = {data};
  return sha256(parts);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) return std::nullopt;
  Digest out{};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;  // upper case is not canonical
  };
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Rng::Rng(const Digest& key) : key_(key) {}

Rng::Rng(std::uint64_t seed) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(seed >> (56 - 8 * i));
  const std::string_view parts[] = {"csazkp-seed", std::string_view(buf, 8)};
  key_ = sha256(parts);
}

Rng Rng::from_entropy() {
  std::random_device rd;
  Digest key{};
  for (std::size_t i = 0; i < key.size(); i += 4) {
    const auto word = rd();
    for (std::size_t j = 0; j < 4; ++j) key[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return Rng(key);
}

Rng Rng::from_environment() {
  if (const char* env = std::getenv("CSAZKP_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return Rng(static_cast<std::uint64_t>(seed));
  }
  return from_entropy();
}

void Rng::refill() {
  char ctr[8];
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<char>(counter_ >> (56 - 8 * i));
  ++counter_;
  const std::string_view parts[] = {
      std::string_view(reinterpret_cast<const char*>(key_.data()), key_.size()), std::string_view(ctr, 8)};
  block_ = sha256(parts);
  used_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (used_ + 8 > block_.size()) refill();
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = v << 8 | block_[used_ + i];
  used_ += 8;
  return v;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw UsageError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
  const std::uint64_t range = span + 1;
  // Reject the top partial bucket so every value is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v % range);
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ >= block_.size()) refill();
    b = block_[used_++];
  }
}

Rng Rng::fork() {
  Digest child{};
  fill(child);
  return Rng(child);
}

}  // namespace csazkp
