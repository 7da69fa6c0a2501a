#include "csazkp/signature.hpp"

#include <array>
#include <string>

#include "csazkp/codec.hpp"
#include "csazkp/errors.hpp"

namespace csazkp {
namespace {

constexpr std::string_view kDomain = "csazkp-fiat-shamir-v1";

std::string length_prefix(std::size_t n) {
  std::string out(8, '\0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>(n & 0xFFU);
    n >>= 8U;
  }
  return out;
}

}  // namespace

Digest challenge_seed(const PublicKey& pk, std::string_view message, const Algebra& commitment) {
  const std::string pk_bytes = encode(pk);
  const std::string b_bytes = encode(commitment);
  const std::string l1 = length_prefix(pk_bytes.size());
  const std::string l2 = length_prefix(b_bytes.size());
  const std::string l3 = length_prefix(message.size());
  const std::array<std::string_view, 7> parts{kDomain, l1, pk_bytes, l2, b_bytes, l3, message};
  return sha256(parts);
}

DerivedChallenge derive_challenge(const PublicKey& pk, std::string_view message, const Algebra& commitment) {
  const Digest seed = challenge_seed(pk, message, commitment);
  Rng rng(seed);
  try {
    return DerivedChallenge{p2_challenge(commitment, pk.height, rng), seed};
  } catch (const RandomnessError& e) {
    throw DerivationError(std::string("challenge derivation failed: ") + e.what());
  }
}

Signature sign(const KeyPair& key, std::string_view message, Rng& rng) {
  if (!key.pub.public_element) throw UsageError("sign: key has no public element");
  Commitment c = p1_commit(key.pub, rng);
  DerivedChallenge d = derive_challenge(key.pub, message, c.algebra);
  AlgElement response = p2_respond(key, c, d.challenge);
  return Signature{std::move(c.algebra), std::move(response), d.seed};
}

bool verify_signature(const PublicKey& pk, std::string_view message, const Signature& sig) {
  if (!pk.public_element) return false;
  if (sig.commitment.dim() != pk.a0.dim() || sig.response.size() != sig.commitment.dim()) return false;
  try {
    const DerivedChallenge d = derive_challenge(pk, message, sig.commitment);
    if (d.seed != sig.challenge_seed) return false;
    if (!verify_isomorphism(sig.commitment, d.challenge.algebra, d.challenge.delta)) return false;
    return p2_verify(pk, d.challenge.algebra, sig.response);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace csazkp
