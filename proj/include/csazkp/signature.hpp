#pragma once

#include <string_view>

#include "csazkp/protocol.hpp"
#include "csazkp/rng.hpp"

namespace csazkp {

inline constexpr std::string_view kHashName = "sha256";

struct Signature {
  Algebra commitment;  // B
  AlgElement response;  // a' in C
  Digest challenge_seed{};
};

struct DerivedChallenge {
  P2Challenge challenge;
  Digest seed{};
};

/// seed = SHA-256 over length-prefixed canonical encodings of pk and B and
/// the raw message; an Rng keyed by the seed replays p2_challenge.
/// Throws DerivationError when the replayed sampler hits its retry cap.
Digest challenge_seed(const PublicKey& pk, std::string_view message, const Algebra& commitment);
DerivedChallenge derive_challenge(const PublicKey& pk, std::string_view message, const Algebra& commitment);

/// Needs a key with a public element.
Signature sign(const KeyPair& key, std::string_view message, Rng& rng);

/// Pure; any malformed signature rejects.
bool verify_signature(const PublicKey& pk, std::string_view message, const Signature& sig);

}  // namespace csazkp
