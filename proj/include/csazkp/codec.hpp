#pragma once

#include <string>
#include <string_view>

#include "csazkp/construction.hpp"
#include "csazkp/protocol.hpp"
#include "csazkp/signature.hpp"

namespace csazkp {

// Canonical text encodings. Structured values are JSON objects with a fixed
// key order and no whitespace; rationals are "num/den" strings. Decoders are
// strict: anything that does not re-encode to the same bytes is rejected
// with a typed DecodeError.

inline constexpr std::size_t kMaxAlgebraDim = 64;
inline constexpr std::size_t kMaxMatrixSide = 64;
inline constexpr std::size_t kMaxNesting = 16;

std::string encode(const Rational& q);
std::string encode(const RatMatrix& m);
/// Dense form; this is the only form used for hashing.
std::string encode(const Algebra& a);
/// Sparse form when at least two thirds of gamma is zero, dense otherwise.
std::string encode_compact(const Algebra& a);
std::string encode(const AlgElement& x);
std::string encode(const Isomorphism& f);
std::string encode(const PublicKey& pk);
std::string encode_secret(const KeyPair& key);
std::string encode(const Signature& sig);
std::string encode(const Transcript1& t);
std::string encode(const Transcript2& t);
std::string encode(const P2Challenge& c);

Rational decode_rational(std::string_view text);
RatMatrix decode_matrix(std::string_view text);
/// Accepts both the dense and the sparse form; the result is validated.
Algebra decode_algebra(std::string_view text);
AlgElement decode_element(std::string_view text);
Isomorphism decode_isomorphism(std::string_view text);
PublicKey decode_public_key(std::string_view text);
/// Returns phi; `pk` pins the expected dimension.
Isomorphism decode_secret_key(std::string_view text, const PublicKey& pk);
Signature decode_signature(std::string_view text);
Transcript1 decode_transcript1(std::string_view text);
Transcript2 decode_transcript2(std::string_view text);
/// `expected_dim` pins the algebra dimension (0 = any).
P2Challenge decode_p2_challenge(std::string_view text, std::size_t expected_dim);

}  // namespace csazkp
