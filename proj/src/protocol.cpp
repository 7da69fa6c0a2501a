#include "csazkp/protocol.hpp"

#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/rng.hpp"

namespace csazkp {
namespace {

const Algebra& side(const PublicKey& pk, int bit) { return bit == 0 ? pk.a0 : pk.a1; }

bool is_unimodular(const RatMatrix& m) {
  if (!m.is_square() || !m.is_integral()) return false;
  const Rational d = determinant(m);
  return d == 1 || d == -1;
}

}  // namespace

Commitment commit_from(const PublicKey& pk, const Algebra& source, Rng& rng) {
  Presentation p = pk.variant == Variant::order && pk.order
                       ? random_unimodular_presentation(source, pk.order->bound, rng)
                       : random_presentation(source, pk.height, rng);
  return Commitment{std::move(p.algebra), std::move(p.iso)};
}

Commitment p1_commit(const PublicKey& pk, Rng& rng) { return commit_from(pk, pk.a0, rng); }

Isomorphism p1_respond(const Isomorphism& psi, const Isomorphism& phi, int bit) {
  if (bit == 0) return psi;
  if (bit != 1) throw UsageError("p1_respond: challenge must be 0 or 1");
  return compose_iso(psi, invert_iso(phi));
}

bool p1_verify(const PublicKey& pk, const Algebra& commitment, int bit, const Isomorphism& delta) {
  if (bit != 0 && bit != 1) return false;
  const Algebra& source = side(pk, bit);
  const std::size_t m = source.dim();
  if (commitment.dim() != m || delta.matrix.rows() != m || delta.matrix.cols() != m) return false;
  if (pk.variant == Variant::order) {
    if (!commitment.is_integral() || !is_unimodular(delta.matrix)) return false;
  }
  try {
    return verify_isomorphism(source, commitment, delta);
  } catch (const Error&) {
    return false;
  }
}

bool p1_verify(const PublicKey& pk, const AlgebraData& commitment, int bit, const Isomorphism& delta) {
  if (commitment.dim != side(pk, bit == 1 ? 1 : 0).dim()) return false;
  try {
    return p1_verify(pk, new_algebra(commitment), bit, delta);
  } catch (const Error&) {
    return false;
  }
}

Algebra HonestProver::commit(Rng& rng) {
  round_ = p1_commit(key_.pub, rng);
  return round_->algebra;
}

Isomorphism HonestProver::respond(int bit) {
  if (!round_) throw UsageError("respond called before commit");
  Isomorphism delta = p1_respond(round_->secret, key_.secret_phi, bit);
  round_.reset();
  return delta;
}

Algebra BitGuessingCheater::commit(Rng& rng) {
  guess_ = rng.bit();
  round_ = commit_from(pk_, side(pk_, guess_), rng);
  return round_->algebra;
}

Isomorphism BitGuessingCheater::respond(int) {
  if (!round_) throw UsageError("respond called before commit");
  Isomorphism delta = std::move(round_->secret);
  round_.reset();
  return delta;
}

IdentificationResult run_identification(const PublicKey& pk, Prover& prover, unsigned rounds, Rng& rng) {
  if (rounds < 1) throw UsageError("run_identification: need at least one round");
  IdentificationResult result;
  result.transcripts.reserve(rounds);
  for (unsigned r = 0; r < rounds; ++r) {
    Algebra b = prover.commit(rng);
    const int bit = rng.bit();
    Isomorphism delta = prover.respond(bit);
    const bool ok = p1_verify(pk, b, bit, delta);
    result.transcripts.push_back(Transcript1{std::move(b), bit, std::move(delta), ok});
    if (!ok) return result;
  }
  result.accepted = true;
  return result;
}

IdentificationResult run_identification(const KeyPair& key, unsigned rounds, Rng& rng) {
  HonestProver prover(key);
  return run_identification(key.pub, prover, rounds, rng);
}

Isomorphism extract_witness(const Transcript1& t0, const Transcript1& t1) {
  if (!t0.accepted || !t1.accepted) throw UsageError("extract_witness: transcripts must be accepting");
  if (t0.challenge != 0 || t1.challenge != 1) throw UsageError("extract_witness: need challenges 0 and 1");
  if (!(t0.commitment == t1.commitment)) throw UsageError("extract_witness: commitments differ");
  return compose_iso(invert_iso(t1.response), t0.response);
}

Simulation simulate_transcript(const PublicKey& pk, const VerifierStrategy& strategy, Rng& rng, int cap) {
  for (int round = 1; round <= cap; ++round) {
    const int i = rng.bit();
    Commitment c = commit_from(pk, side(pk, i), rng);
    const int b = strategy(c.algebra);
    if (b == i) return Simulation{Transcript1{std::move(c.algebra), i, std::move(c.secret), true}, round};
  }
  throw SimulationError("simulator exhausted " + std::to_string(cap) + " restarts");
}

P2Challenge p2_challenge(const Algebra& commitment, long height, Rng& rng) {
  Presentation p = random_presentation(commitment, height, rng);
  if (!verify_isomorphism(commitment, p.algebra, p.iso)) throw StructuralError("p2_challenge: self-check failed");
  return P2Challenge{std::move(p.algebra), std::move(p.iso)};
}

AlgElement p2_respond(const KeyPair& key, const Commitment& commitment, const P2Challenge& challenge) {
  if (!key.pub.public_element) throw UsageError("p2_respond: key has no public element");
  const std::size_t m = commitment.algebra.dim();
  if (challenge.algebra.dim() != m || challenge.delta.matrix.rows() != m || challenge.delta.matrix.cols() != m)
    throw ChallengeRejected("challenge has the wrong dimension");
  bool ok = false;
  try {
    ok = verify_isomorphism(commitment.algebra, challenge.algebra, challenge.delta);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) throw ChallengeRejected("challenge map is not an isomorphism of the commitment");
  const AlgElement in_a0 = apply(invert_iso(key.secret_phi), *key.pub.public_element);
  return apply(challenge.delta, apply(commitment.secret, in_a0));
}

bool p2_verify(const PublicKey& pk, const Algebra& challenge_algebra, const AlgElement& response) {
  if (!pk.public_element) return false;
  if (challenge_algebra.dim() != pk.a1.dim() || response.size() != challenge_algebra.dim()) return false;
  return minimal_polynomial(pk.a1, *pk.public_element) == minimal_polynomial(challenge_algebra, response);
}

Transcript2 run_protocol2(const KeyPair& key, Rng& rng) {
  Commitment c = p1_commit(key.pub, rng);
  P2Challenge ch = p2_challenge(c.algebra, key.pub.height, rng);
  AlgElement a = p2_respond(key, c, ch);
  const bool ok = p2_verify(key.pub, ch.algebra, a);
  return Transcript2{std::move(c.algebra), std::move(ch), std::move(a), ok};
}

}  // namespace csazkp
