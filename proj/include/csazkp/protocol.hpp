#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "csazkp/algebra.hpp"
#include "csazkp/construction.hpp"

namespace csazkp {

class Rng;

/// Prover-side state of one round: the published commitment B and the
/// private map psi : A0 -> B.
struct Commitment {
  Algebra algebra;
  Isomorphism secret;
};

/// Fresh commitment for `pk`. Order keys use bounded unimodular basis changes
/// so every response stays an integer matrix.
Commitment p1_commit(const PublicKey& pk, Rng& rng);

/// Same, but starting from an arbitrary source algebra (used by cheaters and
/// the simulator, which commit to a presentation of A1).
Commitment commit_from(const PublicKey& pk, const Algebra& source, Rng& rng);

/// delta = psi o phi^{-bit}.
Isomorphism p1_respond(const Isomorphism& psi, const Isomorphism& phi, int bit);

/// Total: malformed or mis-shaped input rejects.
bool p1_verify(const PublicKey& pk, const Algebra& commitment, int bit, const Isomorphism& delta);
bool p1_verify(const PublicKey& pk, const AlgebraData& commitment, int bit, const Isomorphism& delta);

struct Transcript1 {
  Algebra commitment;
  int challenge = 0;
  Isomorphism response;
  bool accepted = false;
};

/// One side of Protocol 1 as seen by the verifier loop.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual Algebra commit(Rng& rng) = 0;
  virtual Isomorphism respond(int bit) = 0;
};

class HonestProver : public Prover {
 public:
  explicit HonestProver(const KeyPair& key) : key_(key) {}
  Algebra commit(Rng& rng) override;
  Isomorphism respond(int bit) override;

 private:
  const KeyPair& key_;
  std::optional<Commitment> round_;
};

/// Knows no secret. Guesses the challenge g, commits to a random
/// presentation of A_g and answers with that presentation map whatever the
/// actual challenge is.
class BitGuessingCheater : public Prover {
 public:
  explicit BitGuessingCheater(const PublicKey& pk) : pk_(pk) {}
  Algebra commit(Rng& rng) override;
  Isomorphism respond(int bit) override;
  int last_guess() const noexcept { return guess_; }

 private:
  const PublicKey& pk_;
  int guess_ = 0;
  std::optional<Commitment> round_;
};

struct IdentificationResult {
  bool accepted = false;
  std::vector<Transcript1> transcripts;
};

/// l sequential rounds with uniform challenge bits drawn from `rng`; stops at
/// the first rejected round.
IdentificationResult run_identification(const PublicKey& pk, Prover& prover, unsigned rounds, Rng& rng);
IdentificationResult run_identification(const KeyPair& key, unsigned rounds, Rng& rng);

/// delta_1^{-1} o delta_0 : A0 -> A1. Throws UsageError unless both
/// transcripts are accepting, share the commitment and carry bits 0 and 1.
Isomorphism extract_witness(const Transcript1& t0, const Transcript1& t1);

using VerifierStrategy = std::function<int(const Algebra&)>;

struct Simulation {
  Transcript1 transcript;
  int rounds_used = 0;
};

/// Rejection-sampling simulator that never sees the secret. Throws
/// SimulationError after `cap` restarts.
Simulation simulate_transcript(const PublicKey& pk, const VerifierStrategy& strategy, Rng& rng, int cap = 128);

struct P2Challenge {
  Algebra algebra;  // C
  Isomorphism delta;  // B -> C
};

/// Random presentation of B with its map, checked before it is returned.
P2Challenge p2_challenge(const Algebra& commitment, long height, Rng& rng);

/// a' = delta(psi(phi^{-1}(a))). The challenge is checked against B first;
/// throws ChallengeRejected when delta is not an isomorphism B -> C.
AlgElement p2_respond(const KeyPair& key, const Commitment& commitment, const P2Challenge& challenge);

/// minpoly over A1 of the public element equals minpoly over C of a'.
bool p2_verify(const PublicKey& pk, const Algebra& challenge_algebra, const AlgElement& response);

struct Transcript2 {
  Algebra commitment;
  P2Challenge challenge;
  AlgElement response;
  bool accepted = false;
};

Transcript2 run_protocol2(const KeyPair& key, Rng& rng);

}  // namespace csazkp
