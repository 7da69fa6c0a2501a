#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "csazkp/protocol.hpp"
#include "csazkp/wire.hpp"

namespace csazkp {

enum class SessionProtocol { identification, protocol2 };

struct SessionConfig {
  SessionProtocol protocol = SessionProtocol::identification;
  unsigned rounds = 10;  // identification only
  std::chrono::milliseconds frame_timeout = kDefaultFrameTimeout;
};

struct SessionResult {
  bool accepted = false;
  std::string error;  // empty unless the session aborted
  SessionId session{};
  std::vector<Transcript1> transcripts;
  std::optional<Transcript2> transcript2;
  std::vector<WireMessage> frames;  // sent and received, in wire order
};

/// Hello payload: version byte 0x01 followed by a canonical JSON object that
/// pins protocol, variant, k, rounds, hash and a fingerprint of the key.
std::string hello_payload(const PublicKey& pk, const SessionConfig& config);

/// Never throws on peer misbehaviour: failures end in a rejected result with
/// `error` set, after a best-effort error frame.
SessionResult run_prover_session(const KeyPair& key, Transport& transport, const SessionConfig& config, Rng& rng);
SessionResult run_verifier_session(const PublicKey& pk, Transport& transport, const SessionConfig& config, Rng& rng);

/// Recomputes the verdict from frames captured by either side.
SessionResult reverify_captured(const PublicKey& pk, const std::vector<WireMessage>& frames, const SessionConfig& config);

/// Accepts `sessions` connections and runs each verifier session on its own
/// thread with a forked rng.
std::vector<SessionResult> serve_verifier(int listen_fd, const PublicKey& pk, const SessionConfig& config,
                                          unsigned sessions, Rng& rng);

}  // namespace csazkp
