#include "csazkp/session.hpp"

#include <sys/socket.h>

#include <thread>

#include "csazkp/codec.hpp"
#include "csazkp/errors.hpp"
#include "csazkp/rng.hpp"
#include "csazkp/signature.hpp"
#include "json.hpp"

namespace csazkp {
namespace {

constexpr char kWireVersion = 0x01;
constexpr const char* kAccept = "accept";
constexpr const char* kReject = "reject";

// Thrown when the peer sends an error frame; we do not answer it with another.
struct PeerAbort : SessionError {
  using SessionError::SessionError;
};

class Channel {
 public:
  Channel(Transport& t, const SessionConfig& config, SessionResult& result)
      : t_(t), config_(config), result_(result) {}

  void send(MessageType type, std::string payload) {
    WireMessage m{type, result_.session, std::move(payload)};
    result_.frames.push_back(m);
    send_frame(t_, m);
  }

  WireMessage recv() {
    WireMessage m = recv_frame(t_, config_.frame_timeout);
    if (!bound_) {
      result_.session = m.session;
      bound_ = true;
    }
    result_.frames.push_back(m);
    if (m.session != result_.session) throw SessionError("session id mismatch");
    if (m.type == MessageType::error) throw PeerAbort("peer aborted: " + m.payload);
    return m;
  }

  WireMessage expect(MessageType type) {
    WireMessage m = recv();
    if (m.type != type) throw SessionError("expected " + to_string(type) + ", got " + to_string(m.type));
    return m;
  }

  void bind(const SessionId& id) {
    result_.session = id;
    bound_ = true;
  }

  // Best effort; the peer may already be gone.
  void try_send(MessageType type, const std::string& payload) {
    try {
      send(type, payload);
    } catch (const Error&) {
    }
  }

 private:
  Transport& t_;
  const SessionConfig& config_;
  SessionResult& result_;
  bool bound_ = false;
};

int parse_bit(const std::string& payload) {
  if (payload == "0") return 0;
  if (payload == "1") return 1;
  throw SessionError("malformed challenge bit");
}

void prover_identification(const KeyPair& key, Channel& ch, const SessionConfig& config, Rng& rng,
                           SessionResult& result) {
  HonestProver prover(key);
  for (unsigned r = 0; r < config.rounds; ++r) {
    Algebra b = prover.commit(rng);
    ch.send(MessageType::commitment, encode_compact(b));
    WireMessage m = ch.recv();
    if (m.type == MessageType::verdict) {
      result.accepted = m.payload == kAccept;
      return;
    }
    if (m.type != MessageType::challenge_bit) throw SessionError("expected challenge_bit, got " + to_string(m.type));
    const int bit = parse_bit(m.payload);
    Isomorphism delta = prover.respond(bit);
    ch.send(MessageType::response_iso, encode(delta));
    result.transcripts.push_back(Transcript1{std::move(b), bit, std::move(delta), false});
  }
  const WireMessage v = ch.expect(MessageType::verdict);
  result.accepted = v.payload == kAccept;
  for (Transcript1& t : result.transcripts) t.accepted = result.accepted;
}

void prover_protocol2(const KeyPair& key, Channel& ch, Rng& rng, SessionResult& result) {
  Commitment c = p1_commit(key.pub, rng);
  ch.send(MessageType::commitment, encode_compact(c.algebra));
  const WireMessage m = ch.expect(MessageType::p2_challenge);
  P2Challenge challenge = decode_p2_challenge(m.payload, c.algebra.dim());
  AlgElement a = p2_respond(key, c, challenge);
  ch.send(MessageType::p2_response, encode(a));
  const WireMessage v = ch.expect(MessageType::verdict);
  result.accepted = v.payload == kAccept;
  result.transcript2 = Transcript2{std::move(c.algebra), std::move(challenge), std::move(a), result.accepted};
}

bool verifier_identification(const PublicKey& pk, Channel& ch, const SessionConfig& config, Rng& rng,
                             SessionResult& result) {
  for (unsigned r = 0; r < config.rounds; ++r) {
    Algebra b = decode_algebra(ch.expect(MessageType::commitment).payload);
    const int bit = rng.bit();
    ch.send(MessageType::challenge_bit, bit ? "1" : "0");
    Isomorphism delta = decode_isomorphism(ch.expect(MessageType::response_iso).payload);
    const bool ok = p1_verify(pk, b, bit, delta);
    result.transcripts.push_back(Transcript1{std::move(b), bit, std::move(delta), ok});
    if (!ok) return false;
  }
  return true;
}

bool verifier_protocol2(const PublicKey& pk, Channel& ch, Rng& rng, SessionResult& result) {
  Algebra b = decode_algebra(ch.expect(MessageType::commitment).payload);
  if (b.dim() != pk.a0.dim()) throw DecodeError(DecodeError::Kind::dimension, 0, "commitment has the wrong dimension");
  P2Challenge challenge = p2_challenge(b, pk.height, rng);
  ch.send(MessageType::p2_challenge, encode(challenge));
  AlgElement a = decode_element(ch.expect(MessageType::p2_response).payload);
  const bool ok = p2_verify(pk, challenge.algebra, a);
  result.transcript2 = Transcript2{std::move(b), std::move(challenge), std::move(a), ok};
  return ok;
}

}  // namespace

std::string hello_payload(const PublicKey& pk, const SessionConfig& config) {
  nlohmann::ordered_json j;
  const bool p1 = config.protocol == SessionProtocol::identification;
  j["protocol"] = p1 ? "identification" : "protocol2";
  j["variant"] = to_string(pk.variant);
  j["k"] = pk.k;
  j["rounds"] = p1 ? config.rounds : 1U;
  j["hash"] = std::string(kHashName);
  j["key"] = to_hex(sha256(encode(pk)));
  return std::string(1, kWireVersion) + j.dump();
}

SessionResult run_prover_session(const KeyPair& key, Transport& transport, const SessionConfig& config, Rng& rng) {
  SessionResult result;
  Channel ch(transport, config, result);
  ch.bind(random_session_id(rng));
  try {
    if (config.protocol == SessionProtocol::protocol2 && !key.pub.public_element)
      throw UsageError("protocol 2 needs a key with a public element");
    const std::string hello = hello_payload(key.pub, config);
    ch.send(MessageType::hello, hello);
    if (ch.expect(MessageType::hello).payload != hello) throw SessionError("verifier rejected the session parameters");
    if (config.protocol == SessionProtocol::identification) {
      prover_identification(key, ch, config, rng, result);
    } else {
      prover_protocol2(key, ch, rng, result);
    }
  } catch (const PeerAbort& e) {
    result.accepted = false;
    result.error = e.what();
  } catch (const Error& e) {
    result.accepted = false;
    result.error = e.what();
    ch.try_send(MessageType::error, e.what());
  }
  return result;
}

SessionResult run_verifier_session(const PublicKey& pk, Transport& transport, const SessionConfig& config, Rng& rng) {
  SessionResult result;
  Channel ch(transport, config, result);
  bool ok = false;
  try {
    const std::string hello = hello_payload(pk, config);
    const WireMessage h = ch.expect(MessageType::hello);
    if (h.payload.empty() || h.payload[0] != kWireVersion) throw SessionError("unsupported wire version");
    if (h.payload != hello) throw SessionError("session parameters do not match");
    ch.send(MessageType::hello, hello);
    ok = config.protocol == SessionProtocol::identification ? verifier_identification(pk, ch, config, rng, result)
                                                            : verifier_protocol2(pk, ch, rng, result);
  } catch (const PeerAbort& e) {
    ok = false;
    result.error = e.what();
  } catch (const Error& e) {
    ok = false;
    result.error = e.what();
    ch.try_send(MessageType::error, e.what());
  }
  result.accepted = ok;
  ch.try_send(MessageType::verdict, ok ? kAccept : kReject);
  return result;
}

SessionResult reverify_captured(const PublicKey& pk, const std::vector<WireMessage>& frames,
                                const SessionConfig& config) {
  SessionResult result;
  result.frames = frames;
  try {
    if (frames.empty() || frames[0].type != MessageType::hello) throw SessionError("capture does not start with hello");
    result.session = frames[0].session;
    if (frames[0].payload != hello_payload(pk, config)) throw SessionError("session parameters do not match");
    std::optional<Algebra> commitment;
    int bit = -1;
    std::optional<P2Challenge> challenge;
    bool ok = true;
    for (const WireMessage& m : frames) {
      if (m.session != result.session) throw SessionError("session id mismatch");
      switch (m.type) {
        case MessageType::commitment:
          commitment = decode_algebra(m.payload);
          break;
        case MessageType::challenge_bit:
          bit = parse_bit(m.payload);
          break;
        case MessageType::response_iso: {
          if (!commitment || bit < 0) throw SessionError("response without commitment and challenge");
          Isomorphism delta = decode_isomorphism(m.payload);
          const bool round_ok = p1_verify(pk, *commitment, bit, delta);
          result.transcripts.push_back(Transcript1{std::move(*commitment), bit, std::move(delta), round_ok});
          ok = ok && round_ok;
          commitment.reset();
          bit = -1;
          break;
        }
        case MessageType::p2_challenge:
          if (!commitment) throw SessionError("challenge without commitment");
          challenge = decode_p2_challenge(m.payload, commitment->dim());
          if (!verify_isomorphism(*commitment, challenge->algebra, challenge->delta))
            throw SessionError("captured challenge is not an isomorphism");
          break;
        case MessageType::p2_response: {
          if (!commitment || !challenge) throw SessionError("response without commitment and challenge");
          AlgElement a = decode_element(m.payload);
          const bool round_ok = p2_verify(pk, challenge->algebra, a);
          result.transcript2 = Transcript2{*commitment, *challenge, std::move(a), round_ok};
          ok = ok && round_ok;
          break;
        }
        default:
          break;
      }
    }
    if (config.protocol == SessionProtocol::identification) {
      result.accepted = ok && result.transcripts.size() == config.rounds;
    } else {
      result.accepted = ok && result.transcript2.has_value();
    }
  } catch (const Error& e) {
    result.accepted = false;
    result.error = e.what();
  }
  return result;
}

std::vector<SessionResult> serve_verifier(int listen_fd, const PublicKey& pk, const SessionConfig& config,
                                          unsigned sessions, Rng& rng) {
  std::vector<SessionResult> results(sessions);
  std::vector<std::thread> workers;
  workers.reserve(sessions);
  for (unsigned s = 0; s < sessions; ++s) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      results[s].error = "accept failed";
      continue;
    }
    workers.emplace_back([&, fd, s, child = rng.fork()]() mutable {
      FdTransport t(fd, fd, true);
      results[s] = run_verifier_session(pk, t, config, child);
    });
  }
  for (std::thread& w : workers) w.join();
  return results;
}

}  // namespace csazkp
