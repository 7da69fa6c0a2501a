#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace csazkp {

class Rng;

enum class MessageType : std::uint8_t {
  hello = 1,
  commitment = 2,
  challenge_bit = 3,
  response_iso = 4,
  p2_challenge = 5,
  p2_response = 6,
  verdict = 7,
  error = 8,
};

std::string to_string(MessageType t);

using SessionId = std::array<std::uint8_t, 16>;

SessionId random_session_id(Rng& rng);

inline constexpr std::uint32_t kMaxFrameBytes = 64U << 20U;
inline constexpr std::chrono::milliseconds kDefaultFrameTimeout{30000};

/// Frame body: type byte, 16-byte session id, payload.
struct WireMessage {
  MessageType type = MessageType::hello;
  SessionId session{};
  std::string payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

std::string encode_message(const WireMessage& m);
/// Throws SessionError on a short body or unknown type byte.
WireMessage decode_message(std::string_view body);

/// Ordered reliable byte stream. Implementations throw SessionError on
/// timeout, EOF or I/O failure.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void write_all(std::string_view bytes) = 0;
  /// Reads exactly n bytes before `deadline`.
  virtual std::string read_exact(std::size_t n, std::chrono::steady_clock::time_point deadline) = 0;
};

/// Pipe or socket descriptors; optionally closes them on destruction.
class FdTransport : public Transport {
 public:
  FdTransport(int read_fd, int write_fd, bool owns = false);
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void write_all(std::string_view bytes) override;
  std::string read_exact(std::size_t n, std::chrono::steady_clock::time_point deadline) override;

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
};

/// Replays a fixed input and records everything written.
class BufferTransport : public Transport {
 public:
  explicit BufferTransport(std::string input = {}) : input_(std::move(input)) {}
  void write_all(std::string_view bytes) override { output_.append(bytes); }
  std::string read_exact(std::size_t n, std::chrono::steady_clock::time_point deadline) override;
  const std::string& output() const noexcept { return output_; }

 private:
  std::string input_;
  std::size_t pos_ = 0;
  std::string output_;
};

/// 4-byte big-endian length followed by the message body.
std::string frame_bytes(const WireMessage& m);
void send_frame(Transport& t, const WireMessage& m);
/// Enforces kMaxFrameBytes before reading the body and a per-frame timeout.
WireMessage recv_frame(Transport& t, std::chrono::milliseconds timeout = kDefaultFrameTimeout);

/// "host:port" helpers (IPv4/IPv6 via getaddrinfo). Throw SessionError.
int connect_tcp(const std::string& address);
int listen_tcp(const std::string& address, int backlog = 16);
/// Port actually bound (useful with port 0).
int bound_port(int listen_fd);

}  // namespace csazkp
